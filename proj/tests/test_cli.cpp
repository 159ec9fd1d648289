#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {
struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string("\"") + FISUB_CLI + "\" " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), p)) > 0;) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

bool contains(const std::string& s, const std::string& what) { return s.find(what) != std::string::npos; }

int count_lines(const std::string& s, const std::string& prefix) {
  int n = 0;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) n += l.rfind(prefix, 0) == 0;
  return n;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("fisub_cli_test_" + name)).string();
}

std::string write_file(const std::string& name, const std::string& body) {
  const std::string p = temp_path(name);
  std::ofstream(p) << body;
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}
}  // namespace

TEST(Cli, VerifyAllAnalytic) {
  const auto r = run("verify --family all --tier analytic");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(count_lines(r.out, "summary:"), 1);
  int records = 0;
  std::istringstream in(r.out);
  for (std::string l; std::getline(in, l);) records += contains(l, "tier=analytic") && contains(l, " PASS");
  EXPECT_EQ(records, 25);
}

TEST(Cli, VerifyBrokenConfigFails) {
  const auto cfg = write_file("broken.ini", "[E5]\nn = 1\na1 = 1\nk = 1\nb2 = 0.75\n");
  const auto r = run("verify --family E5 --config \"" + cfg + "\"");
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.out, "FAIL")) << r.out;
  EXPECT_TRUE(contains(r.out, "condition violated")) << r.out;
}

TEST(Cli, VerifyUsageErrors) {
  EXPECT_EQ(run("verify --family nope").code, 2);
  EXPECT_EQ(run("verify --tier sideways").code, 2);
  const auto hex = write_file("hex.ini", "[E5]\nb1 = 0x10\n");
  EXPECT_EQ(run("verify --family E5 --config \"" + hex + "\"").code, 2);
  EXPECT_EQ(run("verify --family E5 --config /nonexistent.ini").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST(Cli, VerifyNumericAndNegative) {
  const auto r = run("verify --family RPP --tier both --negative");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "tier=numeric")) << r.out;
  const auto n = run("verify --family E5 --negative");
  EXPECT_EQ(n.code, 0) << n.out;
  EXPECT_EQ(count_lines(n.out, "E5 control"), 2) << n.out;
  const auto rl = run("verify --family 3s2 --tier numeric");
  EXPECT_TRUE(contains(rl.out, "SKIP")) << rl.out;
}

TEST(Cli, SubspaceVerdicts) {
  const auto ok = run("subspace --equation RE1 --basis \"1,x^\xCE\xB2,E\xCE\xB2(1\xC2\xB7x^\xCE\xB2)\" --set a0=1 --set b1=0.5");
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_TRUE(contains(ok.out, "invariant: yes")) << ok.out;
  const auto bad = run("subspace --equation E2 --basis \"Eb(k*x^b)\" --set n=1 --set a0=1 --set a1=1 --set b2=1.5 --set k=1");
  EXPECT_EQ(bad.code, 1) << bad.out;
  EXPECT_TRUE(contains(bad.out, "invariant: no")) << bad.out;
  EXPECT_EQ(run("subspace --equation E2 --basis \"Eb(k*x^b)\" --trials 0").code, 2);
  EXPECT_EQ(run("subspace --equation XX --basis \"1\"").code, 2);
}

TEST(Cli, FodeAgreesWithClosedForm) {
  const auto r = run("fode --family E5 --steps 500");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "D^")) << r.out;
  const auto rl = run("fode --family 3s2");
  EXPECT_EQ(rl.code, 0) << rl.out;
}

TEST(Cli, FigureDeterministicBytes) {
  const auto a = temp_path("fig_a1.csv"), b = temp_path("fig_a2.csv");
  ASSERT_EQ(run("figure h --points 30 --out \"" + a + "\"").code, 0);
  ASSERT_EQ(run("figure h --points 30 --out \"" + b + "\"").code, 0);
  const auto sa = slurp(a);
  EXPECT_FALSE(sa.empty());
  EXPECT_EQ(sa, slurp(b));
  const auto s = run("figure d --points 2");
  EXPECT_EQ(s.code, 0);
  EXPECT_EQ(count_lines(s.out, ""), 3);
  EXPECT_EQ(run("figure z").code, 2);
}

TEST(Cli, FigureAll) {
  const auto dir = temp_path("figs");
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  ASSERT_EQ(run("figure all --points 5 --out \"" + dir + "\"").code, 0);
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) n += e.path().extension() == ".csv";
  EXPECT_EQ(n, 19);
}

TEST(Cli, SpecialFunctions) {
  const auto r = run("ml -1 --beta 0.5");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "0.4275835761")) << r.out;
  const auto d = run("deriv --kind rl --alpha 0.3 --mu -0.3 --t 1");
  EXPECT_EQ(d.code, 0);
  EXPECT_TRUE(contains(d.out, "0.5851947")) << d.out;
}
