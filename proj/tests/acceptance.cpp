// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Usage: acceptance <path to fisub executable>

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include <fisub/fisub.hpp>

#include "checks.hpp"
#include "oracles.hpp"

using namespace fisub;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail.clear();
    pass = false;
    detail += (detail.empty() ? "" : "; ") + what;
  }
};

std::string g3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string g12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

const FracOrder kClassical(1.0, 1.0);

FracOrder default_order(const FamilyInfo& f) {
  if (f.classical_only) return kClassical;
  if (f.id == "3s2") return FracOrder(0.25, 0.8);
  return FracOrder(0.75, 0.6);
}

double grid_diff(const FamilyInstance& a, const std::function<std::vector<double>(double, double)>& ref, int n,
                 bool relative) {
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = 0.5 + 1.5 * i / (n - 1), t = 0.5 + 1.5 * j / (n - 1);
      const auto u = eval_solution(a, x, t), v = ref(x, t);
      for (std::size_t p = 0; p < u.size(); ++p)
        worst = std::max(worst, std::fabs(u[p] - v[p]) / (relative ? std::fabs(v[p]) : std::max(1.0, std::fabs(v[p]))));
    }
  return worst;
}

// 1. every family balances its equation; every perturbed condition breaks it
Outcome analytic_suite() {
  Outcome o;
  double worst = 0.0, weakest = 1e300;
  int controls = 0;
  for (const auto& f : list_families()) {
    const auto rep = residual_analytic(instantiate(f.id, {}, default_order(f)));
    worst = std::max(worst, rep.max_rel_residual);
    o.require(rep.max_rel_residual <= kAnalyticTol, f.id + " residual " + g3(rep.max_rel_residual));
    for (const auto& c : negative_controls(f.id, {}, default_order(f))) {
      ++controls;
      weakest = std::min(weakest, c.report.max_rel_residual);
      o.require(c.report.max_rel_residual >= kNegativeControlMin, f.id + " control " + c.key + " only " + g3(c.report.max_rel_residual));
    }
  }
  if (o.pass)
    o.detail = "25 families, worst residual " + g3(worst) + "; " + std::to_string(controls) + " negative controls, weakest " + g3(weakest);
  return o;
}

// 2. fractional displays at alpha = beta = 1 against their classical pairs
Outcome classical_suite() {
  Outcome o;
  double worst = 0.0;
  for (const std::string id : {"E5", "FE6", "RE4", "RE8", "eqsr6", "DS6", "cc8", "cc10", "eqcs"}) {
    const auto f = instantiate(id, {}, kClassical);
    const double d = grid_diff(f, [&](double x, double t) { return classical_limit(f, x, t); }, 10, true);
    worst = std::max(worst, d);
    o.require(d <= 1e-10, id + " differs by " + g3(d));
  }
  if (o.pass) o.detail = "9 pairs, worst relative difference " + g3(worst);
  return o;
}

// 3. special parameter values reproduce the simpler families
Outcome collapse_suite() {
  Outcome o;
  double worst = 0.0;
  for (const FracOrder ord : {FracOrder(0.75, 0.6), FracOrder(0.9, 0.9)}) {
    const auto ree4 = instantiate("REE4", {{"c1", 0}, {"c2", 0}}, ord), re4 = instantiate("RE4", {}, ord);
    Params p10 = instantiate("DS10", {{"b0", 0}}, ord).params, p7 = instantiate("sr7", {{"k", 0}}, ord).params;
    const auto ds10 = instantiate("DS10", p10, ord), sr7 = instantiate("sr7", p7, ord);
    p10.erase("b0");
    p7.erase("k");
    const auto ds11 = instantiate("DS11", p10, ord), sr8 = instantiate("sr8", p7, ord);
    for (const auto& [name, a, b] : {std::tuple{"REE4/RE4", &ree4, &re4}, std::tuple{"DS10/DS11", &ds10, &ds11},
                                     std::tuple{"sr7/sr8", &sr7, &sr8}}) {
      const double d = grid_diff(*a, [&](double x, double t) { return eval_solution(*b, x, t); }, 15, false);
      worst = std::max(worst, d);
      o.require(d <= 1e-9, std::string(name) + " differs by " + g3(d));
    }
  }
  if (o.pass) o.detail = "3 collapses at 2 orders, worst difference " + g3(worst);
  return o;
}

// 4. Mittag-Leffler and Gamma identities
Outcome specfun_suite() {
  Outcome o;
  double w1 = 0.0, wk = 0.0, wg = 0.0;
  for (double z = -5.0; z <= 5.0 + 1e-12; z += 0.01) {
    w1 = std::max(w1, std::fabs(mittag_leffler({1.0, 1.0}, z) - std::exp(z)) / std::exp(z));
    if (std::fabs(z) < 0.2) continue;
    double partial = 0.0, zj = 1.0, fact = 1.0;
    for (int k = 2; k <= 4; ++k) {
      partial += zj / fact;
      zj *= z;
      fact *= k - 1;
      const double ref = (std::exp(z) - partial) / std::pow(z, k - 1);
      wk = std::max(wk, std::fabs(mittag_leffler({1.0, double(k)}, z) - ref) / std::max(1.0, std::fabs(ref)));
    }
  }
  const double half = mittag_leffler({0.5, 1.0}, -1.0), half_ref = oracle::ml_half(-1.0);
  for (double x = 0.1; x <= 50.0; x += 0.01) {
    const double g1 = gamma_fn(x + 1.0);
    wg = std::max(wg, std::fabs(g1 - x * gamma_fn(x)) / g1);
  }
  o.require(w1 <= 1e-9, "E_{1,1} vs exp " + g3(w1));
  o.require(wk <= 1e-9, "E_{1,k} identities " + g3(wk));
  o.require(std::fabs(half - half_ref) <= 1e-8 && std::fabs(half - 0.4275835761) <= 1e-8, "E_{1/2}(-1) = " + g12(half));
  o.require(wg <= 1e-12, "Gamma functional equation " + g3(wg));
  if (o.pass)
    o.detail = "exp " + g3(w1) + ", E_{1,k} " + g3(wk) + ", E_{1/2}(-1) = " + g12(half) + ", Gamma recurrence " + g3(wg);
  return o;
}

// 5. closed forms against independent integrators and quadrature
Outcome oracle_suite() {
  Outcome o;
  double wa = 0.0;
  const auto agree = checks::affine_agreement(1e-3);
  for (const auto& a : agree) {
    wa = std::max(wa, a.max_rel);
    o.require(a.max_rel <= 1e-3, a.name + " Adams gap " + g3(a.max_rel));
  }
  o.require(!agree.empty(), "no affine systems found");
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> da(0.3, 1.0), dr(-2.0, 2.0), dt(0.5, 2.0);
  std::uniform_int_distribution<int> dg(0, 3);
  double wc = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double alpha = da(rng), a = dr(rng), t = dt(rng);
    const double b = i % 5 == 4 ? a : dr(rng);
    const double gs[4] = {1.0, alpha, alpha + 1.0, 2.0 * alpha + 1.0};
    const double g1 = gs[dg(rng)], g2 = gs[dg(rng)];
    const double ref = oracle::ml_convolution(alpha, g1, g2, a, b, t);
    const double e = std::fabs(ml_convolve({alpha, g1, g2, a, b}, t) - ref) / std::fabs(ref);
    wc = std::max(wc, e);
    o.require(e <= 1e-6, "convolution draw " + std::to_string(i) + " off by " + g3(e));
  }
  if (o.pass)
    o.detail = std::to_string(agree.size()) + " affine systems, worst Adams gap " + g3(wa) +
               "; 20 convolution draws, worst " + g3(wc);
  return o;
}

// 6. discretized residuals and their convergence
Outcome numeric_suite() {
  Outcome o;
  std::string summary;
  for (const std::string id : {"E5", "DS6", "sr8", "cc8"})
    for (const FracOrder ord : {FracOrder(0.9, 0.9), FracOrder(0.75, 0.6)}) {
      GridSpec coarse;
      coarse.nx = coarse.nt = 76;
      const auto s = refinement_study(instantiate(id, {}, ord), coarse);
      const double r = s.reports[1].max_rel_residual;  // the 151-node default grid
      const std::string tag = id + "(" + g3(ord.alpha) + "," + g3(ord.beta) + ")";
      o.require(r <= 2e-2, tag + " residual " + g3(r));
      o.require(s.passes(), tag + " slope " + g3(s.slope) + " < " + g3(s.required));
      summary += (summary.empty() ? "" : ", ") + tag + " " + g3(r) + " slope " + g3(s.slope);
    }
  if (o.pass) o.detail = summary;
  return o;
}

// 7. stated subspaces are invariant and stop being so when a condition is broken
Outcome invariance_suite() {
  Outcome o;
  double worst = 0.0, weakest = 1e300;
  int flips = 0;
  const auto all = checks::invariance_flips(8, 1);
  const auto again = checks::invariance_flips(8, 1);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& f = all[i];
    worst = std::max(worst, f.residual);
    o.require(f.invariant && f.residual <= kInvariantTol, f.name + " residual " + g3(f.residual));
    o.require(f.flips(), f.name + " does not flip");
    o.require(f.residual == again[i].residual, f.name + " not deterministic");
    for (const auto& [k, r] : f.perturbed) {
      ++flips;
      weakest = std::min(weakest, r);
    }
  }
  if (o.pass)
    o.detail = std::to_string(all.size()) + " pairings, worst residual " + g3(worst) + "; " + std::to_string(flips) +
               " perturbations, weakest " + g3(weakest);
  return o;
}

std::string capture(const std::string& cmd, int& code) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    code = -1;
    return out;
  }
  std::array<char, 4096> buf;
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), p)) > 0;) out.append(buf.data(), n);
  const int st = pclose(p);
  code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return out;
}

// 8. figure data through the command line, twice, plus two exact anchors
Outcome figure_suite(const std::string& exe) {
  Outcome o;
  if (exe.empty()) {
    o.require(false, "no executable given");
    return o;
  }
  for (const auto& f : figures()) {
    int c1 = 0, c2 = 0;
    const std::string cmd = "\"" + exe + "\" figure " + f.id;
    const std::string a = capture(cmd, c1), b = capture(cmd, c2);
    o.require(c1 == 0 && c2 == 0 && !a.empty(), "figure " + f.id + " exited " + std::to_string(c1));
    o.require(a == b, "figure " + f.id + " output differs between runs");
    o.require(a == figure_csv(f.id, 60), "figure " + f.id + " differs from the library");
  }
  // u3 at x = 2, t = 1 for the beta = 1 columns of panel s
  const std::string s = figure_csv("s", 3, 0.5, 1.0);
  const std::string last = s.substr(s.rfind('\n', s.size() - 2) + 1);
  o.require(last.rfind("1,4,", 0) == 0, "panel s anchor row '" + last + "'");
  // alpha = beta = 1 column of panel d is 3 + x
  const std::string d = figure_csv("d", 60);
  std::size_t pos = d.find('\n') + 1;
  int rows = 0;
  while (pos < d.size()) {
    const std::size_t end = d.find('\n', pos);
    const std::string line = d.substr(pos, end - pos);
    const std::size_t c1 = line.find(','), c2 = line.find(',', c1 + 1);
    const double x = std::stod(line.substr(0, c1));
    o.require(line.substr(c1 + 1, c2 - c1 - 1) == g12(3.0 + x), "panel d row '" + line + "'");
    pos = end + 1;
    ++rows;
  }
  if (o.pass) o.detail = "19 panels byte-identical across runs; u3(2,1) = 4; panel d classical column = 3 + x on " + std::to_string(rows) + " rows";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string exe = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"analytic residuals and negative controls", analytic_suite},
      {"classical limits", classical_suite},
      {"special-case collapses", collapse_suite},
      {"special functions", specfun_suite},
      {"oracle agreement", oracle_suite},
      {"numeric residuals and refinement", numeric_suite},
      {"invariance and perturbation", invariance_suite},
      {"figure reproduction", [&] { return figure_suite(exe); }},
  };
  int failed = 0, n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %d %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", n, name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %d criteria passed\n", n - failed, n);
  return failed ? 1 : 0;
}
