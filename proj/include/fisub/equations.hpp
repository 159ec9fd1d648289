#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fracderiv.hpp"
#include "specfun.hpp"
#include "subspace.hpp"

namespace fisub {

using Params = std::map<std::string, double>;

inline double param(const Params& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw InadmissibleParams("missing parameter '" + key + "'");
  return it->second;
}
inline double param_or(const Params& p, const std::string& key, double def) {
  auto it = p.find(key);
  return it == p.end() ? def : it->second;
}
inline int param_int(const Params& p, const std::string& key) {
  const double v = param(p, key);
  if (v != std::floor(v) || v < 1) throw InadmissibleParams("parameter '" + key + "' must be a positive integer");
  return static_cast<int>(v);
}
inline std::string indexed(const std::string& stem, int i) { return stem + std::to_string(i); }

namespace detail {

// Orders as written in the equations. "beta+2" acts as beta then beta+1.
inline std::vector<double> ord_b(double b) { return {b}; }
inline std::vector<double> ord_bb(double b) { return {b, b}; }
inline std::vector<double> ord_b1(double b) { return {b + 1.0}; }
inline std::vector<double> ord_b2(double b) { return {b, b + 1.0}; }

inline Factor u(int q, int power = 1) { return {q, {}, power}; }
inline Factor d(int q, std::vector<double> orders, int power = 1) { return {q, std::move(orders), power}; }

// u^e as a factor list (empty for e = 0)
inline std::vector<Factor> upow(int q, int e) {
  if (e == 0) return {};
  return {u(q, e)};
}
inline std::vector<Factor> cat(std::vector<Factor> a, const std::vector<Factor>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// p'(u) (D^b u)^2 + p(u) D^b D^b u - q'(u) D^b u
inline std::vector<Term> doce_terms(const std::vector<double>& a, const std::vector<double>& bq, double beta) {
  std::vector<Term> t;
  for (int i = 1; i < static_cast<int>(a.size()); ++i)
    if (a[i] != 0.0) t.push_back({i * a[i], cat(upow(0, i - 1), {d(0, ord_b(beta), 2)})});
  for (int i = 0; i < static_cast<int>(a.size()); ++i)
    if (a[i] != 0.0) t.push_back({a[i], cat(upow(0, i), {d(0, ord_bb(beta))})});
  for (int i = 1; i < static_cast<int>(bq.size()); ++i)
    if (bq[i] != 0.0) t.push_back({-i * bq[i], cat(upow(0, i - 1), {d(0, ord_b(beta))})});
  return t;
}

// p(u) D^{b+1} u + q(u)
inline std::vector<Term> reaction_terms(const std::vector<double>& a, const std::vector<double>& bq, double beta) {
  std::vector<Term> t;
  for (int i = 0; i < static_cast<int>(a.size()); ++i)
    if (a[i] != 0.0) t.push_back({a[i], cat(upow(0, i), {d(0, ord_b1(beta))})});
  for (int i = 0; i < static_cast<int>(bq.size()); ++i)
    if (bq[i] != 0.0) t.push_back({bq[i], upow(0, i)});
  return t;
}

// p'(u) (D^b u)^2 + p(u) D^b D^b u + q(u)
inline std::vector<Term> source_terms(const std::vector<double>& a, const std::vector<double>& bq, double beta) {
  std::vector<Term> t;
  for (int i = 1; i < static_cast<int>(a.size()); ++i)
    if (a[i] != 0.0) t.push_back({i * a[i], cat(upow(0, i - 1), {d(0, ord_b(beta), 2)})});
  for (int i = 0; i < static_cast<int>(a.size()); ++i)
    if (a[i] != 0.0) t.push_back({a[i], cat(upow(0, i), {d(0, ord_bb(beta))})});
  for (int i = 0; i < static_cast<int>(bq.size()); ++i)
    if (bq[i] != 0.0) t.push_back({bq[i], upow(0, i)});
  return t;
}

inline std::vector<double> coeff_list(const Params& p, const std::string& stem, int lo, int hi) {
  std::vector<double> v(hi + 1, 0.0);
  for (int i = lo; i <= hi; ++i) v[i] = param_or(p, indexed(stem, i), 0.0);
  return v;
}

inline void check_keys(const std::string& id, const Params& p, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : p)
    if (!allowed.count(k)) throw ConfigError("equation " + id + ": unknown parameter '" + k + "'");
}

inline std::set<std::string> stem_keys(const std::string& stem, int lo, int hi) {
  std::set<std::string> s;
  for (int i = lo; i <= hi; ++i) s.insert(indexed(stem, i));
  return s;
}

inline std::set<std::string> join(std::set<std::string> a, const std::set<std::string>& b) {
  a.insert(b.begin(), b.end());
  return a;
}

}  // namespace detail

inline const std::vector<std::string>& equation_ids() {
  static const std::vector<std::string> ids = {"E2",    "FE1",   "RE1",    "RE5", "RE9", "burgers", "eqsr2",
                                               "eqsr7", "eqsr8", "eqsr9",  "eqsr10", "DS2", "DS7", "DS8",
                                               "DS9",   "cc1",   "eqc1",   "gkdv"};
  return ids;
}

// Right-hand side operator of an equation id; polynomial coefficients that are
// not given are zero. Extra keys used only by subspace strings (k, k1, ...) are
// tolerated through `extra_keys`.
inline OperatorSpec make_operator(const std::string& id, FracOrder ord, const Params& p,
                                  const std::set<std::string>& extra_keys = {}) {
  using namespace detail;
  OperatorSpec op;
  op.equation_id = id;
  op.order = ord;
  op.parameters = p;
  const double b = ord.beta;
  Params own;
  for (const auto& [k, v] : p)
    if (!extra_keys.count(k)) own[k] = v;

  if (id == "E2" || id == "eqsr2" || id == "DS2") {
    const int n = param_int(p, "n");
    check_keys(id, own, join({"n"}, join(stem_keys("a", 0, n), stem_keys("b", 0, n + 1))));
    const auto a = coeff_list(p, "a", 0, n);
    const auto q = coeff_list(p, "b", 0, n + 1);
    if (id == "E2") op.components = {doce_terms(a, q, b)};
    if (id == "eqsr2") op.components = {reaction_terms(a, q, b)};
    if (id == "DS2") op.components = {source_terms(a, q, b)};
  } else if (id == "FE1") {
    check_keys(id, own, {"a0", "a1", "b0", "b1", "b2", "k"});
    // q = b2 u^2 + b1 u + b0 with b2 = -k a1 unless given explicitly
    const double b2 = p.count("b2") ? param(p, "b2") : -param(p, "k") * param(p, "a1");
    op.components = {doce_terms({param_or(p, "a0", 0), param_or(p, "a1", 0)},
                                {param_or(p, "b0", 0), param_or(p, "b1", 0), b2}, b)};
  } else if (id == "RE1") {
    check_keys(id, own, {"a0", "b0", "b1"});
    op.components = {doce_terms({param_or(p, "a0", 0)}, {param_or(p, "b0", 0), param_or(p, "b1", 0)}, b)};
  } else if (id == "RE5") {
    check_keys(id, own, {"a1", "b2"});
    op.components = {doce_terms({0.0, param_or(p, "a1", 0)}, {0.0, 0.0, 0.5 * param_or(p, "b2", 0)}, b)};
  } else if (id == "RE9") {
    check_keys(id, own, {"b0"});
    op.components = {doce_terms({0.0, 1.0}, {param_or(p, "b0", 0)}, b)};
  } else if (id == "burgers") {
    check_keys(id, own, {});
    op.components = {doce_terms({1.0}, {0.0, 0.0, -0.5}, b)};
  } else if (id == "eqsr7") {
    check_keys(id, own, {"a1", "b1", "b2"});
    op.components = {reaction_terms({0.0, param_or(p, "a1", 0)}, {0.0, param_or(p, "b1", 0), param_or(p, "b2", 0)}, b)};
  } else if (id == "eqsr8") {
    check_keys(id, own, {"k", "b0"});
    op.components = {reaction_terms({0.0, 1.0}, {param_or(p, "b0", 0), -param_or(p, "k", 0)}, b)};
  } else if (id == "eqsr9") {
    check_keys(id, own, {"c", "k"});
    op.components = {reaction_terms({param_or(p, "c", 0)}, {0.0, -param_or(p, "k", 0)}, b)};
  } else if (id == "eqsr10") {
    check_keys(id, own, {"c"});
    op.components = {reaction_terms({param_or(p, "c", 0)}, {}, b)};
  } else if (id == "DS7" || id == "DS8" || id == "DS9") {
    const bool lin = id != "DS9";
    check_keys(id, own, id == "DS8" ? std::set<std::string>{"a0", "b1"} : std::set<std::string>{"a0", "a1", "b0", "b1"});
    if (lin && own.count("a1")) throw ConfigError("equation " + id + ": unknown parameter 'a1'");
    std::vector<double> a = {param_or(p, "a0", 0)};
    if (!lin) a.push_back(param_or(p, "a1", 0));
    op.components = {source_terms(a, {id == "DS8" ? 0.0 : param_or(p, "b0", 0), param_or(p, "b1", 0)}, b)};
  } else if (id == "cc1") {
    check_keys(id, own, {"mu", "rho", "lambda", "gamma", "delta"});
    const double mu = param_or(p, "mu", 0), rho = param_or(p, "rho", 0);
    op.components = {
        {{1.0, {d(0, ord_bb(b))}},
         {mu, {u(1), d(0, ord_bb(b))}},
         {mu + rho, {d(0, ord_b(b)), d(1, ord_b(b))}},
         {rho, {u(0), d(1, ord_bb(b))}}},
        {{1.0, {d(1, ord_bb(b))}},
         {param_or(p, "lambda", 0), {d(0, ord_bb(b))}},
         {param_or(p, "gamma", 0), {u(0)}},
         {param_or(p, "delta", 0), {u(1)}}}};
  } else if (id == "eqc1") {
    check_keys(id, own, {});
    op.components = {{{1.0, {d(1, ord_b(b))}}}, {{-1.0, {u(0), d(0, ord_b(b))}}}};
  } else if (id == "gkdv") {
    check_keys(id, own, {});
    op.time_kind = DerivKind::RiemannLiouville;
    op.components = {
        {{0.5, {d(0, ord_b2(b))}},
         {-3.0, {u(0), d(0, ord_b(b))}},
         {3.0, {u(2), d(1, ord_b(b))}},
         {3.0, {u(1), d(2, ord_b(b))}}},
        {{-1.0, {d(1, ord_b2(b))}}, {3.0, {u(0), d(1, ord_b(b))}}},
        {{-1.0, {d(2, ord_b2(b))}}, {3.0, {u(0), d(2, ord_b(b))}}}};
  } else {
    throw UnknownId("unknown equation id '" + id + "'");
  }
  return op;
}

// Basis strings: elements separated by ',' and components by ';'.
//   1, x^b, x^(b+1), x^(2b), Eb(K*x^b), Eb1(K*x^(b+1))
// K is a number or an optionally negated parameter name; unicode beta is accepted.
inline SubspaceSpec parse_subspace(std::string text, double beta, const Params& params,
                                   std::set<std::string>* used_keys = nullptr) {
  auto replace_all = [](std::string& s, const std::string& from, const std::string& to) {
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) s.replace(pos, from.size(), to);
  };
  replace_all(text, "\xCE\xB2", "b");  // beta
  replace_all(text, "\xC2\xB7", "*");  // middle dot
  replace_all(text, "\xE2\x8B\x85", "*");
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '_' && c != '{' && c != '}') s += c;

  auto scalar = [&](const std::string& tok) {
    if (tok.empty()) return 1.0;
    static const std::regex num(R"([-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?)");
    if (std::regex_match(tok, num)) return std::stod(tok);
    const bool neg = tok[0] == '-';
    const std::string key = (tok[0] == '-' || tok[0] == '+') ? tok.substr(1) : tok;
    if (used_keys) used_keys->insert(key);
    const auto f = params.find(key);
    if (f == params.end()) throw ConfigError("basis refers to unset parameter '" + key + "'");
    return neg ? -f->second : f->second;
  };

  static const std::regex one(R"(1)");
  static const std::regex pw_b(R"(x\^\(?b\)?)");
  static const std::regex pw_b1(R"(x\^\(b\+1\))");
  static const std::regex pw_2b(R"(x\^\(?2b\)?)");
  static const std::regex ml_b(R"(E\(?b\)?\(([-+.\w]*?)\*?x\^\(?b\)?\))");
  static const std::regex ml_b1(R"(E\(?b\+?1\)?\(([-+.\w]*?)\*?x\^\(b\+1\)\))");

  SubspaceSpec ss;
  std::size_t start = 0;
  while (true) {
    const std::size_t semi = s.find(';', start);
    const std::string comp = s.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
    std::vector<BasisFunction> basis;
    // split on commas outside parentheses
    int depth = 0;
    std::string cur;
    std::vector<std::string> items;
    for (char c : comp) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ',' && depth == 0) {
        items.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    items.push_back(cur);
    for (const auto& it : items) {
      std::smatch m;
      if (std::regex_match(it, one))
        basis.push_back(BasisFunction::constant());
      else if (std::regex_match(it, pw_b))
        basis.push_back(BasisFunction::power(beta));
      else if (std::regex_match(it, pw_b1))
        basis.push_back(BasisFunction::power(beta + 1.0));
      else if (std::regex_match(it, pw_2b))
        basis.push_back(BasisFunction::power(2.0 * beta));
      else if (std::regex_match(it, m, ml_b))
        basis.push_back(BasisFunction::ml_exp(beta, scalar(m[1].str())));
      else if (std::regex_match(it, m, ml_b1))
        basis.push_back(BasisFunction::ml_exp(beta + 1.0, scalar(m[1].str())));
      else
        throw ConfigError("cannot parse basis element '" + it + "'");
    }
    ss.components.push_back(basis);
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  return ss;
}

// The parameter conditions stated for an (equation, subspace) pairing.
inline std::vector<ParamCondition> conditions_for(const std::string& id, const Params& p, const SubspaceSpec& ss) {
  using K = BasisFunction::Kind;
  std::vector<ParamCondition> out;
  if (ss.components.size() != 1 && id != "cc1") return out;
  const auto& b0 = ss.components[0];
  auto single_ml = [&](double order_shift) -> const BasisFunction* {
    if (b0.size() == 1 && b0[0].kind == K::MLExp && (order_shift == 0.0 || b0[0].order > 1.0)) return &b0[0];
    return nullptr;
  };
  auto const_plus_ml = [&]() -> const BasisFunction* {
    if (b0.size() == 2 && b0[0].kind == K::Constant && b0[1].kind == K::MLExp) return &b0[1];
    return nullptr;
  };

  if (id == "E2" || id == "DS2" || id == "eqsr2") {
    const BasisFunction* f = single_ml(id == "eqsr2" ? 1.0 : 0.0);
    if (!f) return out;
    const int n = param_int(p, "n");
    const double kk = id == "eqsr2" ? -f->rate : f->rate;
    for (int i = 1; i <= n; ++i) {
      const double ai = param_or(p, indexed("a", i), 0.0), bi1 = param_or(p, indexed("b", i + 1), 0.0);
      ParamCondition c;
      c.perturb_key = indexed("b", i + 1);
      if (id == "E2") {
        c.name = "a" + std::to_string(i) + "*k = b" + std::to_string(i + 1);
        c.text = "a_r k = b_{r+1}, r=1..n";
        c.residual = ai * kk - bi1;
      } else if (id == "eqsr2") {
        c.name = "a" + std::to_string(i) + "*k = b" + std::to_string(i + 1);
        c.text = "a_i k = b_{i+1}, i=1..n";
        c.residual = ai * kk - bi1;
      } else {
        c.name = "(" + std::to_string(i + 1) + ")*a" + std::to_string(i) + "*k^2 = -b" + std::to_string(i + 1);
        c.text = "(i+1) a_i k^2 = -b_{i+1}, i=1..n";
        c.residual = (i + 1) * ai * kk * kk + bi1;
      }
      out.push_back(c);
    }
    if (id == "eqsr2") out.push_back({"b0 = 0", "b_0 = 0", param_or(p, "b0", 0.0), "b0"});
  } else if (id == "FE1") {
    if (const BasisFunction* f = const_plus_ml()) {
      const double b2 = p.count("b2") ? param(p, "b2") : -param(p, "k") * param(p, "a1");
      // subspace rate is -k
      out.push_back({"b2 = -k*a1", "q(u) = -k a_1 u^2 + b_1 u + b_0", b2 - f->rate * param_or(p, "a1", 0.0), "b2"});
    }
  } else if (id == "RE5") {
    if (const BasisFunction* f = const_plus_ml())
      out.push_back({"a1 = b2/(2k)", "a_1 = b_2/(2k)", param_or(p, "a1", 0.0) * 2.0 * f->rate - param_or(p, "b2", 0.0), "a1"});
  } else if (id == "eqsr7") {
    if (const BasisFunction* f = single_ml(1.0))
      out.push_back({"b2 = a1*k", "b_2 = a_1 k", param_or(p, "b2", 0.0) - param_or(p, "a1", 0.0) * (-f->rate), "b2"});
  } else if (id == "cc1") {
    if (ss.components.size() == 2 && !ss.components[0].empty() && ss.components[0][0].kind == K::MLExp)
      out.push_back({"mu = -rho", "mu = -rho", param_or(p, "mu", 0.0) + param_or(p, "rho", 0.0), "mu"});
  }
  return out;
}

// An equation, a subspace and the stated parameter conditions.
struct InvarianceCase {
  std::string name;
  std::string equation;
  std::string basis;
  Params params;  // equation parameters plus subspace rates
  FracOrder order{0.7, 0.6};
};

inline std::set<std::string> subspace_keys(const InvarianceCase& c) {
  std::set<std::string> used;
  parse_subspace(c.basis, c.order.beta, c.params, &used);
  return used;
}

inline OperatorSpec build_operator(const InvarianceCase& c, SubspaceSpec* ss_out = nullptr) {
  std::set<std::string> used;
  SubspaceSpec ss = parse_subspace(c.basis, c.order.beta, c.params, &used);
  // FE1 reads its subspace rate k from the operator too
  if (c.equation == "FE1") used.erase("k");
  // indexed rates k1, k2, ... belong to subspaces only
  for (const auto& [k, v] : c.params)
    if (k.size() > 1 && k[0] == 'k' && std::isdigit(static_cast<unsigned char>(k[1]))) used.insert(k);
  OperatorSpec op = make_operator(c.equation, c.order, c.params, used);
  op.conditions = conditions_for(c.equation, c.params, ss);
  if (ss_out) *ss_out = ss;
  return op;
}

// Every equation/subspace pairing with a stated invariance result.
inline std::vector<InvarianceCase> invariance_cases() {
  std::vector<InvarianceCase> v;
  // diffusion-convection
  v.push_back({"E2 n=1", "E2", "Eb(k*x^b)", {{"n", 1}, {"a0", 1.5}, {"a1", 0.7}, {"b0", 0.3}, {"b1", 0.4}, {"b2", 0.56}, {"k", 0.8}}});
  v.push_back({"E2 n=2", "E2", "Eb(k*x^b)",
               {{"n", 2}, {"a0", 1.5}, {"a1", 0.7}, {"a2", 0.3}, {"b0", 0.3}, {"b1", 0.4}, {"b2", 0.56}, {"b3", 0.24}, {"k", 0.8}}});
  v.push_back({"E2 n=3", "E2", "Eb(k*x^b)",
               {{"n", 3}, {"a0", 1.5}, {"a1", 0.7}, {"a2", 0.3}, {"a3", -0.2}, {"b0", 0.3}, {"b1", 0.4}, {"b2", 0.56}, {"b3", 0.24}, {"b4", -0.16}, {"k", 0.8}}});
  v.push_back({"FE1", "FE1", "1, Eb(-k*x^b)", {{"a0", 1.0}, {"a1", 0.6}, {"b0", 0.2}, {"b1", 0.5}, {"b2", -0.54}, {"k", 0.9}}});
  const Params re1{{"a0", 1.2}, {"b1", 0.4}, {"b0", 0.3}, {"k1", 0.9}, {"k2", -0.7}};
  v.push_back({"RE1 (i)", "RE1", "1, x^b", re1});
  v.push_back({"RE1 (ii)", "RE1", "Eb(k1*x^b), Eb(k2*x^b)", re1});
  v.push_back({"RE1 (iii)", "RE1", "1, Eb(k1*x^b), Eb(k2*x^b)", re1});
  v.push_back({"RE1 (iv)", "RE1", "1, x^b, Eb(k1*x^b), Eb(k2*x^b)", re1});
  v.push_back({"RE5", "RE5", "1, Eb(k*x^b)", {{"a1", 0.5}, {"b2", 0.8}, {"k", 0.8}}});
  v.push_back({"RE9", "RE9", "1, x^b", {{"b0", 0.4}}});
  v.push_back({"burgers", "burgers", "1, x^b", {}});
  // reaction-diffusion
  v.push_back({"eqsr2 n=1", "eqsr2", "Eb1(-k*x^(b+1))", {{"n", 1}, {"a0", 0.9}, {"a1", 0.6}, {"b0", 0.0}, {"b1", 0.5}, {"b2", 0.42}, {"k", 0.7}}});
  v.push_back({"eqsr2 n=2", "eqsr2", "Eb1(-k*x^(b+1))",
               {{"n", 2}, {"a0", 0.9}, {"a1", 0.6}, {"a2", -0.4}, {"b0", 0.0}, {"b1", 0.5}, {"b2", 0.42}, {"b3", -0.28}, {"k", 0.7}}});
  v.push_back({"eqsr7", "eqsr7", "Eb1(-k*x^(b+1))", {{"a1", 0.6}, {"b1", 0.3}, {"b2", 0.42}, {"k", 0.7}}});
  const Params sr8{{"k", 0.6}, {"b0", 0.4}};
  v.push_back({"eqsr8 (i)", "eqsr8", "1, x^b", sr8});
  v.push_back({"eqsr8 (ii)", "eqsr8", "1, x^(b+1)", sr8});
  v.push_back({"eqsr8 (iii)", "eqsr8", "1, x^b, x^(b+1)", sr8});
  for (std::string id : {"eqsr9", "eqsr10"}) {
    Params p{{"c", 0.8}, {"k1", 1.5}, {"k2", -1.2}};
    if (id == "eqsr9") p["k"] = 0.5;
    v.push_back({id + " (i)", id, "1, x^b", p});
    v.push_back({id + " (ii)", id, "1, x^b, x^(b+1)", p});
    v.push_back({id + " (iii)", id, "Eb1(k1*x^(b+1)), Eb1(k2*x^(b+1))", p});
    v.push_back({id + " (iv)", id, "1, Eb1(k1*x^(b+1)), Eb1(k2*x^(b+1))", p});
    v.push_back({id + " (v)", id, "1, x^(b+1), Eb1(k1*x^(b+1)), Eb1(k2*x^(b+1))", p});
    v.push_back({id + " (vi)", id, "1, x^b, x^(b+1), Eb1(k1*x^(b+1)), Eb1(k2*x^(b+1))", p});
  }
  // diffusion with source
  v.push_back({"DS2 n=1", "DS2", "Eb(k*x^b)", {{"n", 1}, {"a0", 0.8}, {"a1", 0.5}, {"b1", 0.3}, {"b2", -0.64}, {"k", 0.8}}});
  v.push_back({"DS2 n=2", "DS2", "Eb(k*x^b)",
               {{"n", 2}, {"a0", 0.8}, {"a1", 0.5}, {"a2", 0.25}, {"b1", 0.3}, {"b2", -0.64}, {"b3", -0.48}, {"k", 0.8}}});
  const Params ds{{"a0", 0.7}, {"b1", 0.4}, {"b0", 0.3}, {"k1", 0.9}, {"k2", -0.7}};
  Params ds8 = ds;
  ds8.erase("b0");
  v.push_back({"DS7 (i)", "DS7", "1, x^b", ds});
  v.push_back({"DS7 (ii)", "DS7", "1, Eb(k1*x^b), Eb(k2*x^b)", ds});
  v.push_back({"DS7 (iii)", "DS7", "1, x^b, Eb(k1*x^b), Eb(k2*x^b)", ds});
  v.push_back({"DS8 (i)", "DS8", "1, x^b", ds8});
  v.push_back({"DS8 (ii)", "DS8", "Eb(k1*x^b), Eb(k2*x^b)", ds8});
  v.push_back({"DS8 (iii)", "DS8", "1, Eb(k1*x^b), Eb(k2*x^b)", ds8});
  v.push_back({"DS8 (iv)", "DS8", "1, x^b, Eb(k1*x^b), Eb(k2*x^b)", ds8});
  v.push_back({"DS9", "DS9", "1, x^b", {{"a0", 0.7}, {"a1", 0.5}, {"b0", 0.3}, {"b1", 0.4}}});
  // coupled systems
  v.push_back({"cc1 (i)", "cc1", "Eb(k*x^b), Eb(-k*x^b); Eb(k*x^b), Eb(-k*x^b)",
               {{"mu", 0.7}, {"rho", -0.7}, {"lambda", 0.5}, {"gamma", 0.3}, {"delta", 0.4}, {"k", 0.8}}});
  v.push_back({"cc1 (ii)", "cc1", "1, x^b; 1, x^b", {{"mu", 0.7}, {"rho", 0.2}, {"lambda", 0.5}, {"gamma", 0.3}, {"delta", 0.4}}});
  v.push_back({"eqc1", "eqc1", "1, x^b; 1, x^b", {}});
  v.push_back({"gkdv", "gkdv", "1, x^b; 1, x^b; 1, x^b", {}});
  return v;
}

}  // namespace fisub
