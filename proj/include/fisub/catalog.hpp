#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "equations.hpp"
#include "errors.hpp"
#include "fode.hpp"
#include "fracderiv.hpp"
#include "specfun.hpp"
#include "subspace.hpp"

namespace fisub {

// One unknown written as sum_j coeffs[j](t) * basis[j](x).
struct SeparatedComponent {
  std::vector<BasisFunction> basis;
  std::vector<TimeExpr> coeffs;

  void add(const BasisFunction& b, const TimeExpr& c) {
    basis.push_back(b);
    coeffs.push_back(c);
  }
};
using Separated = std::vector<SeparatedComponent>;

struct GridSpec {
  double x_lo = 0.5, x_hi = 2.0;
  double t_lo = 0.5, t_hi = 2.0;
  int nx = 15, nt = 15;

  void validate() const {
    if (!(x_lo > 0.0) || !(t_lo > 0.0)) throw DomainError("GridSpec: x_lo and t_lo must be positive");
    if (!(x_hi > x_lo) || !(t_hi > t_lo)) throw DomainError("GridSpec: empty range");
    if (nx < 2 || nt < 2) throw DomainError("GridSpec: need at least 2 nodes per axis");
  }
  double x(int i) const { return x_lo + (x_hi - x_lo) * i / (nx - 1); }
  double t(int j) const { return t_lo + (t_hi - t_lo) * j / (nt - 1); }
};

struct FamilyInfo {
  std::string id;
  std::string pde_id;
  int components = 1;
  std::string conditions;  // as stated alongside the solution
  std::vector<std::string> figure_ids;
  std::string classical_pair;  // empty when there is none
  bool classical_only = false;  // stated only at alpha = beta = 1
};

// stem{lo..n+offset}
struct IndexedKeys {
  std::string stem;
  int lo = 0;
  int offset = 0;
};

struct SolutionFamily {
  FamilyInfo info;
  Params defaults;
  std::vector<std::string> derived_keys;  // filled by derive when not given
  std::vector<IndexedKeys> indexed;
  std::function<void(Params&)> derive;
  std::function<std::vector<ParamCondition>(const Params&, FracOrder)> conditions;
  std::function<Params(const Params&)> pde_params;
  std::function<Separated(const Params&, FracOrder)> separated;
  std::function<std::vector<double>(const Params&, FracOrder, double, double)> display;
  std::function<std::vector<double>(const Params&, double, double)> classical;
};

namespace detail {

// convolution integral, zero on an empty interval
inline double conv0(const MLConvolution& c, double t) { return t == 0.0 ? 0.0 : ml_convolve(c, t); }
inline double Eml(double a, double z) { return mittag_leffler({a, 1.0}, z); }
inline double Eml2(double a, double b, double z) { return mittag_leffler({a, b}, z); }
inline TimeExpr K(double alpha, double coef, double g, double rate) { return TimeExpr::kernel(alpha, coef, g, rate); }
inline TimeExpr C(double alpha, double c) { return TimeExpr::constant(alpha, c); }
inline BasisFunction one() { return BasisFunction::constant(); }
inline BasisFunction xb(double beta) { return BasisFunction::power(beta); }
inline BasisFunction xb1(double beta) { return BasisFunction::power(beta + 1.0); }
inline BasisFunction mlb(double beta, double k) { return BasisFunction::ml_exp(beta, k); }
inline BasisFunction mlb1(double beta, double k) { return BasisFunction::ml_exp(beta + 1.0, k); }

inline int n_of(const Params& p) { return param_int(p, "n"); }
inline double P(const Params& p, const std::string& k) { return param(p, k); }
inline double Pi(const Params& p, const std::string& stem, int i) { return param(p, indexed(stem, i)); }

inline Params pick(const Params& p, std::initializer_list<const char*> keys) {
  Params out;
  for (const char* k : keys)
    if (p.count(k)) out[k] = p.at(k);
  return out;
}
inline void pick_indexed(Params& out, const Params& p, const std::string& stem, int lo, int hi) {
  for (int i = lo; i <= hi; ++i)
    if (p.count(indexed(stem, i))) out[indexed(stem, i)] = p.at(indexed(stem, i));
}

inline ParamCondition equality(std::string name, std::string text, double residual, std::string key) {
  return {std::move(name), std::move(text), residual, std::move(key)};
}
// validity predicates have no perturbation key
inline ParamCondition validity(std::string name, bool ok) { return {name, name, ok ? 0.0 : 1.0, ""}; }

inline void need_classical(FracOrder o) {
  if (o.alpha != 1.0 || o.beta != 1.0) throw InadmissibleParams("classical display holds only at alpha = beta = 1");
}

// Conditions a_r k = b_{r+1} (E5 and eqsr6), and the source-term variant.
inline std::vector<ParamCondition> linked_coeffs(const Params& p, const std::string& form) {
  std::vector<ParamCondition> out;
  const int n = n_of(p);
  const double k = P(p, "k");
  for (int i = 1; i <= n; ++i) {
    const std::string a = indexed("a", i), b = indexed("b", i + 1);
    if (form == "ds")
      out.push_back(equality("(" + std::to_string(i + 1) + ")*" + a + "*k^2 = -" + b, "(i+1) a_i k^2 = -b_{i+1}, i=1..n",
                             (i + 1) * P(p, a) * k * k + P(p, b), b));
    else
      out.push_back(equality(a + "*k = " + b, form == "sr" ? "a_i k = b_{i+1}, i=1..n" : "a_r k = b_{r+1}, r=1..n",
                             P(p, a) * k - P(p, b), b));
  }
  return out;
}

inline void derive_linked(Params& p, const std::string& form) {
  const int n = n_of(p);
  const double k = P(p, "k");
  for (int i = 1; i <= n; ++i) {
    const std::string b = indexed("b", i + 1);
    if (p.count(b)) continue;
    const double a = P(p, indexed("a", i));
    p[b] = form == "ds" ? -(i + 1) * a * k * k : a * k;
  }
}

inline Params poly_pde_params(const Params& p, int b_lo) {
  Params out{{"n", P(p, "n")}};
  pick_indexed(out, p, "a", 0, n_of(p));
  pick_indexed(out, p, "b", b_lo, n_of(p) + 1);
  return out;
}

// classical cos/cosh profile of E_2(-k x^2)
inline double e2_profile(double k, double x) {
  if (k > 0) return std::cos(std::sqrt(k) * x);
  if (k < 0) return std::cosh(std::sqrt(-k) * x);
  return 1.0;
}

// ---- family builders -------------------------------------------------------

inline SolutionFamily e5_like(bool classical) {
  SolutionFamily f;
  f.info = {classical ? "E6" : "E5", "E2", 1, "a_r k = b_{r+1}, r=1..n", {}, classical ? "" : "E6", classical};
  if (!classical) f.info.figure_ids = {"a"};
  f.defaults = {{"n", 2}, {"a0", 0.5}, {"a1", 0.25}, {"a2", 0.1}, {"b0", 0}, {"b1", -0.25}, {"k", 1}, {"k0", 0.02}};
  f.indexed = {{"a", 0, 0}, {"b", 0, 1}};
  f.derived_keys = {"b2", "b3", "..."};
  f.derive = [](Params& p) { derive_linked(p, "doce"); };
  f.conditions = [](const Params& p, FracOrder) { return linked_coeffs(p, "doce"); };
  f.pde_params = [](const Params& p) { return poly_pde_params(p, 0); };
  f.separated = [](const Params& p, FracOrder o) {
    const double k = P(p, "k"), lam = P(p, "a0") * k * k - P(p, "b1") * k;
    SeparatedComponent c;
    c.add(mlb(o.beta, k), K(o.alpha, P(p, "k0"), 1.0, lam));
    return Separated{c};
  };
  auto cl = [](const Params& p, double x, double t) {
    const double k = P(p, "k");
    return std::vector<double>{P(p, "k0") * std::exp((P(p, "a0") * k * k - P(p, "b1") * k) * t + k * x)};
  };
  f.classical = cl;
  if (classical) {
    f.display = [cl](const Params& p, FracOrder o, double x, double t) {
      need_classical(o);
      return cl(p, x, t);
    };
  } else {
    f.display = [](const Params& p, FracOrder o, double x, double t) {
      const double k = P(p, "k");
      return std::vector<double>{P(p, "k0") * Eml(o.alpha, (P(p, "a0") * k * k - P(p, "b1") * k) * std::pow(t, o.alpha)) *
                                 Eml(o.beta, k * std::pow(x, o.beta))};
    };
  }
  return f;
}

inline SolutionFamily fe6() {
  SolutionFamily f;
  f.info = {"FE6", "FE1", 1, "q(u) = -k a_1 u^2 + b_1 u + b_0, k != 0", {"b"}, "FE5", false};
  f.defaults = {{"k1", 1}, {"a1", 0.5}, {"a0", 1}, {"k2", 1}, {"k", 1}, {"b1", 0.5}, {"b0", 0}};
  f.derived_keys = {"b2"};
  f.derive = [](Params& p) {
    if (!p.count("b2")) p["b2"] = -P(p, "k") * P(p, "a1");
  };
  f.conditions = [](const Params& p, FracOrder) {
    return std::vector<ParamCondition>{
        equality("b2 = -k*a1", "q(u) = -k a_1 u^2 + b_1 u + b_0", P(p, "b2") + P(p, "k") * P(p, "a1"), "b2"),
        validity("k != 0", P(p, "k") != 0.0)};
  };
  f.pde_params = [](const Params& p) { return pick(p, {"a0", "a1", "b0", "b1", "b2", "k"}); };
  auto lam = [](const Params& p) {
    const double k = P(p, "k");
    return -k * k * P(p, "a1") * P(p, "k1") + P(p, "a0") * k * k + k * P(p, "b1");
  };
  f.separated = [lam](const Params& p, FracOrder o) {
    SeparatedComponent c;
    c.add(one(), C(o.alpha, P(p, "k1")));
    c.add(mlb(o.beta, -P(p, "k")), K(o.alpha, P(p, "k2"), 1.0, lam(p)));
    return Separated{c};
  };
  f.display = [lam](const Params& p, FracOrder o, double x, double t) {
    return std::vector<double>{P(p, "k1") + P(p, "k2") * Eml(o.alpha, lam(p) * std::pow(t, o.alpha)) *
                                                Eml(o.beta, -P(p, "k") * std::pow(x, o.beta))};
  };
  f.classical = [](const Params& p, double x, double t) {
    const double k = P(p, "k");
    return std::vector<double>{
        P(p, "k1") + P(p, "k2") * std::exp(k * ((-k * P(p, "k1") * P(p, "a1") + P(p, "a0") * k + P(p, "b1")) * t - x))};
  };
  return f;
}

// RE3 (classical), RE4, REE4
inline SolutionFamily re4_like(const std::string& id) {
  SolutionFamily f;
  const bool cls = id == "RE3", gen = id == "REE4";
  f.info = {id, "RE1", 1, "none", {}, id == "RE4" ? "RE3" : "", cls};
  f.defaults = {{"n", 2}, {"a0", 1}, {"b1", 0.5}, {"b0", 0}, {"r1", 1}, {"r2", 0.5}, {"k1", 1}, {"k2", -0.5}};
  if (gen) {
    f.defaults["c1"] = 1;
    f.defaults["c2"] = 0.5;
  }
  f.indexed = {{"r", 1, 0}, {"k", 1, 0}};
  f.derive = [](Params&) {};
  f.conditions = [](const Params&, FracOrder) { return std::vector<ParamCondition>{}; };
  f.pde_params = [](const Params& p) { return pick(p, {"a0", "b0", "b1"}); };
  f.separated = [gen](const Params& p, FracOrder o) {
    SeparatedComponent c;
    const double a0 = P(p, "a0"), b1 = P(p, "b1");
    if (gen) {
      c.add(one(), C(o.alpha, P(p, "c1")) + K(o.alpha, -P(p, "c2") * b1 * gamma_fn(o.beta + 1.0), o.alpha + 1.0, 0.0));
      c.add(xb(o.beta), C(o.alpha, P(p, "c2")));
    }
    for (int s = 1; s <= n_of(p); ++s) {
      const double ks = Pi(p, "k", s);
      c.add(mlb(o.beta, ks), K(o.alpha, Pi(p, "r", s), 1.0, (a0 * ks - b1) * ks));
    }
    return Separated{c};
  };
  auto frac = [gen](const Params& p, FracOrder o, double x, double t) {
    const double a0 = P(p, "a0"), b1 = P(p, "b1");
    double u = 0.0;
    if (gen)
      u += P(p, "c1") - P(p, "c2") * b1 * gamma_fn(o.beta + 1.0) / gamma_fn(o.alpha + 1.0) * std::pow(t, o.alpha) +
           P(p, "c2") * std::pow(x, o.beta);
    for (int s = 1; s <= n_of(p); ++s) {
      const double ks = Pi(p, "k", s);
      u += Pi(p, "r", s) * Eml(o.alpha, (a0 * ks - b1) * ks * std::pow(t, o.alpha)) * Eml(o.beta, ks * std::pow(x, o.beta));
    }
    return std::vector<double>{u};
  };
  auto cl = [](const Params& p, double x, double t) {
    const double a0 = P(p, "a0"), b1 = P(p, "b1");
    double u = 0.0;
    for (int s = 1; s <= n_of(p); ++s) {
      const double ks = Pi(p, "k", s);
      u += Pi(p, "r", s) * std::exp((a0 * ks - b1) * ks * t + ks * x);
    }
    return std::vector<double>{u};
  };
  if (!gen) f.classical = cl;
  if (cls)
    f.display = [cl](const Params& p, FracOrder o, double x, double t) {
      need_classical(o);
      return cl(p, x, t);
    };
  else
    f.display = frac;
  return f;
}

// RE7 (classical), RE8
inline SolutionFamily re8_like(bool cls) {
  SolutionFamily f;
  f.info = {cls ? "RE7" : "RE8", "RE5", 1, "a_1 = b_2/(2k)", {}, cls ? "" : "RE7", cls};
  if (!cls) f.info.figure_ids = {"c"};
  f.defaults = {{"k", 1}, {"k0", 1}, {"k1", 1}, {"b2", 1}};
  f.derived_keys = {"a1"};
  f.derive = [](Params& p) {
    if (!p.count("a1") && P(p, "k") != 0.0) p["a1"] = P(p, "b2") / (2.0 * P(p, "k"));
  };
  f.conditions = [](const Params& p, FracOrder) {
    const double k = P(p, "k");
    std::vector<ParamCondition> out{validity("k != 0", k != 0.0)};
    if (k != 0.0 && p.count("a1"))
      out.push_back(equality("a1 = b2/(2k)", "a_1 = b_2/(2k)", P(p, "a1") - P(p, "b2") / (2.0 * k), "a1"));
    return out;
  };
  f.pde_params = [](const Params& p) { return pick(p, {"a1", "b2"}); };
  auto lam = [](const Params& p) { return -0.5 * P(p, "b2") * P(p, "k") * P(p, "k0"); };
  f.separated = [lam](const Params& p, FracOrder o) {
    SeparatedComponent c;
    c.add(one(), C(o.alpha, P(p, "k0")));
    c.add(mlb(o.beta, P(p, "k")), K(o.alpha, P(p, "k1"), 1.0, lam(p)));
    return Separated{c};
  };
  auto cl = [](const Params& p, double x, double t) {
    const double k = P(p, "k");
    return std::vector<double>{P(p, "k0") + P(p, "k1") * std::exp(k * (-0.5 * P(p, "b2") * P(p, "k0") * t + x))};
  };
  f.classical = cl;
  if (cls)
    f.display = [cl](const Params& p, FracOrder o, double x, double t) {
      need_classical(o);
      return cl(p, x, t);
    };
  else
    f.display = [lam](const Params& p, FracOrder o, double x, double t) {
      return std::vector<double>{P(p, "k0") + P(p, "k1") * Eml(o.alpha, lam(p) * std::pow(t, o.alpha)) *
                                                  Eml(o.beta, P(p, "k") * std::pow(x, o.beta))};
    };
  return f;
}

inline SolutionFamily rpp() {
  SolutionFamily f;
  f.info = {"RPP", "RE9", 1, "none", {"d"}, "", false};
  f.defaults = {{"k0", 1}, {"k1", 1}};
  f.derive = [](Params&) {};
  f.conditions = [](const Params&, FracOrder) { return std::vector<ParamCondition>{}; };
  f.pde_params = [](const Params&) { return Params{}; };
  f.separated = [](const Params& p, FracOrder o) {
    const double k1 = P(p, "k1"), g = gamma_fn(o.beta + 1.0);
    SeparatedComponent c;
    c.add(one(), C(o.alpha, P(p, "k0")) + K(o.alpha, k1 * k1 * g * g, o.alpha + 1.0, 0.0));
    c.add(xb(o.beta), C(o.alpha, k1));
    return Separated{c};
  };
  f.display = [](const Params& p, FracOrder o, double x, double t) {
    const double k1 = P(p, "k1"), g = gamma_fn(o.beta + 1.0);
    return std::vector<double>{P(p, "k0") + k1 * k1 * g * g / gamma_fn(o.alpha + 1.0) * std::pow(t, o.alpha) +
                               k1 * std::pow(x, o.beta)};
  };
  return f;
}

// eqsr5 (classical), eqsr6
inline SolutionFamily eqsr6_like(bool cls) {
  SolutionFamily f;
  f.info = {cls ? "eqsr5" : "eqsr6", "eqsr2", 1, "a_i k = b_{i+1}, i=1..n; b_0 = 0", {}, cls ? "" : "eqsr5", cls};
  if (!cls) f.info.figure_ids = {"e"};
  f.defaults = {{"n", 2}, {"k", 1}, {"b1", 1}, {"a0", 0.5}, {"k0", 1}, {"a1", 1}, {"a2", 0.5}, {"b0", 0}};
  f.indexed = {{"a", 0, 0}, {"b", 0, 1}};
  f.derived_keys = {"b2", "b3", "..."};
  f.derive = [](Params& p) { derive_linked(p, "sr"); };
  f.conditions = [](const Params& p, FracOrder) {
    auto out = linked_coeffs(p, "sr");
    out.push_back(equality("b0 = 0", "b_0 = 0", P(p, "b0"), "b0"));
    return out;
  };
  f.pde_params = [](const Params& p) { return poly_pde_params(p, 0); };
  auto lam = [](const Params& p) { return -P(p, "k") * P(p, "a0") + P(p, "b1"); };
  f.separated = [lam](const Params& p, FracOrder o) {
    SeparatedComponent c;
    c.add(mlb1(o.beta, -P(p, "k")), K(o.alpha, P(p, "k0"), 1.0, lam(p)));
    return Separated{c};
  };
  // E_2(-k x^2) is cos(sqrt(k) x); the printed e^{-x^2} profile does not solve the equation
  auto cl = [lam](const Params& p, double x, double t) {
    return std::vector<double>{P(p, "k0") * std::exp(lam(p) * t) * e2_profile(P(p, "k"), x)};
  };
  f.classical = cl;
  if (cls)
    f.display = [cl](const Params& p, FracOrder o, double x, double t) {
      need_classical(o);
      return cl(p, x, t);
    };
  else
    f.display = [lam](const Params& p, FracOrder o, double x, double t) {
      return std::vector<double>{P(p, "k0") * Eml(o.alpha, lam(p) * std::pow(t, o.alpha)) *
                                 Eml(o.beta + 1.0, -P(p, "k") * std::pow(x, o.beta + 1.0))};
    };
  return f;
}

inline SolutionFamily rppp1() {
  SolutionFamily f;
  f.info = {"RPPP1", "eqsr7", 1, "b_2 = a_1 k", {"f"}, "", false};
  f.defaults = {{"k1", 1}, {"b1", -1}, {"k", 1}, {"a1", 1}};
  f.derived_keys = {"b2"};
  f.derive = [](Params& p) {
    if (!p.count("b2")) p["b2"] = P(p, "a1") * P(p, "k");
  };
  f.conditions = [](const Params& p, FracOrder) {
    return std::vector<ParamCondition>{equality("b2 = a1*k", "b_2 = a_1 k", P(p, "b2") - P(p, "a1") * P(p, "k"), "b2")};
  };
  f.pde_params = [](const Params& p) { return pick(p, {"a1", "b1", "b2"}); };
  f.separated = [](const Params& p, FracOrder o) {
    SeparatedComponent c;
    c.add(mlb1(o.beta, -P(p, "k")), K(o.alpha, P(p, "k1"), 1.0, P(p, "b1")));
    return Separated{c};
  };
  f.display = [](const Params& p, FracOrder o, double x, double t) {
    return std::vector<double>{P(p, "k1") * Eml(o.alpha, P(p, "b1") * std::pow(t, o.alpha)) *
                               Eml(o.beta + 1.0, -P(p, "k") * std::pow(x, o.beta + 1.0))};
  };
  return f;
}

inline SolutionFamily rppp2() {
  SolutionFamily f;
  f.info = {"RPPP2", "eqsr8", 1, "k != 0", {"g"}, "", false};
  f.defaults = {{"k1", 1}, {"k2", 1}, {"b0", 0.5}, {"k", 1}};
  f.derive = [](Params&) {};
  f.conditions = [](const Params& p, FracOrder) { return std::vector<ParamCondition>{validity("k != 0", P(p, "k") != 0.0)}; };
  f.pde_params = [](const Params& p) { return pick(p, {"k", "b0"}); };
  f.separated = [](const Params& p, FracOrder o) {
    const double k = P(p, "k");
    SeparatedComponent c;
    c.add(one(), K(o.alpha, P(p, "k1"), 1.0, -k) + K(o.alpha, P(p, "b0"), o.alpha + 1.0, -k));
    c.add(xb(o.beta), K(o.alpha, P(p, "k2"), 1.0, -k));
    return Separated{c};
  };
  f.display = [](const Params& p, FracOrder o, double x, double t) {
    const double k = P(p, "k"), ta = std::pow(t, o.alpha);
    return std::vector<double>{(P(p, "k1") + P(p, "k2") * std::pow(x, o.beta)) * Eml(o.alpha, -k * ta) +
                               P(p, "b0") * ta * Eml2(o.alpha, o.alpha + 1.0, -k * ta)};
  };
  return f;
}

// sr7 (with decay rate k) and sr8 (k absent)
inline SolutionFamily sr_like(bool damped) {
  SolutionFamily f;
  f.info = {damped ? "sr7" : "sr8", damped ? "eqsr9" : "eqsr10", 1, "none", {}, "", false};
  if (!damped) f.info.figure_ids = {"h"};
  f.defaults = {{"n", 1}, {"c", 1}, {"lambda1", 1}, {"lambda2", 1}, {"lambda3", 1}, {"lambda4", 1}, {"k1", 1}};
  if (damped) {
    f.defaults["k"] = 0.5;
    f.defaults["k1"] = 0.6;
  }
  f.indexed = {{"lambda", 1, 3}, {"k", 1, 0}};
  f.derive = [](Params&) {};
  f.conditions = [](const Params&, FracOrder) { return std::vector<ParamCondition>{}; };
  f.pde_params = [damped](const Params& p) { return damped ? pick(p, {"c", "k"}) : pick(p, {"c"}); };
  f.separated = [damped](const Params& p, FracOrder o) {
    const double k = damped ? P(p, "k") : 0.0, c = P(p, "c"), a = o.alpha;
    const double l3 = P(p, "lambda3");
    SeparatedComponent s;
    TimeExpr a1 = K(a, P(p, "lambda1"), 1.0, -k);
    // resolvent of -k acting on the x^{b+1} coefficient
    const TimeExpr forcing = K(a, c * l3 * gamma_fn(o.beta + 2.0), 1.0, -k);
    for (const auto& tt : forcing.terms()) a1 += detail::convolve_with_resolvent(a, -k, tt);
    s.add(one(), a1);
    s.add(xb(o.beta), K(a, P(p, "lambda2"), 1.0, -k));
    s.add(xb1(o.beta), K(a, l3, 1.0, -k));
    for (int r = 1; r <= n_of(p); ++r) {
      const double kr = Pi(p, "k", r);
      s.add(mlb1(o.beta, kr), K(a, Pi(p, "lambda", r + 3), 1.0, kr * c - k));
    }
    return Separated{s};
  };
  f.display = [damped](const Params& p, FracOrder o, double x, double t) {
    const double k = damped ? P(p, "k") : 0.0, c = P(p, "c"), a = o.alpha, ta = std::pow(t, a);
    const double l3 = P(p, "lambda3");
    const double poly = P(p, "lambda1") + P(p, "lambda2") * std::pow(x, o.beta) + l3 * std::pow(x, o.beta + 1.0);
    double u = damped ? poly * Eml(a, -k * ta) : poly;
    for (int r = 1; r <= n_of(p); ++r) {
      const double kr = Pi(p, "k", r);
      u += Pi(p, "lambda", r + 3) * Eml(a, (kr * c - k) * ta) * Eml(o.beta + 1.0, kr * std::pow(x, o.beta + 1.0));
    }
    if (damped)
      u += c * l3 * gamma_fn(o.beta + 2.0) * conv0({a, 1.0, a, -k, -k}, t);
    else
      u += c * l3 * gamma_fn(o.beta + 2.0) / gamma_fn(a + 1.0) * ta;
    return std::vector<double>{u};
  };
  return f;
}

// DS4 (classical), DS6
inline SolutionFamily ds6_like(bool cls) {
  SolutionFamily f;
  f.info = {cls ? "DS4" : "DS6", "DS2", 1, "(i+1) a_i k^2 = -b_{i+1}, i=1..n", {}, cls ? "" : "DS4", cls};
  if (!cls) f.info.figure_ids = {"i"};
  f.defaults = {{"n", 2}, {"k0", 0.02}, {"b1", 0.25}, {"a0", 0.5}, {"k", 1}, {"a1", 0.25}, {"a2", 0.1}};
  f.indexed = {{"a", 0, 0}, {"b", 1, 1}};
  f.derived_keys = {"b2", "b3", "..."};
  f.derive = [](Params& p) { derive_linked(p, "ds"); };
  f.conditions = [](const Params& p, FracOrder) { return linked_coeffs(p, "ds"); };
  f.pde_params = [](const Params& p) { return poly_pde_params(p, 1); };
  auto lam = [](const Params& p) { return P(p, "a0") * P(p, "k") * P(p, "k") + P(p, "b1"); };
  f.separated = [lam](const Params& p, FracOrder o) {
    SeparatedComponent c;
    c.add(mlb(o.beta, P(p, "k")), K(o.alpha, P(p, "k0"), 1.0, lam(p)));
    return Separated{c};
  };
  auto cl = [lam](const Params& p, double x, double t) {
    return std::vector<double>{P(p, "k0") * std::exp(lam(p) * t + P(p, "k") * x)};
  };
  f.classical = cl;
  if (cls)
    f.display = [cl](const Params& p, FracOrder o, double x, double t) {
      need_classical(o);
      return cl(p, x, t);
    };
  else
    f.display = [lam](const Params& p, FracOrder o, double x, double t) {
      return std::vector<double>{P(p, "k0") * Eml(o.alpha, lam(p) * std::pow(t, o.alpha)) *
                                 Eml(o.beta, P(p, "k") * std::pow(x, o.beta))};
    };
  return f;
}

// DS10 (with source b0) and DS11
inline SolutionFamily ds10_like(bool source) {
  SolutionFamily f;
  f.info = {source ? "DS10" : "DS11", source ? "DS7" : "DS8", 1, "none", {}, "", false};
  if (source) f.info.figure_ids = {"j"};
  f.defaults = {{"n", 1}, {"c1", 1}, {"c2", 1}, {"c3", 1}, {"b1", 1}, {"a0", 1}, {"k1", 1}};
  if (source) f.defaults["b0"] = 1;
  f.indexed = {{"c", 1, 2}, {"k", 1, 0}};
  f.derive = [](Params&) {};
  f.conditions = [](const Params&, FracOrder) { return std::vector<ParamCondition>{}; };
  f.pde_params = [source](const Params& p) { return source ? pick(p, {"a0", "b0", "b1"}) : pick(p, {"a0", "b1"}); };
  f.separated = [source](const Params& p, FracOrder o) {
    const double b1 = P(p, "b1"), a0 = P(p, "a0"), a = o.alpha;
    SeparatedComponent s;
    TimeExpr a1 = K(a, P(p, "c1"), 1.0, b1);
    if (source) a1 += K(a, P(p, "b0"), a + 1.0, b1);
    s.add(one(), a1);
    s.add(xb(o.beta), K(a, P(p, "c2"), 1.0, b1));
    for (int r = 1; r <= n_of(p); ++r) {
      const double kr = Pi(p, "k", r);
      s.add(mlb(o.beta, kr), K(a, Pi(p, "c", r + 2), 1.0, b1 + a0 * kr * kr));
    }
    return Separated{s};
  };
  f.display = [source](const Params& p, FracOrder o, double x, double t) {
    const double b1 = P(p, "b1"), a0 = P(p, "a0"), ta = std::pow(t, o.alpha);
    double u = (P(p, "c1") + P(p, "c2") * std::pow(x, o.beta)) * Eml(o.alpha, b1 * ta);
    if (source) u += P(p, "b0") * ta * Eml2(o.alpha, o.alpha + 1.0, b1 * ta);
    for (int r = 1; r <= n_of(p); ++r) {
      const double kr = Pi(p, "k", r);
      u += Pi(p, "c", r + 2) * Eml(o.alpha, (b1 + a0 * kr * kr) * ta) * Eml(o.beta, kr * std::pow(x, o.beta));
    }
    return std::vector<double>{u};
  };
  return f;
}

// cc7 (classical), cc8
inline SolutionFamily cc8_like(bool cls) {
  SolutionFamily f;
  f.info = {cls ? "cc7" : "cc8", "cc1", 2, cls ? "mu = -rho, delta != 0" : "mu = -rho", {}, cls ? "" : "cc7", cls};
  if (!cls) f.info.figure_ids = {"k", "l"};
  f.defaults = {{"k", 1}, {"a1", 1}, {"a2", 1}, {"a3", 1}, {"a4", 1}, {"delta", 1}, {"lambda", 1}, {"gamma", -1}, {"rho", 1}};
  f.derived_keys = {"mu"};
  f.derive = [](Params& p) {
    if (!p.count("mu")) p["mu"] = -P(p, "rho");
  };
  f.conditions = [cls](const Params& p, FracOrder) {
    std::vector<ParamCondition> out{equality("mu = -rho", "mu = -rho", P(p, "mu") + P(p, "rho"), "mu")};
    if (cls) out.push_back(validity("delta != 0", P(p, "delta") != 0.0));
    return out;
  };
  f.pde_params = [](const Params& p) { return pick(p, {"mu", "rho", "lambda", "gamma", "delta"}); };
  f.separated = [](const Params& p, FracOrder o) {
    const double k = P(p, "k"), a = o.alpha, r1 = k * k, r2 = k * k + P(p, "delta");
    const double lk = P(p, "lambda") * k * k + P(p, "gamma");
    SeparatedComponent u1, u2;
    u1.add(mlb(o.beta, k), K(a, P(p, "a1"), 1.0, r1));
    u1.add(mlb(o.beta, -k), K(a, P(p, "a2"), 1.0, r1));
    for (const auto& [ai, aj, sign] : {std::tuple{"a3", "a1", 1.0}, std::tuple{"a4", "a2", -1.0}}) {
      TimeExpr c = K(a, P(p, ai), 1.0, r2);
      c += detail::convolve_with_resolvent(a, r2, {TimeTerm::Kind::Kernel, lk * P(p, aj), 1.0, r1});
      u2.add(mlb(o.beta, sign * k), c);
    }
    return Separated{u1, u2};
  };
  auto cl = [](const Params& p, double x, double t) {
    const double k = P(p, "k"), d = P(p, "delta"), lk = P(p, "lambda") * k * k + P(p, "gamma");
    const double ed = std::exp(d * t);
    const double u1 = std::exp(k * k * t) * (P(p, "a1") * std::exp(k * x) + P(p, "a2") * std::exp(-k * x));
    const double u2 = (P(p, "a3") * ed + lk * P(p, "a1") * (ed - 1.0) / d) * std::exp(k * (k * t + x)) +
                      (P(p, "a4") * ed + lk * P(p, "a2") * (ed - 1.0) / d) * std::exp(k * (k * t - x));
    return std::vector<double>{u1, u2};
  };
  f.classical = cl;
  if (cls)
    f.display = [cl](const Params& p, FracOrder o, double x, double t) {
      need_classical(o);
      return cl(p, x, t);
    };
  else
    f.display = [](const Params& p, FracOrder o, double x, double t) {
      const double k = P(p, "k"), a = o.alpha, ta = std::pow(t, a), xb = std::pow(x, o.beta);
      const double lk = P(p, "lambda") * k * k + P(p, "gamma");
      const double ep = Eml(o.beta, k * xb), em = Eml(o.beta, -k * xb);
      const double s12 = P(p, "a1") * ep + P(p, "a2") * em;
      const double u1 = s12 * Eml(a, k * k * ta);
      const double u2 = (P(p, "a3") * ep + P(p, "a4") * em) * Eml(a, (k * k + P(p, "delta")) * ta) +
                        lk * s12 * conv0({a, a, 1.0, k * k + P(p, "delta"), k * k}, t);
      return std::vector<double>{u1, u2};
    };
  return f;
}

// cc9 (classical), cc10
inline SolutionFamily cc10_like(bool cls) {
  SolutionFamily f;
  f.info = {cls ? "cc9" : "cc10", "cc1", 2, "delta != 0", {}, cls ? "" : "cc9", cls};
  if (!cls) f.info.figure_ids = {"m", "n"};
  f.defaults = {{"k1", 1}, {"k2", 1}, {"k3", 1}, {"k4", 1}, {"rho", 1}, {"mu", 0.5}, {"delta", 1}, {"gamma", 1}, {"lambda", 0.5}};
  f.derive = [](Params&) {};
  f.conditions = [](const Params& p, FracOrder) {
    return std::vector<ParamCondition>{validity("delta != 0", P(p, "delta") != 0.0)};
  };
  f.pde_params = [](const Params& p) { return pick(p, {"mu", "rho", "lambda", "gamma", "delta"}); };
  f.separated = [](const Params& p, FracOrder o) {
    const double a = o.alpha, d = P(p, "delta"), g = P(p, "gamma"), g2 = std::pow(gamma_fn(o.beta + 1.0), 2);
    const double rm = P(p, "rho") + P(p, "mu"), k1 = P(p, "k1"), k2 = P(p, "k2"), k4 = P(p, "k4");
    SeparatedComponent u1, u2;
    u1.add(one(), C(a, k1) + K(a, rm * g2 * k2 * k4, a + 1.0, d) + K(a, rm * g2 * k2 * g * k2, 2.0 * a + 1.0, d));
    u1.add(xb(o.beta), C(a, k2));
    TimeExpr a3 = K(a, P(p, "k3"), 1.0, d) + K(a, g * k1, a + 1.0, d);
    a3 += TimeExpr::kernel_square(a, g * rm * g2 * k2 * k4, 2.0 * a + 1.0, d);
    a3 += TimeExpr::kernel_square(a, g * g * rm * g2 * k2 * k2, 3.0 * a + 1.0, d);
    u2.add(one(), a3);
    u2.add(xb(o.beta), K(a, k4, 1.0, d) + K(a, g * k2, a + 1.0, d));
    return Separated{u1, u2};
  };
  auto cl = [](const Params& p, double x, double t) {
    const double d = P(p, "delta"), g = P(p, "gamma"), rm = P(p, "rho") + P(p, "mu");
    const double k1 = P(p, "k1"), k2 = P(p, "k2"), k3 = P(p, "k3"), k4 = P(p, "k4");
    const double e = std::exp(d * t);
    const double u1 = k1 + rm * k2 * (k4 / d * (e - 1.0) + g * k2 / (d * d) * (e - 1.0 - d * t)) + k2 * x;
    const double u2 = k3 * e + k1 * g / d * (e - 1.0) + (k4 * e + g * k2 / d * (e - 1.0)) * x +
                      g * rm * k2 / (d * d) * (k4 * (d * t * e - e + 1.0) + g * k2 / d * (2.0 - 2.0 * e + d * t + d * t * e));
    return std::vector<double>{u1, u2};
  };
  f.classical = cl;
  if (cls)
    f.display = [cl](const Params& p, FracOrder o, double x, double t) {
      need_classical(o);
      return cl(p, x, t);
    };
  else
    f.display = [](const Params& p, FracOrder o, double x, double t) {
      const double a = o.alpha, d = P(p, "delta"), g = P(p, "gamma"), g2 = std::pow(gamma_fn(o.beta + 1.0), 2);
      const double rm = P(p, "rho") + P(p, "mu"), k1 = P(p, "k1"), k2 = P(p, "k2"), k3 = P(p, "k3"), k4 = P(p, "k4");
      const double ta = std::pow(t, a), z = d * ta, xb = std::pow(x, o.beta);
      const double e1 = Eml(a, z), ea = ta * Eml2(a, a + 1.0, z), e2a = ta * ta * Eml2(a, 2.0 * a + 1.0, z);
      const double u1 = k1 + g2 * rm * k2 * (k4 * ea + g * k2 * e2a) + k2 * xb;
      const double u2 = k3 * e1 + g * k1 * ea + (k4 * e1 + g * k2 * ea) * xb +
                        g2 * rm * k2 * k4 * g * conv0({a, a, a + 1.0, d, d}, t) +
                        g2 * rm * k2 * k2 * g * g * conv0({a, a, 2.0 * a + 1.0, d, d}, t);
      return std::vector<double>{u1, u2};
    };
  return f;
}

// eqc7 (classical), eqcs
inline SolutionFamily eqcs_like(bool cls) {
  SolutionFamily f;
  f.info = {cls ? "eqc7" : "eqcs", "eqc1", 2, "none", {}, cls ? "" : "eqc7", cls};
  if (!cls) f.info.figure_ids = {"o", "p"};
  f.defaults = {{"k1", 2}, {"k2", 1}, {"k3", 1}, {"k4", 1}};
  f.derive = [](Params&) {};
  f.conditions = [](const Params&, FracOrder) { return std::vector<ParamCondition>{}; };
  f.pde_params = [](const Params&) { return Params{}; };
  f.separated = [](const Params& p, FracOrder o) {
    const double a = o.alpha, G = gamma_fn(o.beta + 1.0);
    const double k1 = P(p, "k1"), k2 = P(p, "k2"), k3 = P(p, "k3"), k4 = P(p, "k4");
    SeparatedComponent u1, u2;
    u1.add(one(), C(a, k1) + K(a, k4 * G, a + 1.0, 0.0) + K(a, -k2 * k2 * G * G, 2.0 * a + 1.0, 0.0));
    u1.add(xb(o.beta), C(a, k2));
    u2.add(one(), C(a, k3) + K(a, -k1 * k2 * G, a + 1.0, 0.0) + K(a, -k2 * k4 * G * G, 2.0 * a + 1.0, 0.0) +
                      K(a, k2 * k2 * k2 * G * G * G, 3.0 * a + 1.0, 0.0));
    u2.add(xb(o.beta), C(a, k4) + K(a, -k2 * k2 * G, a + 1.0, 0.0));
    return Separated{u1, u2};
  };
  auto cl = [](const Params& p, double x, double t) {
    const double k1 = P(p, "k1"), k2 = P(p, "k2"), k3 = P(p, "k3"), k4 = P(p, "k4");
    return std::vector<double>{k1 + k4 * t - k2 * k2 * t * t / 2.0 + k2 * x,
                               k3 - k2 * (k1 + k4 / 2.0 * t - k2 * k2 / 6.0 * t * t) * t + (k4 - k2 * k2 * t) * x};
  };
  f.classical = cl;
  if (cls)
    f.display = [cl](const Params& p, FracOrder o, double x, double t) {
      need_classical(o);
      return cl(p, x, t);
    };
  else
    f.display = [](const Params& p, FracOrder o, double x, double t) {
      const double a = o.alpha, G = gamma_fn(o.beta + 1.0), xb = std::pow(x, o.beta);
      const double k1 = P(p, "k1"), k2 = P(p, "k2"), k3 = P(p, "k3"), k4 = P(p, "k4");
      const double t1 = std::pow(t, a) / gamma_fn(a + 1.0), t2 = std::pow(t, 2 * a) / gamma_fn(2 * a + 1.0),
                   t3 = std::pow(t, 3 * a) / gamma_fn(3 * a + 1.0);
      const double u1 = k1 + k4 * G * t1 - k2 * k2 * G * G * t2 + k2 * xb;
      const double u2 = k3 - k1 * k2 * G * t1 - k2 * k4 * G * G * t2 + k2 * k2 * k2 * G * G * G * t3 +
                        (k4 - k2 * k2 * G * t1) * xb;
      return std::vector<double>{u1, u2};
    };
  return f;
}

inline SolutionFamily s3s2() {
  SolutionFamily f;
  f.info = {"3s2", "gkdv", 3, "alpha in (0,1) \\ {1/2}, k_2 != 0", {"q", "r", "s"}, "", false};
  f.defaults = {{"k1", 2}, {"k2", 1}};
  f.derive = [](Params&) {};
  f.conditions = [](const Params& p, FracOrder o) {
    return std::vector<ParamCondition>{validity("alpha in (0,1)", o.alpha < 1.0),
                                       validity("alpha != 1/2", std::fabs(o.alpha - 0.5) > 1e-12),
                                       validity("k2 != 0", P(p, "k2") != 0.0)};
  };
  f.pde_params = [](const Params&) { return Params{}; };
  f.separated = [](const Params& p, FracOrder o) {
    const auto c = rl_power_ansatz(o.alpha, o.beta, P(p, "k1"), P(p, "k2"));
    Separated s(3);
    for (int q = 0; q < 3; ++q) {
      s[q].add(one(), c[2 * q]);
      s[q].add(xb(o.beta), c[2 * q + 1]);
    }
    return s;
  };
  f.display = [](const Params& p, FracOrder o, double x, double t) {
    const double a = o.alpha, G = gamma_fn(o.beta + 1.0), k1 = P(p, "k1"), k2 = P(p, "k2");
    const double rho = gamma_fn(1.0 - a) / gamma_fn(1.0 - 2.0 * a);
    const double shape = (k1 / k2 + std::pow(x, o.beta)) * std::pow(t, -a);
    return std::vector<double>{rho / (3.0 * G) * shape, rho * rho / (9.0 * k2 * G * G) * shape,
                               (k1 + k2 * std::pow(x, o.beta)) * std::pow(t, -a)};
  };
  return f;
}

}  // namespace detail

// Stable order: the solution displays as they appear.
inline const std::vector<SolutionFamily>& families() {
  static const std::vector<SolutionFamily> all = [] {
    using namespace detail;
    std::vector<SolutionFamily> v;
    v.push_back(e5_like(false));
    v.push_back(fe6());
    v.push_back(re4_like("RE3"));
    v.push_back(re4_like("RE4"));
    v.push_back(re4_like("REE4"));
    v.push_back(re8_like(true));
    v.push_back(re8_like(false));
    v.push_back(rpp());
    v.push_back(eqsr6_like(true));
    v.push_back(eqsr6_like(false));
    v.push_back(rppp1());
    v.push_back(rppp2());
    v.push_back(sr_like(true));
    v.push_back(sr_like(false));
    v.push_back(ds6_like(true));
    v.push_back(ds6_like(false));
    v.push_back(ds10_like(true));
    v.push_back(ds10_like(false));
    v.push_back(cc8_like(true));
    v.push_back(cc8_like(false));
    v.push_back(cc10_like(true));
    v.push_back(cc10_like(false));
    v.push_back(eqcs_like(true));
    v.push_back(eqcs_like(false));
    v.push_back(s3s2());
    return v;
  }();
  return all;
}

inline std::vector<FamilyInfo> list_families() {
  std::vector<FamilyInfo> out;
  for (const auto& f : families()) out.push_back(f.info);
  return out;
}

inline const SolutionFamily& lookup(const std::string& id) {
  for (const auto& f : families())
    if (f.info.id == id) return f;
  throw UnknownId("unknown solution family '" + id + "'");
}

// A family with resolved parameters and orders.
struct FamilyInstance {
  const SolutionFamily* family = nullptr;
  Params params;
  FracOrder order;

  const std::string& id() const { return family->info.id; }
  std::vector<ParamCondition> conditions() const { return family->conditions(params, order); }
};

namespace detail {

inline bool key_allowed(const SolutionFamily& f, const Params& p, const std::string& key) {
  if (f.defaults.count(key)) return true;
  for (const auto& d : f.derived_keys)
    if (d == key) return true;
  if (f.indexed.empty()) return false;
  const int n = p.count("n") ? static_cast<int>(p.at("n")) : 0;
  for (const auto& ix : f.indexed)
    for (int i = ix.lo; i <= n + ix.offset; ++i)
      if (key == indexed(ix.stem, i)) return true;
  // derived linked coefficients b_{i+1}
  if (!f.derived_keys.empty() && f.derived_keys.back() == "...") {
    static const std::regex b(R"(b\d+)");
    return std::regex_match(key, b);
  }
  return false;
}

}  // namespace detail

// Defaults, then overrides, then derived keys; checks every stated condition
// unless `enforce` is false (used by negative controls).
inline FamilyInstance instantiate(const std::string& id, const Params& overrides, FracOrder order, bool enforce = true) {
  const SolutionFamily& f = lookup(id);
  if (f.info.classical_only && (order.alpha != 1.0 || order.beta != 1.0))
    throw InadmissibleParams(id + " is stated only at alpha = beta = 1");
  FamilyInstance inst;
  inst.family = &f;
  inst.order = order;
  inst.params = f.defaults;
  for (const auto& [k, v] : overrides) inst.params[k] = v;
  for (const auto& [k, v] : overrides)
    if (!detail::key_allowed(f, inst.params, k)) throw ConfigError("family " + id + ": unknown parameter '" + k + "'");
  // indexed slots beyond n are dropped so a smaller n is self-consistent
  if (inst.params.count("n")) {
    const int n = param_int(inst.params, "n");
    for (auto it = inst.params.begin(); it != inst.params.end();) {
      bool drop = false;
      for (const auto& ix : f.indexed)
        if (it->first.rfind(ix.stem, 0) == 0 && it->first.size() > ix.stem.size()) {
          const std::string tail = it->first.substr(ix.stem.size());
          if (std::all_of(tail.begin(), tail.end(), ::isdigit) && std::stoi(tail) > n + ix.offset) drop = true;
        }
      if (drop && !overrides.count(it->first))
        it = inst.params.erase(it);
      else
        ++it;
    }
    for (const auto& ix : f.indexed)
      for (int i = ix.lo; i <= n + ix.offset; ++i)
        if (!inst.params.count(indexed(ix.stem, i)) && !(ix.stem == "b" && !f.derived_keys.empty() && i >= 2))
          throw InadmissibleParams("family " + id + ": missing parameter '" + indexed(ix.stem, i) + "'");
  }
  f.derive(inst.params);
  if (enforce)
    for (const auto& c : f.conditions(inst.params, order))
      if (!c.holds()) throw InadmissibleParams("family " + id + ": condition violated: " + c.name);
  return inst;
}

inline std::vector<double> eval_solution(const FamilyInstance& f, double x, double t) {
  if (!(x > 0.0) || !(t > 0.0)) throw DomainError("eval_solution: x and t must be positive");
  return f.family->display(f.params, f.order, x, t);
}

// The alpha = beta = 1 display paired with a family, evaluated without any
// Mittag-Leffler code.
inline std::vector<double> classical_limit(const FamilyInstance& f, double x, double t) {
  if (!f.family->classical) throw NoClassicalPair("family " + f.id() + " has no classical counterpart");
  return f.family->classical(f.params, x, t);
}

inline Separated separated_form(const FamilyInstance& f) { return f.family->separated(f.params, f.order); }

// The governing operator, built from the family's parameters.
inline OperatorSpec governing_operator(const FamilyInstance& f) {
  return make_operator(f.family->info.pde_id, f.order, f.family->pde_params(f.params));
}

// Values of the separated form at (x, t).
inline std::vector<double> eval_separated(const Separated& s, double x, double t) {
  std::vector<double> out;
  for (const auto& c : s) {
    double v = 0.0;
    for (std::size_t j = 0; j < c.basis.size(); ++j) v += c.coeffs[j](t) * c.basis[j](x);
    out.push_back(v);
  }
  return out;
}

}  // namespace fisub
