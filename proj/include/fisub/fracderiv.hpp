#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "specfun.hpp"

namespace fisub {

enum class DerivKind { Caputo, RiemannLiouville };

// (alpha, beta): time order and space order, both in (0,1].
struct FracOrder {
  double alpha = 1.0;
  double beta = 1.0;

  FracOrder() = default;
  FracOrder(double a, double b) : alpha(a), beta(b) {
    if (!(a > 0.0 && a <= 1.0) || !(b > 0.0 && b <= 1.0))
      throw DomainError("FracOrder: alpha and beta must lie in (0,1]");
  }
};

struct BasisFunction {
  enum class Kind { Constant, Power, MLExp };
  Kind kind = Kind::Constant;
  double exponent = 0.0;  // Power
  double order = 0.0;     // MLExp: E_order(rate x^order)
  double rate = 0.0;

  static BasisFunction constant() { return {}; }
  static BasisFunction power(double e) {
    if (e == 0.0) return constant();
    if (!(e > 0.0)) throw DomainError("BasisFunction: power exponent must be >= 0");
    BasisFunction b;
    b.kind = Kind::Power;
    b.exponent = e;
    return b;
  }
  static BasisFunction ml_exp(double order, double rate) {
    if (!(order > 0.0)) throw DomainError("BasisFunction: ML order must be positive");
    BasisFunction b;
    b.kind = Kind::MLExp;
    b.order = order;
    b.rate = rate;
    return b;
  }

  double operator()(double x) const {
    switch (kind) {
      case Kind::Constant:
        return 1.0;
      case Kind::Power:
        if (x == 0.0) return 0.0;
        if (x < 0.0) throw DomainError("BasisFunction: negative x");
        return std::pow(x, exponent);
      case Kind::MLExp:
        if (x < 0.0) throw DomainError("BasisFunction: negative x");
        return mittag_leffler({order, 1.0}, rate * std::pow(x, order));
    }
    return 0.0;
  }

  bool operator==(const BasisFunction&) const = default;

  std::string label() const {
    auto g = [](double v) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", v);
      return std::string(buf);
    };
    switch (kind) {
      case Kind::Constant:
        return "1";
      case Kind::Power:
        return "x^" + g(exponent);
      case Kind::MLExp:
        return "E_" + g(order) + "(" + g(rate) + " x^" + g(order) + ")";
    }
    return "?";
  }
};

struct BasisTerm {
  double coef = 0.0;
  BasisFunction fn;
};

// sum coef_i * fn_i; empty means identically zero
using BasisCombination = std::vector<BasisTerm>;

inline double evaluate(const BasisCombination& c, double x) {
  double s = 0.0;
  for (const auto& t : c) s += t.coef * t.fn(x);
  return s;
}

namespace detail {
inline bool is_integer(double x) { return x == std::floor(x); }
}  // namespace detail

// d^alpha/dt^alpha t^mu
inline double power_rule(DerivKind kind, double alpha, double mu, double t) {
  if (!(alpha > 0.0)) throw DomainError("power_rule: alpha must be positive");
  if (kind == DerivKind::Caputo) {
    const double n = std::ceil(alpha);
    if (detail::is_integer(mu) && mu >= 0.0 && mu <= n - 1.0) return 0.0;
    if (!(mu > n - 1.0)) throw DomainError("power_rule: Caputo rule needs mu in {0..n-1} or mu > n-1");
  } else if (!(mu > -1.0)) {
    throw DomainError("power_rule: Riemann-Liouville rule needs mu > -1");
  }
  const double c = rgamma(mu - alpha + 1.0);
  if (c == 0.0) return 0.0;
  if (!(t > 0.0)) throw DomainError("power_rule: t must be positive");
  return gamma_fn(mu + 1.0) * c * std::pow(t, mu - alpha);
}

// Closed-form D^order of a basis element as a combination of basis elements.
// Orders in (1,2] act as the first derivative after D^(order-1); Gamma poles give 0.
inline BasisCombination basis_derivative(const BasisFunction& b, DerivKind kind, double order) {
  if (!(order > 0.0 && order <= 2.0)) throw NoClosedRule("basis_derivative: order outside (0,2]");
  using K = BasisFunction::Kind;
  switch (b.kind) {
    case K::Constant:
      if (kind == DerivKind::Caputo) return {};
      break;  // R-L does not annihilate constants; not in the rule table
    case K::Power: {
      const double mu = b.exponent;
      if (detail::is_integer(mu) && mu < std::ceil(order)) return {};
      // orders like beta+1 carry rounding, so poles and exponents are snapped
      double a = mu - order + 1.0;
      if (std::fabs(a - std::round(a)) < 1e-12) a = std::round(a);
      if (detail::is_nonpositive_integer(a)) return {};
      const double c = gamma_fn(mu + 1.0) * rgamma(a);
      if (a - 1.0 < 0.0) break;
      return {{c, a == 1.0 ? BasisFunction::constant() : BasisFunction::power(a - 1.0)}};
    }
    case K::MLExp:
      if (kind == DerivKind::Caputo && b.order == order) return {{b.rate, b}};
      break;
  }
  throw NoClosedRule("basis_derivative: no closed rule for " + b.label() + " at order " + std::to_string(order));
}

// Sequential application D^{o_m}...D^{o_1} (first listed order acts first).
inline BasisCombination basis_derivative_seq(const BasisFunction& b, DerivKind kind, std::span<const double> orders) {
  BasisCombination cur{{1.0, b}};
  for (double o : orders) {
    BasisCombination next;
    for (const auto& t : cur) {
      for (auto d : basis_derivative(t.fn, kind, o)) {
        d.coef *= t.coef;
        bool merged = false;
        for (auto& e : next)
          if (e.fn == d.fn) {
            e.coef += d.coef;
            merged = true;
            break;
          }
        if (!merged) next.push_back(d);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

// L1 scheme for the Caputo derivative on a uniform grid starting at 0.
// out[n] approximates the derivative at node n; out[0] is NaN (undefined).
inline std::vector<double> l1_caputo(std::span<const double> f, double h, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("l1_caputo: alpha must lie in (0,1)");
  if (f.size() < 3) throw DomainError("l1_caputo: need at least 3 samples");
  if (!(h > 0.0)) throw DomainError("l1_caputo: step must be positive");
  const std::size_t n_max = f.size() - 1;
  std::vector<double> b(n_max);
  for (std::size_t j = 0; j < n_max; ++j)
    b[j] = std::pow(double(j + 1), 1.0 - alpha) - std::pow(double(j), 1.0 - alpha);
  const double scale = std::pow(h, -alpha) / gamma_fn(2.0 - alpha);
  std::vector<double> out(f.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t n = 1; n <= n_max; ++n) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += b[j] * (f[n - j] - f[n - j - 1]);
    out[n] = scale * s;
  }
  return out;
}

// Grunwald-Letnikov approximation of the Riemann-Liouville derivative.
// out[0] is NaN, as for l1_caputo.
inline std::vector<double> gl_riemann_liouville(std::span<const double> f, double h, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("gl_riemann_liouville: alpha must lie in (0,1)");
  if (f.size() < 2) throw DomainError("gl_riemann_liouville: need at least 2 samples");
  if (!(h > 0.0)) throw DomainError("gl_riemann_liouville: step must be positive");
  std::vector<double> w(f.size());
  w[0] = 1.0;
  for (std::size_t j = 1; j < w.size(); ++j) w[j] = w[j - 1] * (1.0 - (alpha + 1.0) / double(j));
  const double scale = std::pow(h, -alpha);
  std::vector<double> out(f.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t n = 1; n < f.size(); ++n) {
    double s = 0.0;
    for (std::size_t j = 0; j <= n; ++j) s += w[j] * f[n - j];
    out[n] = scale * s;
  }
  return out;
}

}  // namespace fisub
