#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fracderiv.hpp"
#include "polynomial.hpp"
#include "specfun.hpp"

namespace fisub {

// d^alpha A_j / dt^alpha = Phi_j(A_1..A_n), Phi_j polynomial.
struct FodeSystem {
  double alpha = 1.0;
  DerivKind kind = DerivKind::Caputo;
  std::vector<Polynomial> rhs;
  std::vector<double> initial;
  std::vector<std::string> names;

  std::size_t dimension() const { return rhs.size(); }

  std::vector<double> eval(std::span<const double> a) const {
    std::vector<double> out(rhs.size());
    for (std::size_t j = 0; j < rhs.size(); ++j) out[j] = rhs[j](a);
    return out;
  }

  std::vector<std::string> variable_names() const {
    if (names.size() == rhs.size()) return names;
    std::vector<std::string> n;
    for (std::size_t j = 0; j < rhs.size(); ++j) n.push_back("A" + std::to_string(j + 1));
    return n;
  }
};

// Convolution of t^{g1-1}E_{alpha,g1}(a t^alpha) with t^{g2-1}E_{alpha,g2}(b t^alpha).
struct MLConvolution {
  double alpha = 1.0;
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  double a = 0.0;
  double b = 0.0;
};

namespace detail {
inline bool same_rate(double a, double b) {
  return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

// value of t^{g-1} sum (r+1) (a t^alpha)^r / Gamma(alpha r + g)
inline double ml_square_kernel(double alpha, double g, double rate, double t) {
  const double z = rate * std::pow(t, alpha);
  if (std::fabs(z) > kMLZMax) throw DomainError("ml_square_kernel: |z| exceeds Z_MAX");
  return std::pow(t, g - 1.0) * ml_square_series(alpha, g, z);
}
}  // namespace detail

inline double ml_convolve(const MLConvolution& c, double t) {
  if (!(t > 0.0)) throw DomainError("ml_convolve: t must be positive");
  if (!(c.gamma1 > 0.0) || !(c.gamma2 > 0.0)) throw DomainError("ml_convolve: gamma1, gamma2 must be positive");
  const double g = c.gamma1 + c.gamma2;
  if (detail::same_rate(c.a, c.b)) return detail::ml_square_kernel(c.alpha, g, c.a, t);
  return (ml_kernel(c.alpha, g - c.alpha, c.a, t) - ml_kernel(c.alpha, g - c.alpha, c.b, t)) / (c.a - c.b);
}

// One closed-form time term.
//   Kernel:       coef * t^{g-1} E_{alpha,g}(rate t^alpha)
//   KernelSquare: coef * t^{g-1} sum (r+1)(rate t^alpha)^r / Gamma(alpha r + g)
//   Power:        coef * t^g
struct TimeTerm {
  enum class Kind { Kernel, KernelSquare, Power };
  Kind kind = Kind::Kernel;
  double coef = 0.0;
  double g = 1.0;
  double rate = 0.0;
};

class TimeExpr {
 public:
  TimeExpr() = default;
  explicit TimeExpr(double alpha) : alpha_(alpha) {}

  static TimeExpr constant(double alpha, double c) { return kernel(alpha, c, 1.0, 0.0); }
  static TimeExpr kernel(double alpha, double coef, double g, double rate) {
    TimeExpr e(alpha);
    e.add({TimeTerm::Kind::Kernel, coef, g, rate});
    return e;
  }
  static TimeExpr kernel_square(double alpha, double coef, double g, double rate) {
    TimeExpr e(alpha);
    e.add({TimeTerm::Kind::KernelSquare, coef, g, rate});
    return e;
  }
  static TimeExpr power(double alpha, double coef, double mu) {
    TimeExpr e(alpha);
    e.add({TimeTerm::Kind::Power, coef, mu, 0.0});
    return e;
  }

  double alpha() const { return alpha_; }
  const std::vector<TimeTerm>& terms() const { return terms_; }

  void add(const TimeTerm& term) {
    if (term.coef == 0.0) return;
    for (auto& t : terms_)
      if (t.kind == term.kind && t.g == term.g && t.rate == term.rate) {
        t.coef += term.coef;
        return;
      }
    terms_.push_back(term);
  }

  TimeExpr& operator+=(const TimeExpr& o) {
    for (const auto& t : o.terms_) add(t);
    return *this;
  }
  friend TimeExpr operator+(TimeExpr a, const TimeExpr& b) { return a += b; }
  friend TimeExpr operator*(double s, TimeExpr e) {
    for (auto& t : e.terms_) t.coef *= s;
    if (s == 0.0) e.terms_.clear();
    return e;
  }

  bool is_constant() const {
    for (const auto& t : terms_)
      if (!(t.kind == TimeTerm::Kind::Kernel && t.g == 1.0 && t.rate == 0.0)) return false;
    return true;
  }
  double constant_value() const {
    double c = 0.0;
    for (const auto& t : terms_) c += t.coef;
    return c;
  }

  // Value for t >= 0; at t = 0 only terms with a finite limit are accepted.
  double operator()(double t) const {
    double s = 0.0;
    for (const auto& term : terms_) s += term.coef * term_value(term, t);
    return s;
  }

  // d^alpha/dt^alpha of the expression, applied term by term.
  double derivative(DerivKind kind, double t) const {
    double s = 0.0;
    for (const auto& term : terms_) s += term.coef * term_derivative(term, kind, t);
    return s;
  }

 private:
  double term_value(const TimeTerm& term, double t) const {
    using K = TimeTerm::Kind;
    if (t == 0.0) {
      if (term.g > (term.kind == K::Power ? 0.0 : 1.0)) return 0.0;
      if (term.kind == K::Power && term.g == 0.0) return 1.0;
      if (term.kind != K::Power && term.g == 1.0) return 1.0;
      throw DomainError("TimeExpr: singular at t = 0");
    }
    switch (term.kind) {
      case K::Kernel:
        return ml_kernel(alpha_, term.g, term.rate, t);
      case K::KernelSquare:
        return detail::ml_square_kernel(alpha_, term.g, term.rate, t);
      case K::Power:
        return std::pow(t, term.g);
    }
    return 0.0;
  }

  double term_derivative(const TimeTerm& term, DerivKind kind, double t) const {
    using K = TimeTerm::Kind;
    if (!(t > 0.0)) throw DomainError("TimeExpr: derivative needs t > 0");
    const bool caputo = kind == DerivKind::Caputo;
    switch (term.kind) {
      case K::Power:
        return power_rule(kind, alpha_, term.g, t);
      case K::Kernel:
        if (caputo) {
          if (term.g < 1.0) throw DomainError("TimeExpr: Caputo derivative of a t^{g-1} kernel with g < 1");
          return ml_caputo_derivative(alpha_, {alpha_, term.g}, term.rate, t);
        }
        return ml_kernel(alpha_, term.g - alpha_, term.rate, t);
      case K::KernelSquare:
        if (caputo && term.g <= 1.0) throw DomainError("TimeExpr: Caputo derivative of a square kernel with g <= 1");
        return detail::ml_square_kernel(alpha_, term.g - alpha_, term.rate, t);
    }
    return 0.0;
  }

  double alpha_ = 1.0;
  std::vector<TimeTerm> terms_;
};

using Trajectory = std::vector<TimeExpr>;

namespace detail {

// K{alpha, lambda} convolved with one term of a forcing expression.
inline TimeExpr convolve_with_resolvent(double alpha, double lambda, const TimeTerm& f) {
  using K = TimeTerm::Kind;
  switch (f.kind) {
    case K::Kernel:
      if (same_rate(lambda, f.rate)) return TimeExpr::kernel_square(alpha, f.coef, alpha + f.g, lambda);
      return (f.coef / (lambda - f.rate)) *
             (TimeExpr::kernel(alpha, 1.0, f.g, lambda) + TimeExpr::kernel(alpha, -1.0, f.g, f.rate));
    case K::KernelSquare: {
      if (same_rate(lambda, f.rate))
        throw NotTriangular("solve_linear_ml: resonant forcing (triple pole) is not supported");
      // 1/((x-b)^2 (x-l)) = A/(x-l) - A/(x-b) + C/(x-b)^2
      const double A = 1.0 / ((lambda - f.rate) * (lambda - f.rate));
      const double C = 1.0 / (f.rate - lambda);
      TimeExpr e(alpha);
      e.add({K::Kernel, f.coef * A, f.g - alpha, lambda});
      e.add({K::Kernel, -f.coef * A, f.g - alpha, f.rate});
      e.add({K::KernelSquare, f.coef * C, f.g, f.rate});
      return e;
    }
    case K::Power:
      break;
  }
  throw NotTriangular("solve_linear_ml: power-law forcing has no Mittag-Leffler closed form here");
}

}  // namespace detail

// Forward substitution for affine triangular Caputo systems: each A_j solves
// d^alpha A_j = lambda A_j + f(t) with f built from already solved components.
inline Trajectory solve_linear_ml(const FodeSystem& sys) {
  if (sys.kind != DerivKind::Caputo) throw NotTriangular("solve_linear_ml: Caputo systems only");
  const std::size_t n = sys.dimension();
  if (sys.initial.size() != n) throw DomainError("solve_linear_ml: initial vector size mismatch");
  const double alpha = sys.alpha;
  std::vector<std::optional<TimeExpr>> sol(n);

  auto ready = [&](std::size_t j) {
    for (const auto& [e, c] : sys.rhs[j].terms())
      for (std::size_t i = 0; i < n; ++i)
        if (i != j && e[i] > 0 && !sol[i]) return false;
    return true;
  };

  for (std::size_t solved = 0; solved < n; ++solved) {
    std::size_t j = n;
    for (std::size_t cand = 0; cand < n; ++cand)
      if (!sol[cand] && ready(cand)) {
        j = cand;
        break;
      }
    if (j == n) throw NotTriangular("solve_linear_ml: no component can be solved by forward substitution");

    double lambda = 0.0;
    TimeExpr forcing(alpha);
    for (const auto& [e, c] : sys.rhs[j].terms()) {
      if (e[j] > 1) throw NotTriangular("solve_linear_ml: nonlinear self-coupling in component " + std::to_string(j + 1));
      double scalar = c;
      std::optional<TimeExpr> moving;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == j || e[i] == 0) continue;
        if (sol[i]->is_constant()) {
          scalar *= std::pow(sol[i]->constant_value(), e[i]);
        } else if (e[i] == 1 && !moving && e[j] == 0) {
          moving = *sol[i];
        } else {
          throw NotTriangular("solve_linear_ml: product of time-dependent components");
        }
      }
      if (e[j] == 1)
        lambda += scalar;
      else if (moving)
        forcing += scalar * *moving;
      else
        forcing += TimeExpr::constant(alpha, scalar);
    }

    TimeExpr a = TimeExpr::kernel(alpha, sys.initial[j], 1.0, lambda);
    for (const auto& term : forcing.terms()) a += detail::convolve_with_resolvent(alpha, lambda, term);
    sol[j] = a;
  }

  Trajectory out;
  for (auto& s : sol) out.push_back(*s);
  return out;
}

struct AdamsResult {
  std::vector<double> t;
  std::vector<std::vector<double>> y;  // y[step][component]
};

inline constexpr std::size_t kAdamsMaxNodes = 100000;

// Fractional Adams-Bashforth-Moulton predictor-corrector (Diethelm-Ford-Freed),
// full history, uniform steps on [0, t_end].
inline AdamsResult frac_adams(const FodeSystem& sys, double t_end, std::size_t steps) {
  if (sys.kind != DerivKind::Caputo) throw DomainError("frac_adams: Caputo systems only");
  const double alpha = sys.alpha;
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("frac_adams: alpha must lie in (0,1]");
  if (steps < 1 || steps + 1 > kAdamsMaxNodes) throw DomainError("frac_adams: step count outside [1, 1e5)");
  if (!(t_end > 0.0)) throw DomainError("frac_adams: t_end must be positive");
  const std::size_t d = sys.dimension();
  if (sys.initial.size() != d) throw DomainError("frac_adams: initial vector size mismatch");

  const double h = t_end / double(steps);
  const double cp = std::pow(h, alpha) / gamma_fn(alpha + 1.0);
  const double cc = std::pow(h, alpha) / gamma_fn(alpha + 2.0);

  std::vector<double> bw(steps + 1), aw(steps + 2);
  for (std::size_t k = 0; k <= steps; ++k) bw[k] = std::pow(k + 1.0, alpha) - std::pow(double(k), alpha);
  for (std::size_t k = 0; k <= steps + 1; ++k) {
    // a_{j,n+1} for j >= 1 depends only on k = n - j
    aw[k] = std::pow(k + 2.0, alpha + 1.0) + std::pow(double(k), alpha + 1.0) - 2.0 * std::pow(k + 1.0, alpha + 1.0);
  }

  AdamsResult res;
  res.t.resize(steps + 1);
  res.y.assign(steps + 1, std::vector<double>(d));
  std::vector<std::vector<double>> f(steps + 1);
  res.y[0] = sys.initial;
  res.t[0] = 0.0;
  f[0] = sys.eval(res.y[0]);

  std::vector<double> pred(d), corr(d);
  for (std::size_t n = 0; n < steps; ++n) {
    const double nn = double(n);
    const double a0 = std::pow(nn, alpha + 1.0) - (nn - alpha) * std::pow(nn + 1.0, alpha);
    for (std::size_t c = 0; c < d; ++c) {
      double sp = 0.0, sc = a0 * f[0][c];
      for (std::size_t j = 0; j <= n; ++j) sp += bw[n - j] * f[j][c];
      for (std::size_t j = 1; j <= n; ++j) sc += aw[n - j] * f[j][c];
      pred[c] = sp;
      corr[c] = sc;
    }
    for (std::size_t c = 0; c < d; ++c) pred[c] = sys.initial[c] + cp * pred[c];
    const auto fp = sys.eval(pred);
    for (std::size_t c = 0; c < d; ++c) {
      const double v = sys.initial[c] + cc * (fp[c] + corr[c]);
      if (!std::isfinite(v) || std::fabs(v) > 1e12) throw Divergence("frac_adams: iterate exceeded 1e12");
      res.y[n + 1][c] = v;
    }
    res.t[n + 1] = (n + 1) * h;
    f[n + 1] = sys.eval(res.y[n + 1]);
  }
  return res;
}

// A_j(t) = c_j t^{-alpha} solution of the three-coupled R-L system with
// u_3 = (k1 + k2 x^beta) t^{-alpha}.
inline Trajectory rl_power_ansatz(double alpha, double beta, double k1, double k2) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("rl_power_ansatz: alpha must lie in (0,1)");
  if (std::fabs(alpha - 0.5) < 1e-12) throw DomainError("rl_power_ansatz: alpha = 1/2 hits the Gamma(1-2 alpha) pole");
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("rl_power_ansatz: beta must lie in (0,1]");
  if (k2 == 0.0) throw DomainError("rl_power_ansatz: k2 must be nonzero");
  const double rho = gamma_fn(1.0 - alpha) / gamma_fn(1.0 - 2.0 * alpha);
  const double gb = gamma_fn(beta + 1.0);
  const double c2 = rho / (3.0 * gb);
  const double c4 = rho * rho / (9.0 * k2 * gb * gb);
  const double c[6] = {c2 * k1 / k2, c2, c4 * k1 / k2, c4, k1, k2};
  Trajectory out;
  for (double v : c) out.push_back(TimeExpr::power(alpha, v, -alpha));
  return out;
}

}  // namespace fisub
