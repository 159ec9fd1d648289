#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "errors.hpp"

namespace fisub {

// Two-parameter Mittag-Leffler index pair: E_{beta,gamma}(z) = sum z^r / Gamma(beta r + gamma).
struct MLParams {
  double beta = 1.0;
  double gamma = 1.0;
};

inline constexpr double kMLZMax = 50.0;
inline constexpr int kMLTermBudget = 10000;

namespace detail {

inline constexpr double kLanczosG = 607.0 / 128.0;
inline constexpr double kLanczos[15] = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    3.3994649984811888699e-5,
    4.6523628927048575665e-5,   -9.8374475304879564677e-5,  1.5808870322491248884e-4,
    -2.1026444172410488319e-4,  2.1743961811521264320e-4,   -1.6431810653676389022e-4,
    8.4418223983852743293e-5,   -2.6190838401581408670e-5,  3.6899182659531622704e-6};

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// sin(pi x) with the argument reduced exactly, so zeros land on integers.
inline double sinpi(double x) {
  double sign = 1.0;
  if (x < 0) {
    x = -x;
    sign = -1.0;
  }
  double r = std::fmod(x, 2.0);
  if (r >= 1.0) {
    r -= 1.0;
    sign = -sign;
  }
  if (r > 0.5) r = 1.0 - r;
  return sign * std::sin(std::numbers::pi * r);
}

// Lanczos sum for x >= 0.5. The power is split in two halves so that
// t^(x-1/2) does not overflow before Gamma itself does.
inline double gamma_lanczos(double x) {
  const double z = x - 1.0;
  double a = kLanczos[0];
  for (int k = 1; k < 15; ++k) a += kLanczos[k] / (z + k);
  const double t = z + kLanczosG + 0.5;
  const double half = std::pow(t, 0.5 * (z + 0.5)) * std::exp(-0.5 * t);
  return std::sqrt(2.0 * std::numbers::pi) * half * half * a;
}

}  // namespace detail

inline double gamma_fn(double x) {
  if (std::isnan(x)) throw DomainError("gamma_fn: NaN argument");
  if (detail::is_nonpositive_integer(x)) throw PoleError("gamma_fn: pole at non-positive integer");
  if (x >= 0.5) {
    if (x > 171.7) throw OverflowError("gamma_fn: result exceeds double range");
    const double g = detail::gamma_lanczos(x);
    if (!std::isfinite(g)) throw OverflowError("gamma_fn: result exceeds double range");
    return g;
  }
  const double s = detail::sinpi(x);
  if (1.0 - x <= 171.0) {
    const double g = std::numbers::pi / (s * detail::gamma_lanczos(1.0 - x));
    if (!std::isfinite(g)) throw OverflowError("gamma_fn: result exceeds double range");
    return g;
  }
  // far left: |Gamma| is tiny, go through logs
  const double lg = std::log(std::numbers::pi) - std::log(std::fabs(s)) - std::lgamma(1.0 - x);
  return std::copysign(std::exp(lg), s);
}

// 1/Gamma(x), zero at the poles.
inline double rgamma(double x) {
  if (detail::is_nonpositive_integer(x)) return 0.0;
  if (x > 171.0) return std::exp(-std::lgamma(x));
  return 1.0 / gamma_fn(x);
}

namespace detail {

struct SeriesSum {
  double value = 0.0;
  double abs_sum = 0.0;
};

// sign of Gamma(x) for non-pole x
inline double gamma_sign(double x) {
  if (x > 0) return 1.0;
  return (static_cast<long long>(std::floor(x)) % 2 == 0) ? 1.0 : -1.0;
}

// z^r / Gamma(a), switching to logs when either piece leaves double range.
inline double ml_term(double z, int r, double a) {
  if (is_nonpositive_integer(a)) return 0.0;
  if (r == 0) return rgamma(a);
  if (z == 0.0) return 0.0;
  const double lz = std::log(std::fabs(z));
  if (a < 170.0 && r * lz < 700.0) return std::pow(z, r) * rgamma(a);
  const double sign = ((z < 0 && (r % 2 == 1)) ? -1.0 : 1.0) * gamma_sign(a);
  return sign * std::exp(r * lz - std::lgamma(a));
}

// Neumaier-compensated partial sums of a term generator. Stops once three
// consecutive terms fall below 1e-16 of the running sum.
template <class TermFn>
SeriesSum compensated_series(TermFn term_at, double start_arg_of, double arg_step) {
  double sum = 0.0, comp = 0.0, abs_sum = 0.0;
  int quiet = 0;
  for (int r = 0; r < kMLTermBudget; ++r) {
    const double term = term_at(r);
    if (!std::isfinite(term)) throw NonConvergence("Mittag-Leffler series: term overflow");
    const double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
    abs_sum += std::fabs(term);
    const double total = sum + comp;
    const bool past_poles = start_arg_of + arg_step * r > 0.0;
    if (past_poles && std::fabs(term) <= 1e-16 * std::fabs(total)) {
      if (++quiet >= 3) return {total, abs_sum};
    } else {
      quiet = 0;
    }
  }
  throw NonConvergence("Mittag-Leffler series: term budget exhausted");
}

// 1/Gamma(beta r + gamma) in extended precision for r = 0..n-1. Grids evaluate
// one (beta, gamma) pair at many arguments, so the values are kept per thread.
template <class Real>
const Real& rgamma_mp(double beta, double gamma, int r) {
  thread_local std::map<std::pair<double, double>, std::vector<Real>> cache;
  if (cache.size() > 64) cache.clear();
  auto& v = cache[{beta, gamma}];
  while (static_cast<int>(v.size()) <= r) {
    const int k = static_cast<int>(v.size());
    const double a = beta * k + gamma;
    v.push_back(is_nonpositive_integer(a) ? Real(0) : Real(1) / boost::math::tgamma(Real(beta) * k + Real(gamma)));
  }
  return v[r];
}

template <class Real>
double ml_series_mp(double beta, double gamma, double z, int digits, bool weighted, bool accept_absolute) {
  const Real zz(z);
  const Real tol = pow(Real(10), -(digits - 2));
  Real sum(0), abs_sum(0), zpow(1);
  int quiet = 0;
  for (int r = 0; r < kMLTermBudget; ++r) {
    const double a = beta * r + gamma;
    Real term = zpow * rgamma_mp<Real>(beta, gamma, r);
    if (weighted) term *= (r + 1);
    sum += term;
    abs_sum += abs(term);
    zpow *= zz;
    if (a > 0.0 && abs(term) <= tol * abs(sum)) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
    if (r + 1 == kMLTermBudget) throw NonConvergence("Mittag-Leffler series: term budget exhausted");
  }
  // whatever precision the cancellation ate must still leave ~17 digits,
  // unless the value is a zero crossing known to far below double resolution
  const Real err = abs_sum * pow(Real(10), -(digits - 3));
  if (err > Real(1e-17) * abs(sum) && !(accept_absolute && err < Real(1e-30)))
    throw NonConvergence("Mittag-Leffler series: cancellation beyond extended precision");
  return static_cast<double>(sum);
}

// Sum of z^r / Gamma(beta r + gamma), or of (r+1) z^r / Gamma(beta r + gamma)
// when weighted. Any real gamma is accepted (1/Gamma at poles is 0). Falls back
// to extended precision when the double sum has cancelled.
inline double ml_series_impl(double beta, double gamma, double z, bool weighted) {
  const SeriesSum s = compensated_series(
      [&](int r) { return (weighted ? r + 1.0 : 1.0) * ml_term(z, r, beta * r + gamma); }, gamma, beta);
  const double eps = std::numeric_limits<double>::epsilon();
  if (s.abs_sum * eps <= 1e-13 * std::fabs(s.value)) return s.value;
  if (s.abs_sum == 0.0) return 0.0;
  const double lost = std::fabs(s.value) > 0 ? std::log10(s.abs_sum / std::fabs(s.value)) : 40.0;
  using boost::multiprecision::cpp_bin_float_50;
  using boost::multiprecision::cpp_bin_float_100;
  // the double estimate of the value may itself be noise, so 50 digits is only a first try
  if (lost < 30.0) {
    try {
      return ml_series_mp<cpp_bin_float_50>(beta, gamma, z, 50, weighted, false);
    } catch (const NonConvergence&) {
    }
  }
  return ml_series_mp<cpp_bin_float_100>(beta, gamma, z, 100, weighted, true);
}

inline double ml_series(double beta, double gamma, double z) { return ml_series_impl(beta, gamma, z, false); }

// sum (r+1) z^r / Gamma(beta r + gamma), the equal-rate convolution series
inline double ml_square_series(double beta, double gamma, double z) { return ml_series_impl(beta, gamma, z, true); }

}  // namespace detail

inline double mittag_leffler(MLParams p, double z) {
  if (!(p.beta > 0.0) || !(p.gamma > 0.0)) throw DomainError("mittag_leffler: beta and gamma must be positive");
  if (std::isnan(z)) throw DomainError("mittag_leffler: NaN argument");
  if (std::fabs(z) > kMLZMax) throw DomainError("mittag_leffler: |z| exceeds Z_MAX");
  if (p.beta == 1.0 && p.gamma == 1.0) return std::exp(z);
  return detail::ml_series(p.beta, p.gamma, z);
}

// t^{gamma-1} E_{alpha,gamma}(rate t^alpha); gamma may sit at or below zero.
inline double ml_kernel(double alpha, double gamma, double rate, double t) {
  if (!(t > 0.0)) throw DomainError("ml_kernel: t must be positive");
  const double z = rate * std::pow(t, alpha);
  if (std::fabs(z) > kMLZMax) throw DomainError("ml_kernel: |z| exceeds Z_MAX");
  return std::pow(t, gamma - 1.0) * detail::ml_series(alpha, gamma, z);
}

// Caputo d^alpha/dt^alpha of t^{gamma-1} E_{beta,gamma}(k t^beta).
// The r=0 term is a constant when gamma == 1 and Caputo drops it; the
// remaining tail is re-indexed as z E_{beta,1+beta-alpha}(z).
inline double ml_caputo_derivative(double alpha, MLParams p, double k, double t) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("ml_caputo_derivative: alpha must lie in (0,1]");
  if (!(p.beta > 0.0)) throw DomainError("ml_caputo_derivative: beta must be positive");
  if (!(t > 0.0)) throw DomainError("ml_caputo_derivative: t must be positive");
  const double z = k * std::pow(t, p.beta);
  if (std::fabs(z) > kMLZMax) throw DomainError("ml_caputo_derivative: |z| exceeds Z_MAX");
  if (p.gamma == 1.0 && p.beta == alpha) return k * detail::ml_series(alpha, 1.0, z);
  if (p.gamma == 1.0) return std::pow(t, -alpha) * z * detail::ml_series(p.beta, 1.0 + p.beta - alpha, z);
  return std::pow(t, p.gamma - alpha - 1.0) * detail::ml_series(p.beta, p.gamma - alpha, z);
}

}  // namespace fisub
