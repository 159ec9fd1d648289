#pragma once

// Reference values computed without any fisub numerics: Boost.Math in
// 50-digit arithmetic and Gauss-Jacobi rules from the Jacobi recurrence.

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;

inline double gamma(double x) { return static_cast<double>(boost::math::tgamma(mp(x))); }

// E_{b,g}(z) by direct 50-digit summation; fine for |z| <= 20
inline double mittag_leffler(double b, double g, double z) {
  mp sum = 0, zr = 1;
  const mp zz = z;
  for (int r = 0; r < 2000; ++r) {
    const mp term = zr / boost::math::tgamma(mp(b) * r + mp(g));
    sum += term;
    if (r > 5 && abs(term) < mp("1e-45") * (1 + abs(sum))) break;
    zr *= zz;
  }
  return static_cast<double>(sum);
}

// E_{1/2}(z) = exp(z^2) erfc(-z)
inline double ml_half(double z) {
  const mp zz = z;
  return static_cast<double>(exp(zz * zz) * boost::math::erfc(-zz));
}

// nodes and weights for int_{-1}^{1} (1-x)^a (1+x)^b f(x) dx (Golub-Welsch)
inline std::pair<std::vector<double>, std::vector<double>> gauss_jacobi(int n, double a, double b) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    J(k, k) = k == 0 ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double m = k + 1.0, t = 2.0 * m + a + b;
      const double off = m == 1.0 ? 4.0 * (1.0 + a) * (1.0 + b) / (t * t * (t + 1.0))
                                  : 4.0 * m * (m + a) * (m + b) * (m + a + b) / (t * t * (t + 1.0) * (t - 1.0));
      J(k, k + 1) = J(k + 1, k) = std::sqrt(off);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                              std::lgamma(a + b + 2.0));
  std::vector<double> x(n), w(n);
  for (int k = 0; k < n; ++k) {
    x[k] = es.eigenvalues()(k);
    w[k] = mu0 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
  }
  return {x, w};
}

namespace detail {
// t^{g-1} E_{a,g}(r t^a) in long double, plain series
inline long double kernel(double alpha, double g, double rate, long double t) {
  if (t == 0.0L) return g == 1.0 ? 1.0L : 0.0L;
  const long double z = rate * std::pow(t, (long double)alpha);
  long double s = 0.0L, zr = 1.0L;
  for (int r = 0; r < 400; ++r) {
    const long double term = zr / std::tgamma((long double)(alpha * r + g));
    s += term;
    if (r > 3 && std::fabs(term) < 1e-21L * (1.0L + std::fabs(s))) break;
    zr *= z;
  }
  return std::pow(t, (long double)(g - 1.0)) * s;
}

// int_0^{T} s^{alpha r + g - 1} h(s) ds summed over the series of the
// singular kernel, each power carried by its own Jacobi weight
template <class H>
long double panel(double alpha, double g, double rate, double T, H&& h, int nodes) {
  long double total = 0.0L, pw = 1.0L;
  for (int r = 0; r < 200; ++r) {
    const double p = alpha * r + g - 1.0;
    const auto [x, w] = gauss_jacobi(nodes, 0.0, p);
    long double acc = 0.0L;
    for (int i = 0; i < nodes; ++i) acc += w[i] * h(0.5L * T * (1.0L + x[i]));
    const long double c = pw / std::tgamma((long double)(alpha * r + g)) * std::pow(0.5L * T, (long double)(p + 1.0));
    const long double term = c * acc;
    total += term;
    if (r > 3 && std::fabs(term) < 1e-19L * (1.0L + std::fabs(total))) break;
    pw *= rate;
  }
  return total;
}
}  // namespace detail

// int_0^t (t-s)^{g1-1} E_{a,g1}(a (t-s)^alpha) s^{g2-1} E_{a,g2}(b s^alpha) ds
// split at t/2; on each half the kernel singular at that end is expanded in
// powers and integrated with matching Gauss-Jacobi weights.
inline double ml_convolution(double alpha, double g1, double g2, double a, double b, double t, int nodes = 64) {
  const long double T = t;
  // [0, t/2]: s-kernel singular at s = 0, (t-s)-kernel smooth
  const long double left = detail::panel(alpha, g2, b, 0.5 * t, [&](long double s) { return detail::kernel(alpha, g1, a, T - s); }, nodes);
  // [t/2, t]: substitute u = t - s
  const long double right = detail::panel(alpha, g1, a, 0.5 * t, [&](long double u) { return detail::kernel(alpha, g2, b, T - u); }, nodes);
  return static_cast<double>(left + right);
}

}  // namespace oracle
