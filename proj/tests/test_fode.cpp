#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <fisub/fode.hpp>

#include "oracles.hpp"

using namespace fisub;

namespace {
Polynomial poly(int n, std::initializer_list<std::pair<Polynomial::Exponents, double>> terms) {
  Polynomial p(n);
  for (const auto& [e, c] : terms) p.add(e, c);
  return p;
}

FodeSystem system(double alpha, std::vector<Polynomial> rhs, std::vector<double> init) {
  FodeSystem s;
  s.alpha = alpha;
  s.rhs = std::move(rhs);
  s.initial = std::move(init);
  return s;
}

// d^a A1 = r1 A1,  d^a A2 = r2 A2 + c A1
FodeSystem chain(double alpha, double r1, double r2, double c, double a1, double a2) {
  return system(alpha, {poly(2, {{{1, 0}, r1}}), poly(2, {{{0, 1}, r2}, {{1, 0}, c}})}, {a1, a2});
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(1e-300, std::fabs(b)); }
}  // namespace

TEST(Convolution, Examples) {
  EXPECT_NEAR(ml_convolve({1.0, 1.0, 1.0, 1.0, 0.0}, 1.0), std::numbers::e - 1.0, 1e-13);
  EXPECT_NEAR(ml_convolve({1.0, 1.0, 1.0, 1.0, 0.0}, 1.0), oracle::ml_convolution(1.0, 1.0, 1.0, 1.0, 0.0, 1.0), 1e-12);
  // equal rates, alpha = 0.6, a = b = -1
  const double v = ml_convolve({0.6, 0.6, 1.0, -1.0, -1.0}, 1.0);
  EXPECT_LE(rel(v, oracle::ml_convolution(0.6, 0.6, 1.0, -1.0, -1.0, 1.0)), 1e-6);
  EXPECT_NEAR(v, 0.285170472306528, 1e-12);
}

TEST(Convolution, VanishesAtOrigin) {
  for (double t : {1e-4, 1e-6, 1e-8}) EXPECT_LT(std::fabs(ml_convolve({0.7, 1.0, 1.0, 1.2, -0.4}, t)), 10.0 * std::pow(t, 1.0));
  EXPECT_THROW(ml_convolve({0.7, 1.0, 1.0, 1.2, -0.4}, 0.0), DomainError);
}

TEST(Convolution, AgreesWithGaussJacobiQuadrature) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> da(0.3, 1.0), dr(-2.0, 2.0), dt(0.5, 2.0);
  std::uniform_int_distribution<int> dg(0, 3);
  for (int i = 0; i < 20; ++i) {
    const double alpha = da(rng), a = dr(rng), t = dt(rng);
    const double b = i % 5 == 4 ? a : dr(rng);
    auto pick = [&] {
      const double g[4] = {1.0, alpha, alpha + 1.0, 2.0 * alpha + 1.0};
      return g[dg(rng)];
    };
    const double g1 = pick(), g2 = pick();
    const double ref = oracle::ml_convolution(alpha, g1, g2, a, b, t);
    EXPECT_LE(rel(ml_convolve({alpha, g1, g2, a, b}, t), ref), 1e-6)
        << "draw " << i << ": alpha=" << alpha << " g=" << g1 << "," << g2 << " a=" << a << " b=" << b << " t=" << t;
  }
}

TEST(Convolution, NearlyEqualRates) {
  for (double alpha : {0.4, 0.75, 1.0})
    for (double a : {-1.5, 0.3, 1.2})
      for (double d : {1e-3, 1e-5, 1e-7}) {
        const double v = ml_convolve({alpha, alpha, 1.0, a, a + d}, 1.3);
        EXPECT_LE(rel(v, oracle::ml_convolution(alpha, alpha, 1.0, a, a + d, 1.3)), 1e-6) << alpha << " " << a << " " << d;
      }
}

TEST(LinearSolve, SingleComponentIsMittagLeffler) {
  // d^a A = (a0 k^2 - b1 k) A, A(0) = k0
  const double alpha = 0.7, lam = 1.5 * 0.64 - 0.4 * 0.8, k0 = 1.3;
  const auto sol = solve_linear_ml(system(alpha, {poly(1, {{{1}, lam}})}, {k0}));
  ASSERT_EQ(sol.size(), 1u);
  for (double t : {0.25, 1.0, 2.0}) EXPECT_NEAR(sol[0](t), k0 * mittag_leffler({alpha, 1.0}, lam * std::pow(t, alpha)), 1e-13);
  EXPECT_NEAR(sol[0](0.0), k0, 1e-15);
}

TEST(LinearSolve, ForcedComponentUsesConvolution) {
  // third component of the coupled system: a3 E(r3 t^a) + c a1 (kernel conv)
  const double alpha = 0.6, k = 0.9, delta = 0.3, lambda = 1.0, gamma = -1.0, a1 = 0.7, a3 = 1.1;
  const double r1 = k * k, r3 = k * k + delta, c = lambda * k * k + gamma;
  const auto sol = solve_linear_ml(chain(alpha, r1, r3, c, a1, a3));
  for (double t : {0.25, 0.8, 1.6}) {
    const double ref = a3 * mittag_leffler({alpha, 1.0}, r3 * std::pow(t, alpha)) + c * a1 * ml_convolve({alpha, alpha, 1.0, r3, r1}, t);
    EXPECT_NEAR(sol[1](t), ref, 1e-12);
  }
}

TEST(LinearSolve, ZeroRightHandSide) {
  const auto sol = solve_linear_ml(system(0.5, {Polynomial(1)}, {2.5}));
  for (double t : {0.1, 1.0, 3.0}) EXPECT_NEAR(sol[0](t), 2.5, 1e-14);
}

TEST(LinearSolve, RejectsCouplingWithoutForwardOrder) {
  // rotation: each component needs the other
  EXPECT_THROW(solve_linear_ml(system(0.8, {poly(2, {{{0, 1}, 1.0}}), poly(2, {{{1, 0}, -1.0}})}, {1.0, 0.0})), NotTriangular);
  EXPECT_THROW(solve_linear_ml(system(0.8, {poly(1, {{{2}, -1.0}})}, {1.0})), NotTriangular);
  FodeSystem rl = system(0.8, {poly(1, {{{1}, 1.0}})}, {1.0});
  rl.kind = DerivKind::RiemannLiouville;
  EXPECT_THROW(solve_linear_ml(rl), NotTriangular);
}

TEST(LinearSolve, ClassicalReduction) {
  // at alpha = 1 the chain is solved by variation of constants
  const double r1 = 0.81, r3 = 1.11, c = -0.19, a1 = 0.7, a3 = 1.1;
  const auto sol = solve_linear_ml(chain(1.0, r1, r3, c, a1, a3));
  const auto same = solve_linear_ml(chain(1.0, r1, r1, c, a1, a3));
  for (double t : {0.25, 1.0, 2.0}) {
    EXPECT_NEAR(sol[0](t), a1 * std::exp(r1 * t), 1e-10);
    EXPECT_NEAR(sol[1](t), a3 * std::exp(r3 * t) + c * a1 * (std::exp(r1 * t) - std::exp(r3 * t)) / (r1 - r3), 1e-10);
    EXPECT_NEAR(same[1](t), a3 * std::exp(r1 * t) + c * a1 * t * std::exp(r1 * t), 1e-10);
  }
}

TEST(LinearSolve, SatisfiesTheSystem) {
  // Caputo derivative of the closed form reproduces the right-hand side
  const double alpha = 0.75;
  const auto sys = chain(alpha, -0.6, 0.4, 1.3, 0.9, -0.2);
  const auto sol = solve_linear_ml(sys);
  for (double t : {0.3, 1.0, 1.9}) {
    const std::vector<double> a{sol[0](t), sol[1](t)};
    const auto phi = sys.eval(a);
    EXPECT_NEAR(sol[0].derivative(DerivKind::Caputo, t), phi[0], 1e-10);
    EXPECT_NEAR(sol[1].derivative(DerivKind::Caputo, t), phi[1], 1e-10);
  }
}

TEST(Adams, Examples) {
  const auto r = frac_adams(system(0.5, {poly(1, {{{1}, 1.0}})}, {1.0}), 1.0, 4000);
  EXPECT_NEAR(r.y.back()[0], mittag_leffler({0.5, 1.0}, 1.0), 1e-4);
  EXPECT_DOUBLE_EQ(r.t.back(), 1.0);

  const auto z = frac_adams(system(0.5, {Polynomial(1)}, {3.0}), 2.0, 100);
  for (const auto& y : z.y) EXPECT_EQ(y[0], 3.0);

  const auto q = frac_adams(system(1.0, {poly(1, {{{2}, -1.0}})}, {1.0}), 1.0, 1000);
  EXPECT_NEAR(q.y.back()[0], 0.5, 1e-6);
}

TEST(Adams, ConvergenceOrder) {
  // smooth forcing-free case: error against the closed form falls with h
  const double alpha = 0.8;
  const auto sys = chain(alpha, -0.5, 0.3, 1.0, 1.0, 0.5);
  const auto sol = solve_linear_ml(sys);
  double prev = 0.0;
  for (int steps : {200, 400, 800}) {
    const auto r = frac_adams(sys, 1.0, steps);
    const double err = std::fabs(r.y.back()[1] - sol[1](1.0));
    if (prev > 0.0) EXPECT_GT(std::log2(prev / err), 0.9);
    prev = err;
  }
}

TEST(Adams, Errors) {
  EXPECT_THROW(frac_adams(system(0.9, {poly(1, {{{2}, 1.0}})}, {10.0}), 5.0, 2000), Divergence);
  EXPECT_THROW(frac_adams(system(0.9, {Polynomial(1)}, {1.0}), 1.0, 0), DomainError);
  EXPECT_THROW(frac_adams(system(0.9, {Polynomial(1)}, {1.0}), 1.0, 100000), DomainError);
  EXPECT_THROW(frac_adams(system(0.9, {Polynomial(1)}, {}), 1.0, 10), DomainError);
}

TEST(PowerAnsatz, Coefficients) {
  const auto c = rl_power_ansatz(0.25, 1.0, 2.0, 1.0);
  ASSERT_EQ(c.size(), 6u);
  const double rho = oracle::gamma(0.75) / oracle::gamma(0.5);
  auto coef = [&](int j) { return c[j].terms().at(0).coef; };
  EXPECT_NEAR(coef(4), 2.0, 1e-15);
  EXPECT_NEAR(coef(5), 1.0, 1e-15);
  // A2 carries 1/(3 Gamma(beta+1)); the alternative 1/6 does not balance the system
  EXPECT_NEAR(coef(1), rho / 3.0, 1e-14);
  EXPECT_NEAR(coef(0), 2.0 * rho / 3.0, 1e-14);
  EXPECT_NEAR(coef(3), rho * rho / 9.0, 1e-14);
  for (const auto& a : c) {
    EXPECT_EQ(a.terms().size(), 1u);
    EXPECT_EQ(a.terms()[0].g, -0.25);
  }
}

TEST(PowerAnsatz, Errors) {
  EXPECT_THROW(rl_power_ansatz(0.5, 1.0, 2.0, 1.0), DomainError);
  EXPECT_THROW(rl_power_ansatz(0.25, 1.0, 2.0, 0.0), DomainError);
  EXPECT_THROW(rl_power_ansatz(1.0, 1.0, 2.0, 1.0), DomainError);
}

TEST(TimeExprTest, SingularAtOriginIsReported) {
  const auto e = TimeExpr::power(0.25, 1.0, -0.25);
  EXPECT_THROW(e(0.0), DomainError);
  EXPECT_NEAR(e(16.0), 0.5, 1e-15);
}
