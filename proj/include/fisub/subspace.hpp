#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "fode.hpp"
#include "fracderiv.hpp"
#include "polynomial.hpp"

namespace fisub {

// u_q, or D^{o_m}...D^{o_1} u_q when orders is non-empty (first order acts first).
struct Factor {
  int unknown = 0;
  std::vector<double> orders;
  int power = 1;
};

// coef * product of factors; no factors means a constant source term.
struct Term {
  double coef = 0.0;
  std::vector<Factor> factors;
};

// A named parameter condition; satisfied when |residual| is negligible.
struct ParamCondition {
  std::string name;
  std::string text;
  double residual = 0.0;
  std::string perturb_key;  // parameter nudged by negative controls

  bool holds() const { return std::fabs(residual) <= 1e-10; }
};

struct OperatorSpec {
  std::string equation_id;
  FracOrder order;
  DerivKind time_kind = DerivKind::Caputo;
  std::vector<std::vector<Term>> components;  // right-hand side G_p per unknown
  std::map<std::string, double> parameters;
  std::vector<ParamCondition> conditions;

  int unknowns() const { return static_cast<int>(components.size()); }
};

struct SubspaceSpec {
  std::vector<std::vector<BasisFunction>> components;
  std::vector<std::vector<double>> scales;  // optional per-basis multipliers, default 1

  int dim(int p) const { return static_cast<int>(components[p].size()); }
  int total_dim() const {
    int d = 0;
    for (const auto& c : components) d += static_cast<int>(c.size());
    return d;
  }
  double scale(int p, int j) const {
    if (p < static_cast<int>(scales.size()) && j < static_cast<int>(scales[p].size())) return scales[p][j];
    return 1.0;
  }
};

struct InvarianceReport {
  bool invariant = false;
  double max_fit_residual = 0.0;
  int trials = 0;
  std::vector<std::string> violated_conditions;
};

inline constexpr double kInvariantTol = 1e-8;
inline constexpr double kNotInvariantTol = 1e-3;

// Collocation nodes: 25 log-spaced points on [0.5, 2.5].
inline std::vector<double> collocation_points() {
  std::vector<double> x(25);
  for (int i = 0; i < 25; ++i) x[i] = 0.5 * std::pow(5.0, i / 24.0);
  return x;
}

namespace detail {

// Operator with every needed D^{orders} phi_j tabulated on fixed nodes.
class CompiledOperator {
 public:
  CompiledOperator(const OperatorSpec& op, const SubspaceSpec& ss, std::vector<double> xs)
      : op_(op), ss_(ss), xs_(std::move(xs)) {
    if (static_cast<int>(ss.components.size()) != op.unknowns())
      throw DomainError("operator/subspace component count mismatch");
    for (double x : xs_)
      if (!(x > 0.0)) throw DomainError("apply_operator: x points must be positive");
    for (int p = 0; p < op.unknowns(); ++p) table(p, {});
    for (const auto& comp : op.components)
      for (const auto& term : comp)
        for (const auto& f : term.factors) table(f.unknown, f.orders);
  }

  const std::vector<double>& points() const { return xs_; }

  // D^{orders} of u_q = sum a_j s_j phi_j at the nodes.
  Eigen::VectorXd factor_values(const Factor& f, const std::vector<Eigen::VectorXd>& coeffs) const {
    return tables_.at({f.unknown, f.orders}) * coeffs[f.unknown];
  }

  // G_p values and the summed norms of the individual terms.
  std::pair<Eigen::VectorXd, double> apply(int p, const std::vector<Eigen::VectorXd>& coeffs) const {
    const Eigen::Index n = static_cast<Eigen::Index>(xs_.size());
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    double scale = 0.0;
    for (const auto& term : op_.components[p]) {
      Eigen::VectorXd v = Eigen::VectorXd::Constant(n, term.coef);
      for (const auto& f : term.factors) {
        const Eigen::VectorXd fv = factor_values(f, coeffs);
        for (int k = 0; k < f.power; ++k) v = v.cwiseProduct(fv);
      }
      g += v;
      scale += v.norm();
    }
    return {g, scale};
  }

  // Columns s_j phi_j(x).
  Eigen::MatrixXd basis_matrix(int p) const { return tables_.at({p, {}}); }

 private:
  void table(int q, const std::vector<double>& orders) {
    if (q < 0 || q >= op_.unknowns()) throw DomainError("factor refers to an unknown component");
    const std::pair<int, std::vector<double>> key{q, orders};
    if (tables_.count(key)) return;
    const int n = ss_.dim(q);
    Eigen::MatrixXd m(xs_.size(), n);
    for (int j = 0; j < n; ++j) {
      const auto comb = basis_derivative_seq(ss_.components[q][j], DerivKind::Caputo, orders);
      for (std::size_t i = 0; i < xs_.size(); ++i) m(i, j) = ss_.scale(q, j) * evaluate(comb, xs_[i]);
    }
    tables_[key] = m;
    if (!orders.empty()) table(q, {});
  }

  const OperatorSpec& op_;
  const SubspaceSpec& ss_;
  std::vector<double> xs_;
  std::map<std::pair<int, std::vector<double>>, Eigen::MatrixXd> tables_;
};

inline std::vector<Eigen::VectorXd> to_eigen(const std::vector<std::vector<double>>& c) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& v : c) out.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()));
  return out;
}

inline void check_gram(const Eigen::MatrixXd& b, int p) {
  Eigen::MatrixXd n = b;
  for (Eigen::Index j = 0; j < n.cols(); ++j) {
    const double norm = n.col(j).norm();
    if (norm == 0.0) throw DegenerateBasis("basis function vanishes on the collocation nodes");
    n.col(j) /= norm;
  }
  const double det = (n.transpose() * n).determinant();
  if (!(det > 1e-10))
    throw DegenerateBasis("collocation Gram determinant " + std::to_string(det) + " for component " + std::to_string(p + 1));
}

}  // namespace detail

// G_p[u_1..u_m] at x_points with u_p = sum_j coeffs[p][j] phi_j^p.
inline std::vector<std::vector<double>> apply_operator(const OperatorSpec& op, const SubspaceSpec& ss,
                                                       const std::vector<std::vector<double>>& coeffs,
                                                       const std::vector<double>& x_points) {
  detail::CompiledOperator c(op, ss, x_points);
  const auto a = detail::to_eigen(coeffs);
  std::vector<std::vector<double>> out;
  for (int p = 0; p < op.unknowns(); ++p) {
    const Eigen::VectorXd g = c.apply(p, a).first;
    out.emplace_back(g.data(), g.data() + g.size());
  }
  return out;
}

namespace detail {

struct Projection {
  std::vector<Eigen::VectorXd> coeffs;  // per component
  double residual = 0.0;               // max relative fit residual over components
};

inline Projection project(const CompiledOperator& c, int unknowns, const std::vector<Eigen::VectorXd>& a,
                          const std::vector<Eigen::ColPivHouseholderQR<Eigen::MatrixXd>>& qr,
                          const std::vector<Eigen::MatrixXd>& basis) {
  Projection pr;
  for (int p = 0; p < unknowns; ++p) {
    const auto [g, scale] = c.apply(p, a);
    const Eigen::VectorXd coef = qr[p].solve(g);
    // relative to the summed size of the operator's terms: an in-span result
    // that cancels to rounding noise must still count as in-span
    const double r = scale > 0.0 ? (g - basis[p] * coef).norm() / scale : 0.0;
    pr.residual = std::max(pr.residual, r);
    pr.coeffs.push_back(coef);
  }
  return pr;
}

struct Fitter {
  CompiledOperator op;
  std::vector<Eigen::MatrixXd> basis;
  std::vector<Eigen::ColPivHouseholderQR<Eigen::MatrixXd>> qr;

  Fitter(const OperatorSpec& o, const SubspaceSpec& ss) : op(o, ss, collocation_points()) {
    const int need = 2 * [&] {
      int m = 0;
      for (int p = 0; p < o.unknowns(); ++p) m = std::max(m, ss.dim(p));
      return m;
    }() + 1;
    if (static_cast<int>(op.points().size()) < need) throw DomainError("too few collocation points for basis size");
    for (int p = 0; p < o.unknowns(); ++p) {
      basis.push_back(op.basis_matrix(p));
      check_gram(basis.back(), p);
      qr.emplace_back(basis.back());
    }
  }

  Projection project(const std::vector<Eigen::VectorXd>& a) const {
    return detail::project(op, static_cast<int>(basis.size()), a, qr, basis);
  }
};

}  // namespace detail

inline InvarianceReport check_invariance(const OperatorSpec& op, const SubspaceSpec& ss, int trials,
                                         std::uint64_t seed) {
  if (trials < 1) throw DomainError("check_invariance: trials must be >= 1");
  detail::Fitter fit(op, ss);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  InvarianceReport rep;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    std::vector<Eigen::VectorXd> a;
    for (int p = 0; p < op.unknowns(); ++p) {
      Eigen::VectorXd v(ss.dim(p));
      for (Eigen::Index j = 0; j < v.size(); ++j) {
        double d;
        do d = dist(rng);
        while (std::fabs(d) < 1e-3);
        v[j] = d;
      }
      a.push_back(v);
    }
    rep.max_fit_residual = std::max(rep.max_fit_residual, fit.project(a).residual);
  }
  rep.invariant = rep.max_fit_residual <= kInvariantTol;
  for (const auto& c : op.conditions)
    if (!c.holds()) rep.violated_conditions.push_back(c.name + ": " + c.text);
  return rep;
}

// Phi_j as polynomials of degree <= 3, by exact interpolation on the principal
// lattice {m : |m| <= 3} of coefficient space.
inline FodeSystem reduce_to_fode(const OperatorSpec& op, const SubspaceSpec& ss) {
  const auto rep = check_invariance(op, ss, 4, 0);
  if (!rep.invariant)
    throw NotInvariant("reduce_to_fode: subspace is not invariant (fit residual " +
                       std::to_string(rep.max_fit_residual) + ")");
  detail::Fitter fit(op, ss);
  const int d = ss.total_dim();
  const auto mons = monomials_up_to(d, 3);
  const Eigen::Index m = static_cast<Eigen::Index>(mons.size());

  auto split = [&](const std::vector<double>& flat) {
    std::vector<Eigen::VectorXd> a;
    int off = 0;
    for (int p = 0; p < op.unknowns(); ++p) {
      a.push_back(Eigen::Map<const Eigen::VectorXd>(flat.data() + off, ss.dim(p)));
      off += ss.dim(p);
    }
    return a;
  };
  auto phi = [&](const std::vector<double>& flat) {
    const auto pr = fit.project(split(flat));
    Eigen::VectorXd out(d);
    int off = 0;
    for (const auto& c : pr.coeffs) {
      out.segment(off, c.size()) = c;
      off += static_cast<int>(c.size());
    }
    return out;
  };
  auto monomial = [](const Polynomial::Exponents& e, const std::vector<double>& a) {
    double v = 1.0;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) v *= a[i];
    return v;
  };

  Eigen::MatrixXd vander(m, m), values(m, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    const std::vector<double> a(mons[i].begin(), mons[i].end());
    for (Eigen::Index k = 0; k < m; ++k) vander(i, k) = monomial(mons[k], a);
    values.row(i) = phi(a).transpose();
  }
  const Eigen::MatrixXd coef = vander.fullPivLu().solve(values);

  FodeSystem sys;
  sys.alpha = op.order.alpha;
  sys.kind = op.time_kind;
  const double big = std::max(1.0, coef.cwiseAbs().maxCoeff());
  for (int j = 0; j < d; ++j) {
    Polynomial poly(d);
    for (Eigen::Index k = 0; k < m; ++k)
      if (std::fabs(coef(k, j)) > 1e-10 * big) poly.add(mons[k], coef(k, j));
    sys.rhs.push_back(poly);
  }
  sys.initial.assign(d, 0.0);
  for (int j = 0; j < d; ++j) sys.names.push_back("A" + std::to_string(j + 1));

  // off-lattice check: a genuinely higher-degree Phi would fail here
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> a(d);
    for (auto& v : a) v = dist(rng);
    const Eigen::VectorXd ref = phi(a);
    for (int j = 0; j < d; ++j)
      if (std::fabs(sys.rhs[j](a) - ref[j]) > 1e-7 * std::max(1.0, ref.cwiseAbs().maxCoeff()))
        throw NonConvergence("reduce_to_fode: Phi is not a polynomial of degree <= 3");
  }
  return sys;
}

}  // namespace fisub
