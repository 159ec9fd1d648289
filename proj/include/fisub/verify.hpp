#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "catalog.hpp"
#include "errors.hpp"
#include "fracderiv.hpp"
#include "subspace.hpp"

namespace fisub {

enum class Tier { Analytic, Numeric };

inline const char* tier_name(Tier t) { return t == Tier::Analytic ? "analytic" : "numeric"; }

struct ResidualReport {
  std::string family;
  Tier tier = Tier::Analytic;
  GridSpec grid;
  double max_abs_residual = 0.0;
  double max_rel_residual = 0.0;  // relative to max |lhs| on the grid
  std::string notes;
};

inline constexpr double kAnalyticTol = 1e-9;
inline constexpr double kNegativeControlMin = 1e-2;
inline constexpr double kPerturbation = 0.5;

namespace detail {
inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}
}  // namespace detail

inline double numeric_tolerance(FracOrder o) { return (o.alpha <= 0.9 && o.beta <= 0.9) ? 2e-2 : 5e-2; }

// lhs = time derivative of the separated trajectory by closed rules,
// rhs = the governing operator on the space expansion. The display formula is
// checked against the separated form on the same grid and any disagreement is
// folded into the residual.
inline ResidualReport residual_analytic(const FamilyInstance& f, GridSpec g = {}) {
  g.validate();
  ResidualReport rep;
  rep.family = f.id();
  rep.tier = Tier::Analytic;
  rep.grid = g;
  const Separated sep = separated_form(f);
  const OperatorSpec op = governing_operator(f);
  if (static_cast<int>(sep.size()) != op.unknowns()) throw DomainError("separated form does not match the operator");
  SubspaceSpec ss;
  for (const auto& c : sep) ss.components.push_back(c.basis);
  std::vector<double> xs(g.nx);
  for (int i = 0; i < g.nx; ++i) xs[i] = g.x(i);
  const detail::CompiledOperator comp(op, ss, xs);

  double max_res = 0.0, max_lhs = 0.0, max_rhs = 0.0, max_mis = 0.0, max_u = 0.0;
  for (int j = 0; j < g.nt; ++j) {
    const double t = g.t(j);
    std::vector<Eigen::VectorXd> a(sep.size()), da(sep.size());
    for (std::size_t p = 0; p < sep.size(); ++p) {
      const auto n = static_cast<Eigen::Index>(sep[p].coeffs.size());
      a[p].resize(n);
      da[p].resize(n);
      for (Eigen::Index k = 0; k < n; ++k) {
        a[p][k] = sep[p].coeffs[k](t);
        da[p][k] = sep[p].coeffs[k].derivative(op.time_kind, t);
      }
    }
    std::vector<Eigen::VectorXd> uval(sep.size());
    for (std::size_t p = 0; p < sep.size(); ++p) {
      const Eigen::MatrixXd b = comp.basis_matrix(static_cast<int>(p));
      const Eigen::VectorXd lhs = b * da[p];
      const Eigen::VectorXd rhs = comp.apply(static_cast<int>(p), a).first;
      max_res = std::max(max_res, (lhs - rhs).cwiseAbs().maxCoeff());
      max_lhs = std::max(max_lhs, lhs.cwiseAbs().maxCoeff());
      max_rhs = std::max(max_rhs, rhs.cwiseAbs().maxCoeff());
      uval[p] = b * a[p];
    }
    for (int i = 0; i < g.nx; ++i) {
      const auto d = f.family->display(f.params, f.order, xs[i], t);
      for (std::size_t p = 0; p < sep.size(); ++p) {
        max_mis = std::max(max_mis, std::fabs(d[p] - uval[p][i]));
        max_u = std::max(max_u, std::fabs(d[p]));
      }
    }
  }
  const double scale = max_lhs > 0.0 ? max_lhs : (max_rhs > 0.0 ? max_rhs : 1.0);
  rep.max_abs_residual = max_res;
  rep.max_rel_residual = max_res / scale;
  const double mis = max_u > 0.0 ? max_mis / max_u : max_mis;
  rep.notes = std::string("closed rules, ") + (op.time_kind == DerivKind::Caputo ? "Caputo" : "Riemann-Liouville") +
              " time derivative; display vs separated form " + detail::sci(mis);
  if (mis > 1e-12 && mis > rep.max_rel_residual) {
    rep.max_rel_residual = mis;
    rep.max_abs_residual = std::max(rep.max_abs_residual, max_mis);
    rep.notes += " (display disagrees with its separated form)";
  }
  return rep;
}

inline ResidualReport residual_analytic(const std::string& id, const Params& overrides, FracOrder order, GridSpec g = {}) {
  return residual_analytic(instantiate(id, overrides, order), g);
}

struct NegativeControl {
  std::string condition;
  std::string key;
  ResidualReport report;
};

// One report per perturbable condition, with that parameter nudged by +0.5
// and the admissibility check bypassed.
inline std::vector<NegativeControl> negative_controls(const std::string& id, const Params& overrides, FracOrder order,
                                                      GridSpec g = {}) {
  const FamilyInstance base = instantiate(id, overrides, order);
  std::vector<NegativeControl> out;
  for (const auto& c : base.conditions()) {
    if (c.perturb_key.empty()) continue;
    Params p = overrides;
    p[c.perturb_key] = param(base.params, c.perturb_key) + kPerturbation;
    out.push_back({c.name, c.perturb_key, residual_analytic(instantiate(id, p, order, false), g)});
  }
  return out;
}

namespace detail {

// Uniform nodes k*h from 0; residual nodes are first..first+n-1 and the step is
// chosen so that `lo` lands on a node. Three nodes are kept past the last so
// nested centred differences never reach the one-sided end formulas.
struct Axis {
  double h = 0.0;
  int first = 0;
  int n = 0;
  int count() const { return first + n + 3; }
  double at(int k) const { return k * h; }
};

inline Axis make_axis(double lo, double hi, int n) {
  const double h0 = (hi - lo) / (n - 1);
  const int m = std::max(3, static_cast<int>(std::lround(lo / h0)));
  return {lo / m, m, n};
}

// second-order centred first derivative, one-sided at the ends
inline std::vector<double> gradient(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (f[k + 1] - f[k - 1]) / (2.0 * h);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return d;
}

// lim D^b f at 0 for f a smooth function of s = x^b: Gamma(b+1) F'(0), F'(0)
// from the cubic in s through the first four samples.
inline double caputo_at_origin(const std::vector<double>& f, double h, double b) {
  Eigen::Matrix3d m;
  Eigen::Vector3d r;
  for (int i = 0; i < 3; ++i) {
    const double s = std::pow((i + 1) * h, b);
    m(i, 0) = s;
    m(i, 1) = s * s;
    m(i, 2) = s * s * s;
    r(i) = f[i + 1] - f[0];
  }
  return gamma_fn(b + 1.0) * m.colPivHouseholderQr().solve(r)(0);
}

// D^{order} of sampled f (f[0] at x = 0).
// order in (0,1): L1, with the origin value filled in for later steps;
// order in (1,2): d/dx of the order-1 L1 result; integer orders: differences.
inline std::vector<double> numeric_derivative(const std::vector<double>& f, double h, double order) {
  if (order == 1.0) return gradient(f, h);
  if (order == 2.0) return gradient(gradient(f, h), h);
  if (order < 1.0) {
    auto v = l1_caputo(f, h, order);
    v[0] = caputo_at_origin(f, h, order);
    return v;
  }
  const double b = order - 1.0;
  auto v = l1_caputo(f, h, b);
  v[0] = caputo_at_origin(f, h, b);
  return gradient(v, h);
}

}  // namespace detail

// Samples the display on a uniform space-time grid from the origin and
// discretizes every derivative (L1 in t and x, centred differences at order 1).
inline ResidualReport residual_numeric(const FamilyInstance& f, GridSpec g) {
  g.validate();
  if (g.nx < 64 || g.nt < 64) throw DomainError("residual_numeric: nx and nt must be at least 64");
  const OperatorSpec op = governing_operator(f);
  if (op.time_kind != DerivKind::Caputo)
    throw DomainError("residual_numeric: Riemann-Liouville trajectories are singular at t = 0");
  const detail::Axis ax = detail::make_axis(g.x_lo, g.x_hi, g.nx), at = detail::make_axis(g.t_lo, g.t_hi, g.nt);
  const int nX = ax.count(), nT = at.count(), m = op.unknowns();
  const double alpha = f.order.alpha;

  // u[p][m * nX + k] at (x_k, t_m)
  std::vector<std::vector<double>> u(m, std::vector<double>(static_cast<std::size_t>(nX) * nT));
  for (int tm = 0; tm < nT; ++tm)
    for (int k = 0; k < nX; ++k) {
      const auto v = f.family->display(f.params, f.order, ax.at(k), at.at(tm));
      for (int p = 0; p < m; ++p) u[p][static_cast<std::size_t>(tm) * nX + k] = v[p];
    }
  auto U = [&](int p, int k, int tm) { return u[p][static_cast<std::size_t>(tm) * nX + k]; };

  // time derivative at residual nodes
  std::vector<std::vector<double>> lhs(m, std::vector<double>(static_cast<std::size_t>(g.nx) * g.nt));
  for (int p = 0; p < m; ++p)
    for (int i = 0; i < g.nx; ++i) {
      std::vector<double> col(nT);
      for (int tm = 0; tm < nT; ++tm) col[tm] = U(p, ax.first + i, tm);
      const auto d = alpha == 1.0 ? detail::gradient(col, at.h) : l1_caputo(col, at.h, alpha);
      for (int j = 0; j < g.nt; ++j) lhs[p][static_cast<std::size_t>(j) * g.nx + i] = d[at.first + j];
    }

  double max_res = 0.0, max_lhs = 0.0;
  for (int j = 0; j < g.nt; ++j) {
    const int tm = at.first + j;
    std::map<std::pair<int, std::vector<double>>, std::vector<double>> cache;
    auto factor = [&](const Factor& fa) -> const std::vector<double>& {
      const auto key = std::make_pair(fa.unknown, fa.orders);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      std::vector<double> line(nX);
      for (int k = 0; k < nX; ++k) line[k] = U(fa.unknown, k, tm);
      for (double o : fa.orders) line = detail::numeric_derivative(line, ax.h, o);
      return cache.emplace(key, std::move(line)).first->second;
    };
    for (int p = 0; p < m; ++p)
      for (int i = 0; i < g.nx; ++i) {
        const int k = ax.first + i;
        double rhs = 0.0;
        for (const auto& term : op.components[p]) {
          double v = term.coef;
          for (const auto& fa : term.factors) v *= std::pow(factor(fa)[k], fa.power);
          rhs += v;
        }
        const double l = lhs[p][static_cast<std::size_t>(j) * g.nx + i];
        max_res = std::max(max_res, std::fabs(l - rhs));
        max_lhs = std::max(max_lhs, std::fabs(l));
      }
  }
  ResidualReport rep;
  rep.family = f.id();
  rep.tier = Tier::Numeric;
  rep.grid = g;
  rep.grid.x_hi = g.x_lo + (g.nx - 1) * ax.h;
  rep.grid.t_hi = g.t_lo + (g.nt - 1) * at.h;
  rep.max_abs_residual = max_res;
  rep.max_rel_residual = max_res / (max_lhs > 0.0 ? max_lhs : 1.0);
  rep.notes = std::string(alpha == 1.0 ? "centred differences" : "L1") + " in t (h=" + std::to_string(at.h) + "), " +
              (f.order.beta == 1.0 ? "centred differences" : "L1") + " in x (h=" + std::to_string(ax.h) + ")";
  return rep;
}

// [0.5,2]^2 with h = 0.01
inline GridSpec default_numeric_grid() {
  GridSpec g;
  g.nx = g.nt = 151;
  return g;
}

inline ResidualReport residual_numeric(const FamilyInstance& f) { return residual_numeric(f, default_numeric_grid()); }

struct RefinementStudy {
  std::vector<ResidualReport> reports;  // h, h/2, h/4
  double slope = 0.0;                   // least-squares log-log slope of max_rel_residual vs h
  double required = 0.0;                // 0.8 (2 - alpha)
  bool passes() const { return slope >= required; }
};

// Residuals on the grid and on two successive interval doublings.
inline RefinementStudy refinement_study(const FamilyInstance& f, GridSpec g) {
  RefinementStudy s;
  s.required = 0.8 * (2.0 - f.order.alpha);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int lvl = 0; lvl < 3; ++lvl) {
    s.reports.push_back(residual_numeric(f, g));
    const double x = -lvl * std::log(2.0), y = std::log(s.reports.back().max_rel_residual);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    g.nx = 2 * (g.nx - 1) + 1;
    g.nt = 2 * (g.nt - 1) + 1;
  }
  s.slope = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
  return s;
}

}  // namespace fisub
