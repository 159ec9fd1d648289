#pragma once

// Suites shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <fisub/equations.hpp>
#include <fisub/fode.hpp>
#include <fisub/subspace.hpp>

namespace checks {

struct AffineAgreement {
  std::string name;
  int dimension = 0;
  double max_rel = 0.0;  // worst component, sup over t in [0.25, 2] relative to sup |A_j|
};

// Every invariance case whose reduced system is affine triangular: closed form
// against the Adams integrator at h = 1e-3.
inline std::vector<AffineAgreement> affine_agreement(double h = 1e-3) {
  std::vector<AffineAgreement> out;
  const double t_end = 2.0, t_from = 0.25;
  const auto steps = static_cast<std::size_t>(std::lround(t_end / h));
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (const auto& c : fisub::invariance_cases()) {
    fisub::SubspaceSpec ss;
    const fisub::OperatorSpec op = fisub::build_operator(c, &ss);
    if (op.time_kind != fisub::DerivKind::Caputo) continue;
    fisub::FodeSystem sys = fisub::reduce_to_fode(op, ss);
    for (auto& a : sys.initial) a = dist(rng);
    fisub::Trajectory closed;
    try {
      closed = fisub::solve_linear_ml(sys);
    } catch (const fisub::NotTriangular&) {
      continue;
    }
    const auto num = fisub::frac_adams(sys, t_end, steps);
    AffineAgreement r{c.name, static_cast<int>(sys.dimension()), 0.0};
    for (std::size_t j = 0; j < sys.dimension(); ++j) {
      double diff = 0.0, scale = 0.0;
      for (std::size_t n = 0; n <= steps; ++n) {
        if (num.t[n] < t_from - 1e-12) continue;
        const double ref = closed[j](num.t[n]);
        diff = std::max(diff, std::fabs(num.y[n][j] - ref));
        scale = std::max(scale, std::fabs(ref));
      }
      r.max_rel = std::max(r.max_rel, scale > 0.0 ? diff / scale : diff);
    }
    out.push_back(r);
  }
  return out;
}

struct InvarianceFlip {
  std::string name;
  double residual = 0.0;  // as stated
  bool invariant = false;
  std::vector<std::pair<std::string, double>> perturbed;  // key, fit residual after +0.5
  bool flips() const {
    for (const auto& [k, r] : perturbed)
      if (r <= fisub::kNotInvariantTol) return false;
    return true;
  }
};

inline std::vector<InvarianceFlip> invariance_flips(int trials = 8, std::uint64_t seed = 1) {
  std::vector<InvarianceFlip> out;
  for (const auto& c : fisub::invariance_cases()) {
    fisub::SubspaceSpec ss;
    const fisub::OperatorSpec op = fisub::build_operator(c, &ss);
    const auto rep = fisub::check_invariance(op, ss, trials, seed);
    InvarianceFlip f{c.name, rep.max_fit_residual, rep.invariant, {}};
    for (const auto& cond : op.conditions) {
      if (cond.perturb_key.empty()) continue;
      fisub::InvarianceCase bad = c;
      bad.params[cond.perturb_key] = fisub::param_or(c.params, cond.perturb_key, 0.0) + 0.5;
      fisub::SubspaceSpec ss2;
      const fisub::OperatorSpec op2 = fisub::build_operator(bad, &ss2);
      f.perturbed.emplace_back(cond.perturb_key, fisub::check_invariance(op2, ss2, trials, seed).max_fit_residual);
    }
    out.push_back(f);
  }
  return out;
}

}  // namespace checks
