// fisub command-line front end.
// Exit codes: 0 pass, 1 verification failure, 2 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fisub/fisub.hpp>

namespace {

using namespace fisub;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Params parse_sets(const std::vector<std::string>& sets) {
  Params p;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + s + "'");
    const std::string key = s.substr(0, eq);
    p[key] = parse_decimal(s.substr(eq + 1), "--set " + key);
  }
  return p;
}

// flags override config, config overrides defaults
Params merged(const std::optional<Config>& cfg, const std::string& section, const Params& sets) {
  Params p = cfg ? cfg->section(section) : Params{};
  for (const auto& [k, v] : sets) p[k] = v;
  return p;
}

// --- ml -------------------------------------------------------------------

struct MlArgs {
  double beta = 1.0, gamma = 1.0;
  std::vector<double> z;
  std::optional<double> alpha;
  double k = 1.0, t = 1.0;
};

int cmd_ml(const MlArgs& a) {
  const MLParams p{a.beta, a.gamma};
  if (a.alpha) {
    std::cout << "D^" << num(*a.alpha) << " [t^" << num(a.gamma - 1.0) << " E_{" << num(a.beta) << "," << num(a.gamma)
              << "}(" << num(a.k) << " t^" << num(a.beta) << ")] at t=" << num(a.t) << " = "
              << num(ml_caputo_derivative(*a.alpha, p, a.k, a.t)) << "\n";
    return kPass;
  }
  if (a.z.empty()) throw UsageError("ml: give at least one z value, or --alpha for the Caputo derivative");
  for (double z : a.z) std::cout << "E_{" << num(a.beta) << "," << num(a.gamma) << "}(" << num(z) << ") = " << num(mittag_leffler(p, z)) << "\n";
  return kPass;
}

// --- deriv ----------------------------------------------------------------

struct DerivArgs {
  std::string kind = "caputo";
  double alpha = 0.5;
  std::optional<double> mu, t;
  std::string basis;
  double beta = 0.5;
  std::vector<std::string> sets;
};

int cmd_deriv(const DerivArgs& a) {
  const DerivKind kind = a.kind == "rl" ? DerivKind::RiemannLiouville : DerivKind::Caputo;
  if (!a.basis.empty()) {
    const SubspaceSpec ss = parse_subspace(a.basis, a.beta, parse_sets(a.sets));
    for (const auto& comp : ss.components)
      for (const auto& b : comp) {
        std::cout << "D^" << num(a.alpha) << " " << b.label() << " = ";
        const auto r = basis_derivative(b, kind, a.alpha);
        if (r.empty()) std::cout << "0";
        for (std::size_t i = 0; i < r.size(); ++i) std::cout << (i ? " + " : "") << num(r[i].coef) << "*" << r[i].fn.label();
        std::cout << "\n";
      }
    return kPass;
  }
  if (!a.mu || !a.t) throw UsageError("deriv: give --mu and --t for the power rule, or --basis");
  std::cout << "D^" << num(a.alpha) << " t^" << num(*a.mu) << " at t=" << num(*a.t) << " = "
            << num(power_rule(kind, a.alpha, *a.mu, *a.t)) << "\n";
  return kPass;
}

// --- figure ---------------------------------------------------------------

struct FigureArgs {
  std::string id;
  int points = 60;
  std::string out;
  double from = kSweepLo, to = kSweepHi;
};

int cmd_figure(const FigureArgs& a) {
  if (a.points < 2) throw UsageError("figure: --points must be >= 2");
  std::vector<std::string> ids;
  if (a.id == "all") {
    if (a.out.empty()) throw UsageError("figure all: --out must name a directory");
    std::filesystem::create_directories(a.out);
    for (const auto& f : figures()) ids.push_back(f.id);
  } else {
    figure(a.id);
    ids.push_back(a.id);
  }
  for (const auto& id : ids) {
    const std::string csv = figure_csv(id, a.points, a.from, a.to);
    if (a.out.empty()) {
      std::cout << csv;
      continue;
    }
    const std::string path = a.id == "all" ? (std::filesystem::path(a.out) / ("fig_" + id + ".csv")).string() : a.out;
    std::ofstream os(path, std::ios::binary);
    os << csv;
    if (!os) {
      std::cerr << "fisub: cannot write " << path << "\n";
      return kFail;
    }
    std::cerr << "wrote " << path << "\n";
  }
  return kPass;
}

// --- verify ---------------------------------------------------------------

struct VerifyArgs {
  std::string family = "all";
  std::string tier = "analytic";
  std::string config;
  std::optional<double> alpha, beta;
  std::vector<std::string> sets;
  bool negative = false;
  std::string out;
};

FracOrder verify_order(const SolutionFamily& f, const VerifyArgs& a) {
  if (f.info.classical_only) return {1.0, 1.0};
  const bool rl = f.info.pde_id == "gkdv";
  return {a.alpha.value_or(rl ? 0.25 : 0.75), a.beta.value_or(rl ? 0.8 : 0.6)};
}

std::string record(const ResidualReport& r, FracOrder o, double tol, bool ok) {
  std::string s = r.family + " tier=" + tier_name(r.tier) + " alpha=" + num(o.alpha) + " beta=" + num(o.beta) +
                  " grid=" + std::to_string(r.grid.nx) + "x" + std::to_string(r.grid.nt) +
                  " max_rel=" + detail::sci(r.max_rel_residual) + " max_abs=" + detail::sci(r.max_abs_residual) +
                  " tol=" + detail::sci(tol) + (ok ? " PASS" : " FAIL");
  return s + "  # " + r.notes;
}

int cmd_verify(const VerifyArgs& a) {
  std::optional<Config> cfg;
  if (!a.config.empty()) {
    cfg = load_config(a.config);
    for (const auto& [sec, _] : cfg->sections) lookup(sec);
  }
  const Params sets = parse_sets(a.sets);
  if (!sets.empty() && a.family == "all") throw UsageError("verify: --set needs a single --family");
  std::vector<const SolutionFamily*> fams;
  if (a.family == "all")
    for (const auto& f : families()) fams.push_back(&f);
  else
    fams.push_back(&lookup(a.family));
  const bool analytic = a.tier == "analytic" || a.tier == "both";
  const bool numeric = a.tier == "numeric" || a.tier == "both";

  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out, std::ios::binary);
    if (!file) throw UsageError("verify: cannot write " + a.out);
  }
  std::ostream& os = a.out.empty() ? std::cout : file;

  std::string first_fail;
  int n_pass = 0, n_fail = 0, n_skip = 0;
  auto tally = [&](bool ok, const std::string& id) {
    if (ok) {
      ++n_pass;
      return;
    }
    ++n_fail;
    if (first_fail.empty()) first_fail = id;
  };

  for (const SolutionFamily* f : fams) {
    const std::string& id = f->info.id;
    const FracOrder order = verify_order(*f, a);
    const Params over = merged(cfg, id, sets);
    FamilyInstance inst;
    std::vector<std::string> violated;
    try {
      inst = instantiate(id, over, order);
    } catch (const InadmissibleParams& e) {
      if (over.empty()) {
        // the requested orders are outside the family's stated range
        if (a.family != "all") throw UsageError(e.what());
        os << id << " SKIP  # " << e.what() << "\n";
        ++n_skip;
        continue;
      }
      inst = instantiate(id, over, order, false);
      for (const auto& c : inst.conditions())
        if (!c.holds()) violated.push_back(c.name);
    }
    for (const auto& v : violated) os << id << " condition violated: " << v << "\n";

    try {
      if (analytic) {
        const auto r = residual_analytic(inst);
        const bool ok = r.max_rel_residual <= kAnalyticTol && violated.empty();
        os << record(r, order, kAnalyticTol, ok) << "\n";
        tally(ok, id);
        if (a.negative && violated.empty())
          for (const auto& nc : negative_controls(id, over, order)) {
            const bool caught = nc.report.max_rel_residual >= kNegativeControlMin;
            os << id << " control " << nc.key << "+" << num(kPerturbation) << " (" << nc.condition
               << ") max_rel=" << detail::sci(nc.report.max_rel_residual) << " min=" << detail::sci(kNegativeControlMin)
               << (caught ? " PASS" : " FAIL") << "\n";
            tally(caught, id);
          }
      }
      if (numeric) {
        if (governing_operator(inst).time_kind != DerivKind::Caputo) {
          os << id << " tier=numeric SKIP  # Riemann-Liouville trajectory is singular at t = 0\n";
          ++n_skip;
        } else {
          const auto r = residual_numeric(inst);
          const double tol = numeric_tolerance(order);
          const bool ok = r.max_rel_residual <= tol && violated.empty();
          os << record(r, order, tol, ok) << "\n";
          tally(ok, id);
        }
      }
    } catch (const Error& e) {
      os << id << " ERROR " << e.what() << "\n";
      tally(false, id);
    }
    os.flush();
  }
  os << "summary: " << n_pass << " passed, " << n_fail << " failed, " << n_skip << " skipped\n";
  if (!first_fail.empty()) {
    std::cerr << "fisub verify: first failing family: " << first_fail << "\n";
    return kFail;
  }
  return kPass;
}

// --- subspace -------------------------------------------------------------

struct SubspaceArgs {
  std::string equation, basis, config;
  std::vector<std::string> sets;
  double alpha = 0.7, beta = 0.6;
  int trials = 8;
  std::uint64_t seed = 1;
};

std::string basis_list(const SubspaceSpec& ss) {
  std::string s;
  for (std::size_t p = 0; p < ss.components.size(); ++p) {
    s += p ? "; " : "";
    for (std::size_t j = 0; j < ss.components[p].size(); ++j) s += (j ? ", " : "") + ss.components[p][j].label();
  }
  return s;
}

int cmd_subspace(const SubspaceArgs& a) {
  std::optional<Config> cfg;
  if (!a.config.empty()) cfg = load_config(a.config);
  InvarianceCase c{"cli", a.equation, a.basis, merged(cfg, a.equation, parse_sets(a.sets)), {a.alpha, a.beta}};
  SubspaceSpec ss;
  const OperatorSpec op = build_operator(c, &ss);
  const auto rep = check_invariance(op, ss, a.trials, a.seed);
  std::cout << "equation " << a.equation << " alpha=" << num(a.alpha) << " beta=" << num(a.beta) << "\n"
            << "subspace {" << basis_list(ss) << "}\n"
            << "trials " << rep.trials << ", seed " << a.seed << ", max fit residual " << detail::sci(rep.max_fit_residual)
            << "\n";
  if (op.conditions.empty()) std::cout << "conditions: none stated\n";
  for (const auto& cond : op.conditions)
    std::cout << "condition " << cond.name << ": " << (cond.holds() ? "holds" : "violated") << "\n";
  std::cout << "invariant: " << (rep.invariant ? "yes" : "no") << "\n";
  return rep.invariant ? kPass : kFail;
}

// --- fode -----------------------------------------------------------------

struct FodeArgs {
  std::string family, equation, basis, config;
  std::vector<std::string> sets;
  std::optional<double> alpha, beta;
  std::vector<double> init;
  double t_end = 2.0;
  std::size_t steps = 2000;
};

int cmd_fode(const FodeArgs& a) {
  std::optional<Config> cfg;
  if (!a.config.empty()) cfg = load_config(a.config);
  OperatorSpec op;
  SubspaceSpec ss;
  std::optional<Separated> sep;
  if (!a.family.empty()) {
    const SolutionFamily& f = lookup(a.family);
    VerifyArgs va;
    va.alpha = a.alpha;
    va.beta = a.beta;
    const FamilyInstance inst = instantiate(a.family, merged(cfg, a.family, parse_sets(a.sets)), verify_order(f, va));
    sep = separated_form(inst);
    for (const auto& c : *sep) ss.components.push_back(c.basis);
    op = governing_operator(inst);
  } else {
    if (a.equation.empty() || a.basis.empty()) throw UsageError("fode: give --family, or --equation with --basis");
    InvarianceCase c{"cli", a.equation, a.basis, merged(cfg, a.equation, parse_sets(a.sets)),
                     {a.alpha.value_or(0.7), a.beta.value_or(0.6)}};
    op = build_operator(c, &ss);
  }
  FodeSystem sys = reduce_to_fode(op, ss);
  const auto names = sys.variable_names();
  const char* d = sys.kind == DerivKind::Caputo ? "D^" : "RL D^";
  std::cout << "subspace {" << basis_list(ss) << "}\n";
  for (std::size_t j = 0; j < sys.dimension(); ++j)
    std::cout << d << num(sys.alpha) << " " << names[j] << " = " << sys.rhs[j].str(names) << "\n";
  if (sys.kind != DerivKind::Caputo) {
    std::cout << "Riemann-Liouville system: initial-value integration skipped\n";
    return kPass;
  }

  // the family's own coefficients give both the initial data and a reference
  Trajectory family_coeffs;
  if (sep)
    for (const auto& c : *sep) family_coeffs.insert(family_coeffs.end(), c.coeffs.begin(), c.coeffs.end());
  if (!family_coeffs.empty()) {
    for (std::size_t j = 0; j < sys.dimension(); ++j) sys.initial[j] = family_coeffs[j](0.0);
  } else if (!a.init.empty()) {
    if (a.init.size() != sys.dimension())
      throw UsageError("fode: --init needs " + std::to_string(sys.dimension()) + " values");
    sys.initial = a.init;
  } else {
    sys.initial.assign(sys.dimension(), 1.0);
  }
  std::cout << "initial";
  for (double v : sys.initial) std::cout << " " << num(v);
  std::cout << "\n";

  const AdamsResult adams = frac_adams(sys, a.t_end, a.steps);
  const auto& yT = adams.y.back();
  Trajectory closed;
  try {
    closed = solve_linear_ml(sys);
  } catch (const NotTriangular& e) {
    std::cout << "closed form: unavailable (" << e.what() << ")\n";
  }
  double worst = 0.0;
  auto compare = [&](const char* label, const Trajectory& ref, std::size_t j) {
    if (ref.empty()) return;
    const double c = ref[j](a.t_end);
    const double rel = std::fabs(yT[j] - c) / std::max(1.0, std::fabs(c));
    worst = std::max(worst, rel);
    std::cout << " " << label << "=" << num(c) << " rel=" << detail::sci(rel);
  };
  std::cout << "t=" << num(a.t_end) << " (h=" << num(a.t_end / a.steps) << ")\n";
  for (std::size_t j = 0; j < sys.dimension(); ++j) {
    std::cout << "  " << names[j] << " adams=" << num(yT[j]);
    compare("closed", closed, j);
    compare("family", family_coeffs, j);
    std::cout << "\n";
  }
  if (worst > 1e-3) {
    std::cerr << "fisub fode: Adams and closed form disagree (" << detail::sci(worst) << ")\n";
    return kFail;
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fisub: invariant subspace toolkit for time-space fractional PDEs"};
  app.require_subcommand(1);

  MlArgs ml;
  auto* sml = app.add_subcommand("ml", "two-parameter Mittag-Leffler function and its Caputo derivative");
  sml->add_option("z", ml.z, "arguments");
  sml->add_option("--beta", ml.beta, "series index scale")->check(CLI::PositiveNumber);
  sml->add_option("--gamma", ml.gamma, "series offset")->check(CLI::PositiveNumber);
  sml->add_option("--alpha", ml.alpha, "Caputo order; prints D^alpha [t^(gamma-1) E(k t^beta)] instead");
  sml->add_option("--k", ml.k, "rate for --alpha");
  sml->add_option("--t", ml.t, "time for --alpha");

  DerivArgs dv;
  auto* sdv = app.add_subcommand("deriv", "fractional power rule, or closed rules on basis functions");
  sdv->add_option("--kind", dv.kind, "caputo or rl")->check(CLI::IsMember({"caputo", "rl"}));
  sdv->add_option("--alpha", dv.alpha, "derivative order")->check(CLI::PositiveNumber);
  sdv->add_option("--mu", dv.mu, "exponent of t^mu");
  sdv->add_option("--t", dv.t, "evaluation point");
  sdv->add_option("--basis", dv.basis, "basis list, e.g. \"1, x^b, Eb(2*x^b)\"");
  sdv->add_option("--beta", dv.beta, "space order used by --basis")->check(CLI::Range(0.0, 1.0));
  sdv->add_option("--set", dv.sets, "parameter key=value (repeatable)");

  FigureArgs fg;
  auto* sfg = app.add_subcommand("figure", "emit figure data (a..s, or all) as CSV");
  sfg->add_option("id", fg.id, "figure id a..s, or all")->required();
  sfg->add_option("--points", fg.points, "rows");
  sfg->add_option("--out", fg.out, "output file (directory for all); stdout if omitted");
  sfg->add_option("--from", fg.from, "sweep start");
  sfg->add_option("--to", fg.to, "sweep end");

  VerifyArgs vf;
  auto* svf = app.add_subcommand("verify", "residual verification of catalog solutions");
  svf->add_option("--family", vf.family, "family id or all");
  svf->add_option("--tier", vf.tier, "analytic, numeric or both")->check(CLI::IsMember({"analytic", "numeric", "both"}));
  svf->add_option("--config", vf.config, "INI file with per-family parameter sections");
  svf->add_option("--alpha", vf.alpha, "time order")->check(CLI::Range(0.0, 1.0));
  svf->add_option("--beta", vf.beta, "space order")->check(CLI::Range(0.0, 1.0));
  svf->add_option("--set", vf.sets, "parameter key=value for a single family (repeatable)");
  svf->add_flag("--negative", vf.negative, "also run condition-perturbed negative controls");
  svf->add_option("--out", vf.out, "write the report here instead of stdout");

  SubspaceArgs sb;
  auto* ssb = app.add_subcommand("subspace", "numerical invariance check of a candidate subspace");
  ssb->add_option("--equation", sb.equation, "equation id")->required();
  ssb->add_option("--basis", sb.basis, "basis list; ';' separates components")->required();
  ssb->add_option("--set", sb.sets, "parameter key=value (repeatable)");
  ssb->add_option("--config", sb.config, "INI file; the section named after the equation is used");
  ssb->add_option("--alpha", sb.alpha, "time order")->check(CLI::Range(0.0, 1.0));
  ssb->add_option("--beta", sb.beta, "space order")->check(CLI::Range(0.0, 1.0));
  ssb->add_option("--trials", sb.trials, "random coefficient draws")->check(CLI::PositiveNumber);
  ssb->add_option("--seed", sb.seed, "RNG seed");

  FodeArgs fo;
  auto* sfo = app.add_subcommand("fode", "reduce to a FODE system and integrate it");
  sfo->add_option("--family", fo.family, "catalog family (uses its subspace and initial data)");
  sfo->add_option("--equation", fo.equation, "equation id (with --basis)");
  sfo->add_option("--basis", fo.basis, "basis list");
  sfo->add_option("--set", fo.sets, "parameter key=value (repeatable)");
  sfo->add_option("--config", fo.config, "INI file");
  sfo->add_option("--alpha", fo.alpha, "time order")->check(CLI::Range(0.0, 1.0));
  sfo->add_option("--beta", fo.beta, "space order")->check(CLI::Range(0.0, 1.0));
  sfo->add_option("--init", fo.init, "initial values A_j(0)")->delimiter(',');
  sfo->add_option("--t-end", fo.t_end, "integration horizon")->check(CLI::PositiveNumber);
  sfo->add_option("--steps", fo.steps, "Adams steps")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*sml) return cmd_ml(ml);
    if (*sdv) return cmd_deriv(dv);
    if (*sfg) return cmd_figure(fg);
    if (*svf) return cmd_verify(vf);
    if (*ssb) return cmd_subspace(sb);
    if (*sfo) return cmd_fode(fo);
  } catch (const UsageError& e) {
    std::cerr << "fisub: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownId& e) {
    std::cerr << "fisub: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownFigure& e) {
    std::cerr << "fisub: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "fisub: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "fisub: " << e.what() << "\n";
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "fisub: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
