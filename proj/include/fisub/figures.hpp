#pragma once

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "errors.hpp"

namespace fisub {

// One plotted curve family: a catalog solution at caption parameters, swept
// along x or t with the other variable held fixed.
struct FigureSpec {
  std::string id;
  std::string family;
  Params params;
  char sweep = 'x';
  double fixed = 1.0;
  int component = 0;
  std::vector<FracOrder> pairs;
};

inline constexpr double kSweepLo = 0.05;
inline constexpr double kSweepHi = 3.0;

namespace detail {
inline std::vector<FracOrder> default_pairs() { return {{1.0, 1.0}, {0.9, 0.9}, {0.75, 0.75}, {0.5, 0.5}}; }
// alpha = 1 and alpha = 1/2 are excluded for the three-coupled solution
inline std::vector<FracOrder> rl_pairs() { return {{0.25, 1.0}, {0.25, 0.5}, {0.75, 1.0}, {0.75, 0.5}}; }
}  // namespace detail

inline const std::vector<FigureSpec>& figures() {
  static const std::vector<FigureSpec> all = [] {
    const auto P = detail::default_pairs();
    const Params cc8{{"k", 1}, {"a1", 1}, {"a2", 1}, {"a3", 1}, {"a4", 1}, {"delta", 1}, {"lambda", 1}, {"gamma", -1}};
    const Params cc10{{"k1", 1}, {"k2", 1}, {"k3", 1}, {"k4", 1}, {"rho", 1}, {"delta", 1}, {"gamma", 1}, {"mu", -1}};
    const Params eqcs{{"k1", 2}, {"k2", 1}, {"k3", 1}, {"k4", 1}};
    const Params s3{{"k1", 2}, {"k2", 1}};
    std::vector<FigureSpec> v{
        {"a", "E5", {{"n", 1}, {"a0", 2}, {"k", 1}, {"k0", 1}, {"b1", 1}}, 'x', 1.0, 0, P},
        {"b", "FE6", {{"k1", -1}, {"a1", 2}, {"a0", 0}, {"k2", 1}, {"k", 1}, {"b1", 1}}, 'x', 2.0, 0, P},
        {"c", "RE8", {{"k", 1}, {"k0", 1}, {"k1", 1}, {"b2", 1}}, 'x', 2.0, 0, P},
        {"d", "RPP", {{"k0", 1}, {"k1", 1}}, 'x', 2.0, 0, P},
        {"e", "eqsr6", {{"n", 1}, {"k", 1}, {"b1", 1}, {"a0", -1}, {"k0", 2}}, 'x', 2.0, 0, P},
        {"f", "RPPP1", {{"k1", 1}, {"b1", -4}, {"k", 2}}, 'x', 2.0, 0, P},
        {"g", "RPPP2", {{"k1", 1}, {"k2", 1}, {"b0", 0}, {"k", 2}}, 't', 2.0, 0, P},
        {"h", "sr8", {{"lambda1", 1}, {"lambda2", 1}, {"lambda3", 1}, {"lambda4", 1}, {"k1", 1}, {"c", 1}, {"n", 1}},
         'x', 2.0, 0, P},
        {"i", "DS6", {{"n", 1}, {"k0", 1}, {"b1", 1}, {"a0", 0}, {"k", 2}}, 'x', 2.0, 0, P},
        {"j", "DS10", {{"c1", 1}, {"c2", 1}, {"c3", 1}, {"b0", 1}, {"b1", 1}, {"a0", 1}, {"k1", 1}, {"n", 1}}, 't', 2.0, 0, P},
        {"k", "cc8", cc8, 'x', 2.0, 0, P},
        {"l", "cc8", cc8, 'x', 2.0, 1, P},
        {"m", "cc10", cc10, 'x', 2.0, 0, P},
        {"n", "cc10", cc10, 't', 2.0, 1, P},
        {"o", "eqcs", eqcs, 't', 2.0, 0, P},
        {"p", "eqcs", eqcs, 't', 2.0, 1, P},
        {"q", "3s2", s3, 't', 2.0, 0, detail::rl_pairs()},
        {"r", "3s2", s3, 't', 2.0, 1, detail::rl_pairs()},
        {"s", "3s2", s3, 't', 2.0, 2, detail::rl_pairs()},
    };
    return v;
  }();
  return all;
}

inline const FigureSpec& figure(const std::string& id) {
  for (const auto& f : figures())
    if (f.id == id) return f;
  throw UnknownFigure("unknown figure '" + id + "' (expected a..s)");
}

inline std::string figure_column(FracOrder o) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "u_a%g_b%g", o.alpha, o.beta);
  return buf;
}

// Header, then `points` rows over [lo, hi]; 12 significant digits, '\n' endings.
inline void write_figure_csv(const FigureSpec& fig, int points, std::ostream& os, double lo = kSweepLo,
                             double hi = kSweepHi) {
  if (points < 2) throw DomainError("figure: points must be >= 2");
  if (!(lo > 0.0) || !(hi > lo)) throw DomainError("figure: sweep range must be positive and non-empty");
  std::vector<FamilyInstance> inst;
  for (const auto& o : fig.pairs) inst.push_back(instantiate(fig.family, fig.params, o));

  std::string out(1, fig.sweep);
  for (const auto& o : fig.pairs) out += "," + figure_column(o);
  out += '\n';
  char buf[64];
  for (int i = 0; i < points; ++i) {
    const double s = i == points - 1 ? hi : lo + (hi - lo) * i / (points - 1);
    std::snprintf(buf, sizeof buf, "%.12g", s);
    out += buf;
    for (const auto& f : inst) {
      const double x = fig.sweep == 'x' ? s : fig.fixed, t = fig.sweep == 't' ? s : fig.fixed;
      std::snprintf(buf, sizeof buf, ",%.12g", eval_solution(f, x, t)[fig.component]);
      out += buf;
    }
    out += '\n';
  }
  os << out;
}

inline std::string figure_csv(const std::string& id, int points, double lo = kSweepLo, double hi = kSweepHi) {
  std::ostringstream os;
  write_figure_csv(figure(id), points, os, lo, hi);
  return os.str();
}

}  // namespace fisub
