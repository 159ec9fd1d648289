#pragma once

#include <cmath>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace fisub {

// Sparse multivariate polynomial: exponent vector -> coefficient.
class Polynomial {
 public:
  using Exponents = std::vector<int>;

  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  int nvars() const { return nvars_; }
  const std::map<Exponents, double>& terms() const { return terms_; }

  void add(const Exponents& e, double c) {
    if (static_cast<int>(e.size()) != nvars_) throw DomainError("Polynomial: exponent arity mismatch");
    if (c == 0.0) return;
    double& slot = terms_[e];
    slot += c;
    if (slot == 0.0) terms_.erase(e);
  }

  double coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0.0 : it->second;
  }

  double operator()(std::span<const double> a) const {
    if (static_cast<int>(a.size()) != nvars_) throw DomainError("Polynomial: argument arity mismatch");
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
      double m = c;
      for (int i = 0; i < nvars_; ++i)
        for (int p = 0; p < e[i]; ++p) m *= a[i];
      s += m;
    }
    return s;
  }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int v : e) s += v;
      d = std::max(d, s);
    }
    return d;
  }

  bool is_zero() const { return terms_.empty(); }

  std::string str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    os.precision(10);
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
      first = false;
      bool unit = std::fabs(std::fabs(c) - 1.0) < 1e-15;
      bool constant = true;
      for (int v : e) constant = constant && v == 0;
      if (!unit || constant) os << std::fabs(c);
      bool lead = unit && !constant;
      for (int i = 0; i < nvars_; ++i) {
        if (e[i] == 0) continue;
        if (!lead) os << "*";
        lead = false;
        os << names[i];
        if (e[i] > 1) os << "^" << e[i];
      }
    }
    return os.str();
  }

 private:
  int nvars_ = 0;
  std::map<Exponents, double> terms_;
};

// All exponent vectors of n variables with total degree <= d.
inline std::vector<Polynomial::Exponents> monomials_up_to(int n, int d) {
  std::vector<Polynomial::Exponents> out;
  Polynomial::Exponents e(n, 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == n) {
      out.push_back(e);
      return;
    }
    for (int p = 0; p <= left; ++p) {
      e[i] = p;
      self(self, i + 1, left - p);
    }
    e[i] = 0;
  };
  rec(rec, 0, d);
  return out;
}

}  // namespace fisub
