#pragma once

// Sparse multivariate polynomials with exact rational coefficients over the
// flat profile variable layout, plus the Lipschitz-constant machinery used by
// every certified grid search.

#include <map>
#include <vector>

#include "recall/rational.hpp"
#include "recall/strategy.hpp"

namespace recall {

struct var_out_of_range_error : std::runtime_error {
  var_out_of_range_error() : std::runtime_error("VAR_OUT_OF_RANGE") {}
};

// Sparse exponent vector: (variable, exponent>0) pairs sorted by variable.
using ExpVec = std::vector<std::pair<int, int>>;

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int n_vars) : n_vars_(n_vars) {}

  static Polynomial constant(int n_vars, const Rat& c) {
    Polynomial p(n_vars);
    p.add_term({}, c);
    return p;
  }
  static Polynomial var(int n_vars, int v, const Rat& coef = Rat(1)) {
    Polynomial p(n_vars);
    p.add_term({{v, 1}}, coef);
    return p;
  }

  int n_vars() const { return n_vars_; }
  const std::map<ExpVec, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int t = 0;
      for (auto& [v, k] : e) t += k;
      d = std::max(d, t);
    }
    return d;
  }

  void add_term(ExpVec e, const Rat& c) {
    if (c == 0) return;
    for (auto& [v, k] : e)
      if (v < 0 || v >= n_vars_) throw var_out_of_range_error();
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(std::move(e), c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  template <class T>
  T evaluate(const std::vector<T>& point) const {
    if (static_cast<int>(point.size()) != n_vars_) throw length_mismatch_error();
    T sum(0);
    for (const auto& [e, c] : terms_) {
      T term = scalar_cast<T>(c);
      for (auto& [v, k] : e)
        for (int rep = 0; rep < k; ++rep) term *= point[v];
      sum += term;
    }
    return sum;
  }

  Polynomial partial_derivative(int v) const {
    if (v < 0 || v >= n_vars_) throw var_out_of_range_error();
    Polynomial out(n_vars_);
    for (const auto& [e, c] : terms_) {
      for (std::size_t idx = 0; idx < e.size(); ++idx) {
        if (e[idx].first != v) continue;
        ExpVec de = e;
        Rat dc = c * e[idx].second;
        if (--de[idx].second == 0) de.erase(de.begin() + idx);
        out.add_term(std::move(de), dc);
        break;
      }
    }
    return out;
  }

  Polynomial operator+(const Polynomial& q) const {
    check_same_space(q);
    Polynomial out = *this;
    for (const auto& [e, c] : q.terms_) out.add_term(e, c);
    return out;
  }
  Polynomial operator-(const Polynomial& q) const {
    check_same_space(q);
    Polynomial out = *this;
    for (const auto& [e, c] : q.terms_) out.add_term(e, -c);
    return out;
  }
  Polynomial scaled(const Rat& s) const {
    Polynomial out(n_vars_);
    if (s == 0) return out;
    for (const auto& [e, c] : terms_) out.add_term(e, c * s);
    return out;
  }
  Polynomial operator*(const Polynomial& q) const {
    check_same_space(q);
    Polynomial out(n_vars_);
    for (const auto& [e1, c1] : terms_)
      for (const auto& [e2, c2] : q.terms_) out.add_term(merge_exps(e1, e2), c1 * c2);
    return out;
  }
  bool operator==(const Polynomial& q) const {
    return n_vars_ == q.n_vars_ && terms_ == q.terms_;
  }

 private:
  static ExpVec merge_exps(const ExpVec& a, const ExpVec& b) {
    ExpVec out;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        out.push_back(b[j++]);
      } else {
        out.emplace_back(a[i].first, a[i].second + b[j].second);
        ++i;
        ++j;
      }
    }
    return out;
  }
  void check_same_space(const Polynomial& q) const {
    if (n_vars_ != q.n_vars_) throw layout_mismatch_error();
  }

  int n_vars_ = 0;
  std::map<ExpVec, Rat> terms_;
};

// --- Lipschitz constants over [0,1]^n ---------------------------------------

struct LipschitzInfo {
  std::vector<Rat> per_var;  // L_j = sum of |coefficients| of d p / d x_j
  Rat Linf;                  // max{1, max_j L_j}
};

inline Rat coeff_abs_sum(const Polynomial& p) {
  Rat s(0);
  for (const auto& [e, c] : p.terms()) s += rat_abs(c);
  return s;
}

inline LipschitzInfo lipschitz_inf(const Polynomial& p) {
  LipschitzInfo info;
  info.per_var.resize(p.n_vars());
  info.Linf = 1;
  for (int v = 0; v < p.n_vars(); ++v) {
    info.per_var[v] = coeff_abs_sum(p.partial_derivative(v));
    info.Linf = std::max(info.Linf, info.per_var[v]);
  }
  return info;
}

// Combined constant covering every player's utility polynomial and every
// first partial derivative of each.
struct LipschitzBundle {
  Rat Linf;                                  // overall, >= 1
  std::vector<std::vector<Rat>> utility_Lj;  // [player][var]
  std::vector<std::vector<Rat>> gradient_L;  // [player][var]: L of d U^i / d x_v
};

inline LipschitzBundle game_lipschitz(const std::vector<Polynomial>& utilities) {
  LipschitzBundle b;
  b.Linf = 1;
  for (const Polynomial& p : utilities) {
    LipschitzInfo li = lipschitz_inf(p);
    b.utility_Lj.push_back(li.per_var);
    b.Linf = std::max(b.Linf, li.Linf);
    std::vector<Rat> grad_consts(p.n_vars());
    for (int v = 0; v < p.n_vars(); ++v) {
      grad_consts[v] = lipschitz_inf(p.partial_derivative(v)).Linf;
      b.Linf = std::max(b.Linf, grad_consts[v]);
    }
    b.gradient_L.push_back(std::move(grad_consts));
  }
  return b;
}

}  // namespace recall
