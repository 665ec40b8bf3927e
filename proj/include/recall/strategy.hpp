#pragma once

// Behavioral strategy profiles: points in a product of simplices indexed by
// (player, infoset, action), with a flat variable layout shared with the
// polynomial module.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "recall/rational.hpp"

namespace recall {

struct ProfileLayout {
  // block_sizes[i][j] = action count of player i's j-th infoset.
  std::vector<std::vector<int>> block_sizes;
  std::vector<std::vector<int>> block_offsets;  // flat index of (i, j, 0)
  int total_vars = 0;

  ProfileLayout() = default;
  explicit ProfileLayout(std::vector<std::vector<int>> sizes)
      : block_sizes(std::move(sizes)) {
    block_offsets.resize(block_sizes.size());
    for (std::size_t i = 0; i < block_sizes.size(); ++i) {
      block_offsets[i].resize(block_sizes[i].size());
      for (std::size_t j = 0; j < block_sizes[i].size(); ++j) {
        block_offsets[i][j] = total_vars;
        total_vars += block_sizes[i][j];
      }
    }
  }

  int num_players() const { return static_cast<int>(block_sizes.size()); }
  int num_infosets(int player) const {
    return static_cast<int>(block_sizes[player].size());
  }
  int flat(int player, int infoset, int action) const {
    return block_offsets[player][infoset] + action;
  }
  // Free dimensions: sum over blocks of (m_j - 1).
  int free_dims() const {
    int d = 0;
    for (const auto& pl : block_sizes)
      for (int m : pl) d += m - 1;
    return d;
  }
  bool operator==(const ProfileLayout& o) const {
    return block_sizes == o.block_sizes;
  }
  bool operator!=(const ProfileLayout& o) const { return !(*this == o); }
};

struct layout_mismatch_error : std::runtime_error {
  layout_mismatch_error() : std::runtime_error("LAYOUT_MISMATCH") {}
};
struct block_dim_mismatch_error : std::runtime_error {
  block_dim_mismatch_error() : std::runtime_error("BLOCK_DIM_MISMATCH") {}
};
struct length_mismatch_error : std::runtime_error {
  length_mismatch_error() : std::runtime_error("LENGTH_MISMATCH") {}
};

template <class T>
struct BasicProfile {
  ProfileLayout layout;
  std::vector<T> x;  // length layout.total_vars

  BasicProfile() = default;
  BasicProfile(ProfileLayout l, std::vector<T> values)
      : layout(std::move(l)), x(std::move(values)) {
    if (static_cast<int>(x.size()) != layout.total_vars)
      throw length_mismatch_error();
  }

  const T& at(int player, int infoset, int action) const {
    return x[layout.flat(player, infoset, action)];
  }
  T& at(int player, int infoset, int action) {
    return x[layout.flat(player, infoset, action)];
  }
};

using Profile = BasicProfile<double>;
using RatProfile = BasicProfile<Rat>;

template <class T>
BasicProfile<T> uniform_profile(const ProfileLayout& layout) {
  BasicProfile<T> p;
  p.layout = layout;
  p.x.resize(layout.total_vars);
  for (int i = 0; i < layout.num_players(); ++i)
    for (int j = 0; j < layout.num_infosets(i); ++j) {
      int m = layout.block_sizes[i][j];
      for (int k = 0; k < m; ++k)
        p.x[layout.flat(i, j, k)] = scalar_cast<T>(Rat(1, m));
    }
  return p;
}

template <class T>
bool is_distribution(const std::vector<T>& alpha, double tol = 1e-9) {
  T sum = T(0);
  for (const T& a : alpha) {
    if (a < T(0)) return false;
    sum += a;
  }
  if constexpr (std::is_same_v<T, Rat>) {
    return sum == Rat(1);
  } else {
    return std::abs(to_double(sum) - 1.0) <= tol;
  }
}

// Copy of `p` with the (player, infoset) block replaced by distribution α.
template <class T>
BasicProfile<T> with_infoset_action(const BasicProfile<T>& p, int player,
                                    int infoset, const std::vector<T>& alpha) {
  int m = p.layout.block_sizes[player][infoset];
  if (static_cast<int>(alpha.size()) != m || !is_distribution(alpha))
    throw block_dim_mismatch_error();
  BasicProfile<T> out = p;
  for (int k = 0; k < m; ++k) out.x[p.layout.flat(player, infoset, k)] = alpha[k];
  return out;
}

// Sort-based Euclidean projection of one block onto the simplex.
template <class T>
std::vector<T> project_to_simplex(const std::vector<T>& v) {
  const int m = static_cast<int>(v.size());
  std::vector<T> u = v;
  std::sort(u.begin(), u.end(), [](const T& a, const T& b) { return a > b; });
  T css = T(0);
  T theta = T(0);
  int rho = 0;
  T cum = T(0);
  for (int k = 0; k < m; ++k) {
    cum += u[k];
    T t = (cum - T(1)) / T(k + 1);
    if (u[k] - t > T(0)) {
      rho = k + 1;
      theta = t;
      css = cum;
    }
  }
  (void)css;
  std::vector<T> out(m);
  for (int k = 0; k < m; ++k) out[k] = std::max(T(0), T(v[k] - theta));
  return out;
}

template <class T>
BasicProfile<T> project_to_simplex_product(const std::vector<T>& v,
                                           const ProfileLayout& layout) {
  if (static_cast<int>(v.size()) != layout.total_vars)
    throw length_mismatch_error();
  BasicProfile<T> p;
  p.layout = layout;
  p.x.resize(layout.total_vars);
  for (int i = 0; i < layout.num_players(); ++i)
    for (int j = 0; j < layout.num_infosets(i); ++j) {
      int m = layout.block_sizes[i][j];
      int off = layout.block_offsets[i][j];
      std::vector<T> block(v.begin() + off, v.begin() + off + m);
      auto proj = project_to_simplex(block);
      std::copy(proj.begin(), proj.end(), p.x.begin() + off);
    }
  return p;
}

template <class T>
T linf_distance(const BasicProfile<T>& p, const BasicProfile<T>& q) {
  if (p.layout != q.layout) throw layout_mismatch_error();
  T d = T(0);
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    T diff = p.x[i] >= q.x[i] ? T(p.x[i] - q.x[i]) : T(q.x[i] - p.x[i]);
    if (diff > d) d = diff;
  }
  return d;
}

// Renormalizes float blocks whose sums drifted beyond 1e-12 (keeps long
// fixed-point iterations on the simplex-product manifold).
inline void renormalize(Profile& p) {
  for (int i = 0; i < p.layout.num_players(); ++i)
    for (int j = 0; j < p.layout.num_infosets(i); ++j) {
      int m = p.layout.block_sizes[i][j];
      int off = p.layout.block_offsets[i][j];
      double s = 0;
      for (int k = 0; k < m; ++k) s += p.x[off + k];
      if (std::abs(s - 1.0) > 1e-12 && s > 0)
        for (int k = 0; k < m; ++k) p.x[off + k] /= s;
    }
}

template <class T>
RatProfile to_rational(const BasicProfile<T>& p);

inline RatProfile to_rational(const RatProfile& p) { return p; }

inline Profile to_float(const RatProfile& p) {
  Profile out;
  out.layout = p.layout;
  out.x.reserve(p.x.size());
  for (const Rat& q : p.x) out.x.push_back(q.get_d());
  return out;
}

}  // namespace recall
