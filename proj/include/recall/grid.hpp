#pragma once

// Certified grid search with Lipschitz certificates, used as the exact-
// optimization primitive by the solvers. A maximization over a product of
// simplices is carried out in free coordinates (last block coordinate
// eliminated) on the uniform grid of resolution K; a grid point certifies its
// whole cell via f(p) + L/K. Refinement doubles K and keeps only cells whose
// certificate can still beat the incumbent, which is equivalent to full
// enumeration of the final grid minus provably suboptimal cells.

#include <cstdlib>
#include <functional>
#include <set>
#include <thread>
#include <vector>

#include "recall/poly.hpp"

namespace recall {

inline int solver_threads() {
  if (const char* env = std::getenv("RECALL_SOLVER_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// All integer compositions (k_1..k_m) with sum exactly K (simplex grid).
inline void simplex_grid_compositions(int m, int K,
                                      const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> c(m, 0);
  std::function<void(int, int)> rec = [&](int idx, int rest) {
    if (idx == m - 1) {
      c[idx] = rest;
      fn(c);
      return;
    }
    for (int k = 0; k <= rest; ++k) {
      c[idx] = k;
      rec(idx + 1, rest - k);
    }
  };
  if (m == 0) {
    fn(c);
    return;
  }
  rec(0, K);
}

// Fast evaluation form of a Polynomial in doubles.
struct CompiledPoly {
  int n_vars = 0;
  struct Term {
    double coef;
    std::vector<std::pair<int, int>> exps;
  };
  std::vector<Term> terms;

  static CompiledPoly from(const Polynomial& p) {
    CompiledPoly cp;
    cp.n_vars = p.n_vars();
    for (const auto& [e, c] : p.terms()) cp.terms.push_back({to_double(c), e});
    return cp;
  }
  double eval(const std::vector<double>& x) const {
    double s = 0;
    for (const Term& t : terms) {
      double v = t.coef;
      for (auto& [var, k] : t.exps)
        for (int r = 0; r < k; ++r) v *= x[var];
      s += v;
    }
    return s;
  }
};

// Result of a certified maximization: an attained point/value (lower bound)
// and a proven upper bound on the true maximum.
struct CertifiedMax {
  std::vector<double> argmax;  // free coordinates
  double value = 0.0;          // f(argmax), attained
  double upper = 0.0;          // certified: true max <= upper
  long evaluations = 0;
  long resolution = 0;  // final grid resolution K
};

// Maximize a polynomial q over the product of corner simplices
// { a_block >= 0, sum(a_block) <= 1 } given block free-dimension sizes.
// Guarantee: value <= true max <= value + tol.
inline CertifiedMax certified_max(const Polynomial& q,
                                  const std::vector<int>& block_dims,
                                  double tol) {
  CertifiedMax out;
  int d = 0;
  for (int b : block_dims) d += b;
  if (q.n_vars() != d) throw length_mismatch_error();
  CompiledPoly cq = CompiledPoly::from(q);
  if (d == 0) {
    out.value = out.upper = cq.eval({});
    out.evaluations = 1;
    out.resolution = 1;
    return out;
  }
  // Free-coordinate Lipschitz constant (infinity norm): sum over free vars is
  // not needed; moving one grid step changes each coordinate by <= 1/K, so
  // |f(x) - f(p)| <= (sum_j L_j) * (1/K) is safe; we use L = sum of per-var
  // coefficient bounds for a valid cell certificate.
  Rat Lsum(0);
  for (int v = 0; v < d; ++v) Lsum += coeff_abs_sum(q.partial_derivative(v));
  double L = to_double(Lsum);

  // Concatenated block coords at resolution K. 64-bit: K can exceed 2^31 at
  // tight tolerances and doubled coordinates must not overflow.
  using Key = std::vector<long>;
  auto eval_key = [&](const Key& key, long K) {
    std::vector<double> x(d);
    for (int v = 0; v < d; ++v) x[v] = double(key[v]) / double(K);
    ++out.evaluations;
    return cq.eval(x);
  };

  long K = 2;
  std::set<Key> frontier;
  {
    // Initial full grid at K=2 over the product of corner simplices.
    std::vector<std::vector<Key>> block_pts(block_dims.size());
    for (std::size_t b = 0; b < block_dims.size(); ++b) {
      // corner simplex: sum <= K
      std::vector<long> c(block_dims[b], 0);
      std::function<void(int, long)> rec = [&](int idx, long rest) {
        if (idx == block_dims[b]) {
          block_pts[b].push_back(c);
          return;
        }
        for (long k = 0; k <= rest; ++k) {
          c[idx] = k;
          rec(idx + 1, rest - k);
        }
      };
      rec(0, K);
    }
    std::vector<std::size_t> pick(block_dims.size(), 0);
    while (true) {
      Key key;
      for (std::size_t b = 0; b < block_dims.size(); ++b)
        key.insert(key.end(), block_pts[b][pick[b]].begin(), block_pts[b][pick[b]].end());
      frontier.insert(key);
      std::size_t b = 0;
      while (b < pick.size() && ++pick[b] == block_pts[b].size()) pick[b++] = 0;
      if (b == pick.size()) break;
    }
  }

  double best = -1e300;
  Key best_key;
  long best_K = K;
  auto sweep = [&](long Kcur) {
    for (const Key& key : frontier) {
      double v = eval_key(key, Kcur);
      if (v > best) {
        best = v;
        best_key = key;
        best_K = Kcur;
      }
    }
  };
  sweep(K);

  const double slack = tol * 0.5;
  while (L / double(K) > slack) {
    // Prune cells that provably cannot beat the incumbent by more than slack.
    for (auto it = frontier.begin(); it != frontier.end();) {
      double v = eval_key(*it, K);
      if (v + L / double(K) <= best + slack)
        it = frontier.erase(it);
      else
        ++it;
    }
    // Refine survivors: children at resolution 2K within one parent cell.
    long K2 = K * 2;
    std::set<Key> next;
    for (const Key& key : frontier) {
      // Per block, integer vectors within +-3 of doubled coords, valid sums.
      std::vector<std::vector<Key>> block_children(block_dims.size());
      int off = 0;
      for (std::size_t b = 0; b < block_dims.size(); ++b) {
        int bd = block_dims[b];
        std::vector<long> c(bd, 0);
        std::function<void(int, long)> rec = [&](int idx, long sum) {
          if (sum > K2) return;
          if (idx == bd) {
            block_children[b].push_back(c);
            return;
          }
          long center = key[off + idx] * 2;
          for (long delta = -3; delta <= 3; ++delta) {
            long v = center + delta;
            if (v < 0 || v > K2) continue;
            c[idx] = v;
            rec(idx + 1, sum + v);
          }
        };
        rec(0, 0);
        off += bd;
      }
      std::vector<std::size_t> pick(block_dims.size(), 0);
      while (true) {
        Key child;
        for (std::size_t b = 0; b < block_dims.size(); ++b)
          child.insert(child.end(), block_children[b][pick[b]].begin(),
                       block_children[b][pick[b]].end());
        next.insert(std::move(child));
        std::size_t b = 0;
        while (b < pick.size() && ++pick[b] == block_children[b].size())
          pick[b++] = 0;
        if (b == pick.size()) break;
      }
    }
    frontier = std::move(next);
    K = K2;
    sweep(K);
    if (frontier.empty()) break;
  }

  out.value = best;
  out.upper = best + tol;
  out.resolution = K;
  out.argmax.resize(d);
  for (int v = 0; v < d; ++v) out.argmax[v] = double(best_key[v]) / double(best_K);
  return out;
}

// Expands free block coordinates back to full per-block distributions
// (appending the eliminated last coordinate of each block).
inline std::vector<std::vector<double>> expand_blocks(
    const std::vector<double>& free_coords, const std::vector<int>& block_dims) {
  std::vector<std::vector<double>> out;
  int off = 0;
  for (int bd : block_dims) {
    std::vector<double> block;
    double sum = 0;
    for (int v = 0; v < bd; ++v) {
      block.push_back(free_coords[off + v]);
      sum += free_coords[off + v];
    }
    block.push_back(std::max(0.0, 1.0 - sum));
    out.push_back(std::move(block));
    off += bd;
  }
  return out;
}

// Substitutes every variable of p except the given blocks of `player` with
// the exact values from mu, and eliminates each kept block's last coordinate
// via a_last = 1 - sum(others). Result: polynomial over the concatenated free
// coordinates of the kept blocks (order: block order, then coordinate order).
inline Polynomial restrict_to_player_blocks(const Polynomial& p,
                                            const ProfileLayout& layout,
                                            int player,
                                            const std::vector<int>& blocks,
                                            const std::vector<Rat>& mu) {
  // Map flat var -> free var index, or -1 (substituted), or -2 (eliminated
  // last coordinate of a kept block).
  std::vector<int> var_map(layout.total_vars, -1);
  std::vector<int> block_of_last(layout.total_vars, -1);
  std::vector<int> block_dims;
  std::vector<int> block_free_offset;
  int free_count = 0;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    int j = blocks[bi];
    int m = layout.block_sizes[player][j];
    block_free_offset.push_back(free_count);
    block_dims.push_back(m - 1);
    for (int k = 0; k < m - 1; ++k)
      var_map[layout.flat(player, j, k)] = free_count++;
    var_map[layout.flat(player, j, m - 1)] = -2;
    block_of_last[layout.flat(player, j, m - 1)] = (int)bi;
  }

  Polynomial out(free_count);
  for (const auto& [e, c] : p.terms()) {
    // Start with the substituted coefficient, then multiply free factors.
    Polynomial term = Polynomial::constant(free_count, c);
    bool zero = false;
    for (const auto& [v, k] : e) {
      if (var_map[v] >= 0) {
        Polynomial f = Polynomial::var(free_count, var_map[v]);
        for (int r = 0; r < k; ++r) term = term * f;
      } else if (var_map[v] == -2) {
        int bi = block_of_last[v];
        int j = blocks[bi];
        int m = layout.block_sizes[player][j];
        Polynomial last = Polynomial::constant(free_count, Rat(1));
        for (int kk = 0; kk < m - 1; ++kk)
          last = last - Polynomial::var(free_count, block_free_offset[bi] + kk);
        for (int r = 0; r < k; ++r) term = term * last;
      } else {
        Rat val = mu[v];
        if (val == 0) {
          zero = true;
          break;
        }
        Rat pw(1);
        for (int r = 0; r < k; ++r) pw *= val;
        term = term.scaled(pw);
      }
    }
    if (!zero) out = out + term;
  }
  return out;
}

inline std::vector<Rat> to_rat_point(const std::vector<double>& x) {
  std::vector<Rat> out;
  out.reserve(x.size());
  for (double v : x) out.emplace_back(v);  // exact double -> rational
  return out;
}

}  // namespace recall
