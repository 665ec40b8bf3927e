#pragma once

// Certified grid search for Nash equilibria, max-min / min-max values with
// Lipschitz error bars, per-player exploitability, and the exhaustive
// small-grid EDT existence search.

#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <unordered_map>
#include <vector>

#include "recall/bridge.hpp"
#include "recall/edt.hpp"
#include "recall/game.hpp"
#include "recall/grid.hpp"
#include "recall/report.hpp"

namespace recall {

struct dimension_too_large_error : std::runtime_error {
  dimension_too_large_error() : std::runtime_error("DIMENSION_TOO_LARGE") {}
};
struct not_zero_sum_error : std::runtime_error {
  not_zero_sum_error() : std::runtime_error("NOT_ZERO_SUM") {}
};

// Per-terminal factorization of reach probabilities: reach_z(mu) =
// chance_z * prod_i factor_z^(i)(mu^(i)); lets grid sweeps reuse per-player
// factor vectors.
struct CompiledGame {
  int num_players = 0;
  int num_terminals = 0;
  std::vector<double> chance;                   // per terminal
  std::vector<std::vector<double>> payoff;      // [player][terminal]
  std::vector<std::vector<std::vector<int>>> vars;  // [player][terminal][flat vars]

  static CompiledGame from(const Game& g) {
    CompiledGame cg;
    cg.num_players = g.num_players;
    ProfileLayout layout = g.layout();
    cg.payoff.resize(g.num_players);
    cg.vars.resize(g.num_players);
    std::function<void(int, Rat, std::vector<std::vector<int>>&)> walk =
        [&](int node, Rat ch, std::vector<std::vector<int>>& path_vars) {
          const Node& nd = g.nodes[node];
          if (nd.kind == NodeKind::Terminal) {
            cg.chance.push_back(to_double(ch));
            for (int i = 0; i < g.num_players; ++i) {
              cg.payoff[i].push_back(to_double(nd.payoffs[i]));
              cg.vars[i].push_back(path_vars[i]);
            }
            ++cg.num_terminals;
            return;
          }
          for (std::size_t k = 0; k < nd.children.size(); ++k) {
            if (nd.kind == NodeKind::Chance) {
              walk(nd.children[k], Rat(ch * nd.chance_weights[k]), path_vars);
            } else {
              int pl = g.infosets[nd.infoset].player;
              path_vars[pl].push_back(g.flat_var(layout, nd.infoset, (int)k));
              walk(nd.children[k], ch, path_vars);
              path_vars[pl].pop_back();
            }
          }
        };
    std::vector<std::vector<int>> path(g.num_players);
    walk(g.root(), Rat(1), path);
    return cg;
  }

  // factor_z for one player's coordinate vector.
  std::vector<double> player_factors(int player, const std::vector<double>& x) const {
    std::vector<double> f(num_terminals, 1.0);
    for (int z = 0; z < num_terminals; ++z)
      for (int v : vars[player][z]) f[z] *= x[v];
    return f;
  }
};

// One player's strategy grid at resolution K: the product over her blocks of
// the simplex grids, with per-terminal factors precomputed.
struct PlayerGrid {
  int player = 0;
  std::vector<std::vector<double>> coords;        // [point][layout.total_vars] sparse? full
  std::vector<std::vector<double>> factors;       // [point][terminal]
  std::size_t size() const { return coords.size(); }
};

inline PlayerGrid build_player_grid(const Game& g, const CompiledGame& cg,
                                    const ProfileLayout& layout, int player,
                                    long K) {
  PlayerGrid pg;
  pg.player = player;
  int nblocks = layout.num_infosets(player);
  std::vector<std::vector<std::vector<double>>> per_block(nblocks);
  for (int j = 0; j < nblocks; ++j) {
    int m = layout.block_sizes[player][j];
    simplex_grid_compositions(m, (int)K, [&](const std::vector<int>& c) {
      std::vector<double> block(m);
      for (int k = 0; k < m; ++k) block[k] = double(c[k]) / double(K);
      per_block[j].push_back(std::move(block));
    });
  }
  std::vector<std::size_t> pick(nblocks, 0);
  while (true) {
    std::vector<double> x(layout.total_vars, 0.0);
    for (int j = 0; j < nblocks; ++j)
      for (int k = 0; k < layout.block_sizes[player][j]; ++k)
        x[layout.flat(player, j, k)] = per_block[j][pick[j]][k];
    pg.factors.push_back(cg.player_factors(player, x));
    pg.coords.push_back(std::move(x));
    int j = 0;
    while (j < nblocks && ++pick[j] == per_block[j].size()) pick[j++] = 0;
    if (j == nblocks) break;
    if (nblocks == 0) break;
  }
  (void)g;
  return pg;
}

inline double combined_utility(const CompiledGame& cg, int player,
                               const std::vector<const std::vector<double>*>& factors) {
  double u = 0;
  for (int z = 0; z < cg.num_terminals; ++z) {
    double r = cg.chance[z] * cg.payoff[player][z];
    for (auto* f : factors) r *= (*f)[z];
    u += r;
  }
  return u;
}

inline long grid_resolution(const Rat& Linf, const Rat& eps) {
  // K = ceil(2 L / eps), exact.
  Rat q = 2 * Linf / eps;
  mpz_class k;
  mpz_cdiv_q(k.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return std::max(1L, k.get_si());
}

// --- per-player exploitability ---------------------------------------------

struct NashGap {
  std::vector<double> gaps;  // attained deviation benefit per player
  double bar = 0.0;          // true gap <= gaps[i] + bar
};

inline NashGap nash_gap(const Game& g, const Profile& mu, double bar_target) {
  ProfileLayout layout = g.layout();
  std::vector<Polynomial> polys = extract_utility_polynomials(g);
  NashGap out;
  out.bar = bar_target;
  std::vector<Rat> mu_exact = to_rat_point(mu.x);
  for (int i = 0; i < g.num_players; ++i) {
    std::vector<int> blocks;
    std::vector<int> dims;
    int free_dims = 0;
    for (int j = 0; j < layout.num_infosets(i); ++j) {
      blocks.push_back(j);
      dims.push_back(layout.block_sizes[i][j] - 1);
      free_dims += layout.block_sizes[i][j] - 1;
    }
    if (free_dims > 6) throw dimension_too_large_error();
    Polynomial q = restrict_to_player_blocks(polys[i], layout, i, blocks, mu_exact);
    CertifiedMax cm = certified_max(q, dims, bar_target);
    double cur = expected_utility(g, i, mu);
    out.gaps.push_back(cm.value - cur);
  }
  return out;
}

// --- grid searches ----------------------------------------------------------

namespace detail {

// Full product grid over every block of every player, with per-player
// memoized best-response values; `gap_fn` decides acceptance.
struct GridSearchSetup {
  ProfileLayout layout;
  CompiledGame cg;
  std::vector<PlayerGrid> grids;
  long K = 1;
  Rat Linf;
};

inline GridSearchSetup make_setup(const Game& g, const Rat& eps, int max_free_dims) {
  GridSearchSetup s;
  s.layout = g.layout();
  if (s.layout.free_dims() > max_free_dims) throw dimension_too_large_error();
  s.Linf = game_lipschitz(extract_utility_polynomials(g)).Linf;
  s.K = grid_resolution(s.Linf, eps);
  s.cg = CompiledGame::from(g);
  for (int i = 0; i < g.num_players; ++i)
    s.grids.push_back(build_player_grid(g, s.cg, s.layout, i, s.K));
  return s;
}

}  // namespace detail

// Exhaustive eps/(2 L_inf) grid search for an eps-Nash point. If no grid
// point passes, an exact Nash equilibrium cannot exist (its nearest grid
// neighbour would have deviation benefit <= 2 L_inf / K <= eps).
inline EquilibriumReport grid_nash_search(const Game& g, const Rat& eps) {
  EquilibriumReport rep;
  rep.concept_name = "nash";
  rep.eps = eps;
  detail::GridSearchSetup s = detail::make_setup(g, eps, 4);
  const int N = g.num_players;
  rep.details["grid_resolution"] = std::to_string(s.K);
  rep.details["Linf"] = rat_to_string(s.Linf);

  // Best-response tables: for player i, max utility over her own grid as a
  // function of the other players' grid indices (mixed radix, player order).
  std::vector<std::vector<double>> br(N);
  for (int i = 0; i < N; ++i) {
    std::size_t opp_total = 1;
    for (int o = 0; o < N; ++o)
      if (o != i) opp_total *= s.grids[o].size();
    br[i].assign(opp_total, -1e300);
    std::vector<std::size_t> idx(N, 0);
    for (std::size_t flat = 0; flat < opp_total; ++flat) {
      std::size_t rem = flat;
      std::vector<const std::vector<double>*> fac;
      for (int o = 0; o < N; ++o) {
        if (o == i) continue;
        std::size_t sz = s.grids[o].size();
        idx[o] = rem % sz;
        rem /= sz;
        fac.push_back(&s.grids[o].factors[idx[o]]);
      }
      double best = -1e300;
      fac.push_back(nullptr);
      for (std::size_t own = 0; own < s.grids[i].size(); ++own) {
        fac.back() = &s.grids[i].factors[own];
        best = std::max(best, combined_utility(s.cg, i, fac));
      }
      br[i][flat] = best;
    }
  }

  const double e = to_double(eps) + 1e-12;
  std::vector<std::size_t> idx(N, 0);
  while (true) {
    bool ok = true;
    double worst = 0;
    for (int i = 0; i < N && ok; ++i) {
      std::vector<const std::vector<double>*> fac;
      std::size_t flat = 0, mult = 1;
      for (int o = 0; o < N; ++o) {
        if (o == i) continue;
        flat += idx[o] * mult;
        mult *= s.grids[o].size();
      }
      for (int o = 0; o < N; ++o) fac.push_back(&s.grids[o].factors[idx[o]]);
      double u = combined_utility(s.cg, i, fac);
      double gap = br[i][flat] - u;
      worst = std::max(worst, gap);
      if (gap > e) ok = false;
    }
    if (ok) {
      std::vector<double> x(s.layout.total_vars, 0.0);
      for (int i = 0; i < N; ++i)
        for (int v = 0; v < s.layout.total_vars; ++v)
          x[v] += s.grids[i].coords[idx[i]][v];
      rep.profile = Profile(s.layout, std::move(x));
      rep.residual = worst;
      rep.converged = true;
      rep.certificate = "grid-eps-nash";
      return rep;
    }
    int i = 0;
    while (i < N && ++idx[i] == s.grids[i].size()) idx[i++] = 0;
    if (i == N) break;
  }
  rep.profile = uniform_profile<double>(s.layout);
  rep.converged = true;
  rep.certificate = "CERTIFIED_NO_EXACT_NASH";
  rep.residual = 0;
  return rep;
}

// Exhaustive grid search for an eps-EDT point (Sigma2P-membership grid); the
// per-infoset deviation optimum is itself certified. Same soundness argument
// as grid_nash_search, with per-infoset deviations.
inline EquilibriumReport grid_edt_search(const Game& g, const Rat& eps) {
  EquilibriumReport rep;
  rep.concept_name = "edt";
  rep.eps = eps;
  detail::GridSearchSetup s = detail::make_setup(g, eps, 4);
  const int N = g.num_players;
  rep.details["grid_resolution"] = std::to_string(s.K);
  rep.details["Linf"] = rat_to_string(s.Linf);
  std::vector<Polynomial> polys = extract_utility_polynomials(g);
  const double e = to_double(eps) + 1e-12;
  const double br_tol = to_double(eps) / 10.0;

  // Memo of certified per-infoset deviation optima keyed by the profile with
  // the deviating block's coordinates dropped.
  struct KeyHash {
    std::size_t operator()(const std::vector<long>& k) const {
      std::size_t h = 1469598103934665603ull;
      for (long v : k) h = (h ^ std::size_t(v)) * 1099511628211ull;
      return h;
    }
  };
  std::vector<std::unordered_map<std::vector<long>, double, KeyHash>> memo;
  std::vector<std::pair<int, int>> sites = infoset_tiebreak_order(g);
  memo.resize(sites.size());

  std::vector<std::size_t> idx(N, 0);
  while (true) {
    std::vector<double> x(s.layout.total_vars, 0.0);
    for (int i = 0; i < N; ++i)
      for (int v = 0; v < s.layout.total_vars; ++v)
        x[v] += s.grids[i].coords[idx[i]][v];
    Profile mu(s.layout, x);
    bool ok = true;
    double worst = 0;
    for (std::size_t sidx = 0; sidx < sites.size() && ok; ++sidx) {
      auto [i, j] = sites[sidx];
      std::vector<long> key;
      for (int v = 0; v < s.layout.total_vars; ++v) {
        bool in_block = v >= s.layout.block_offsets[i][j] &&
                        v < s.layout.block_offsets[i][j] + s.layout.block_sizes[i][j];
        if (!in_block) key.push_back(std::lround(x[v] * double(s.K) * 2));
      }
      auto it = memo[sidx].find(key);
      double opt;
      if (it != memo[sidx].end()) {
        opt = it->second;
      } else {
        Polynomial q = restrict_to_player_blocks(polys[i], s.layout, i, {j},
                                                 to_rat_point(x));
        opt = certified_max(q, {s.layout.block_sizes[i][j] - 1}, br_tol).value;
        memo[sidx].emplace(std::move(key), opt);
      }
      double u = expected_utility(g, i, mu);
      double gap = opt - u;
      worst = std::max(worst, gap);
      if (gap > e) ok = false;
    }
    if (ok) {
      rep.profile = mu;
      rep.residual = worst;
      rep.converged = true;
      rep.certificate = "grid-eps-edt";
      return rep;
    }
    int i = 0;
    while (i < N && ++idx[i] == s.grids[i].size()) idx[i++] = 0;
    if (i == N) break;
  }
  rep.profile = uniform_profile<double>(s.layout);
  rep.converged = true;
  rep.certificate = "CERTIFIED_NO_EXACT_EDT";
  rep.residual = 0;
  return rep;
}

// --- duality gap ------------------------------------------------------------

struct DualityReport {
  double maxmin = 0, minmax = 0, gap = 0;
  double error_bar = 0;  // each value within +- error_bar of the true one
  long resolution = 0;
  Profile pi1, pi2;  // argmax-min and argmin-max strategies (full layout, own
                     // blocks filled, other blocks zero)
};

inline bool is_zero_sum(const Game& g) {
  if (g.num_players != 2) return false;
  std::vector<Polynomial> polys = extract_utility_polynomials(g);
  return (polys[0] + polys[1]).is_zero();
}

inline DualityReport maxmin_minmax(const Game& g, double bar_target = 0.01) {
  if (!is_zero_sum(g)) throw not_zero_sum_error();
  ProfileLayout layout = g.layout();
  for (int i = 0; i < 2; ++i) {
    int fd = 0;
    for (int j = 0; j < layout.num_infosets(i); ++j)
      fd += layout.block_sizes[i][j] - 1;
    if (fd > 4) throw dimension_too_large_error();
  }
  Rat Linf = game_lipschitz(extract_utility_polynomials(g)).Linf;
  long K = grid_resolution(Linf, Rat(2) * Rat(bar_target));  // K = ceil(L/bar)
  CompiledGame cg = CompiledGame::from(g);
  PlayerGrid g1 = build_player_grid(g, cg, layout, 0, K);
  PlayerGrid g2 = build_player_grid(g, cg, layout, 1, K);

  const std::size_t n1 = g1.size(), n2 = g2.size();
  // One pass: row minima (for max-min) and column maxima (for min-max).
  std::vector<double> colmax(n2, -1e300);
  double maxmin = -1e300;
  std::size_t arg1 = 0;
  int nthreads = std::min<long>(solver_threads(), (long)n1);
  std::vector<std::future<std::tuple<double, std::size_t, std::vector<double>>>> futs;
  std::size_t chunk = (n1 + nthreads - 1) / nthreads;
  for (int t = 0; t < nthreads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(n1, lo + chunk);
    futs.push_back(std::async(std::launch::async, [&, lo, hi]() {
      double local_maxmin = -1e300;
      std::size_t local_arg = lo;
      std::vector<double> local_colmax(n2, -1e300);
      for (std::size_t a = lo; a < hi; ++a) {
        double rowmin = 1e300;
        for (std::size_t b = 0; b < n2; ++b) {
          double u = 0;
          for (int z = 0; z < cg.num_terminals; ++z)
            u += cg.chance[z] * cg.payoff[0][z] * g1.factors[a][z] * g2.factors[b][z];
          rowmin = std::min(rowmin, u);
          local_colmax[b] = std::max(local_colmax[b], u);
        }
        if (rowmin > local_maxmin) {
          local_maxmin = rowmin;
          local_arg = a;
        }
      }
      return std::make_tuple(local_maxmin, local_arg, std::move(local_colmax));
    }));
  }
  for (auto& f : futs) {
    auto [lm, la, lc] = f.get();
    if (lm > maxmin) {
      maxmin = lm;
      arg1 = la;
    }
    for (std::size_t b = 0; b < n2; ++b) colmax[b] = std::max(colmax[b], lc[b]);
  }
  double minmax = 1e300;
  std::size_t arg2 = 0;
  for (std::size_t b = 0; b < n2; ++b)
    if (colmax[b] < minmax) {
      minmax = colmax[b];
      arg2 = b;
    }

  DualityReport dr;
  dr.maxmin = maxmin;
  dr.minmax = minmax;
  dr.gap = minmax - maxmin;
  dr.error_bar = to_double(Linf) / double(K);
  dr.resolution = K;
  dr.pi1 = Profile(layout, g1.coords[arg1]);
  dr.pi2 = Profile(layout, g2.coords[arg2]);
  return dr;
}

// Duality direction: the (argmax-min, argmin-max) pair is an eps-Nash
// profile with eps = gap + error bars.
inline Profile gap_to_equilibrium(const Game& g, const DualityReport& dr) {
  ProfileLayout layout = g.layout();
  std::vector<double> x(layout.total_vars, 0.0);
  for (int j = 0; j < layout.num_infosets(0); ++j)
    for (int k = 0; k < layout.block_sizes[0][j]; ++k)
      x[layout.flat(0, j, k)] = dr.pi1.x[layout.flat(0, j, k)];
  for (int j = 0; j < layout.num_infosets(1); ++j)
    for (int k = 0; k < layout.block_sizes[1][j]; ++k)
      x[layout.flat(1, j, k)] = dr.pi2.x[layout.flat(1, j, k)];
  return Profile(layout, std::move(x));
}

}  // namespace recall
