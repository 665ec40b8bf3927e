#pragma once

// Equilibrium verifiers: polytime CDT checks (pure-action characterization,
// well-supported variant, KKT residual) and the certified-search EDT / Nash
// checks.

#include <vector>

#include "recall/cdt.hpp"
#include "recall/edt.hpp"
#include "recall/nash.hpp"

namespace recall {

template <class T>
struct CdtCheck {
  bool pass = false;
  T residual{};  // max over (i, I, a) of the advantage g_{I,a}(mu)
  int worst_player = -1, worst_infoset = -1, worst_action = -1;
};

// Pure-action characterization: mu is an eps-CDT equilibrium iff every pure
// action's advantage is <= eps.
template <class T>
CdtCheck<T> verify_cdt(const Game& g, const BasicProfile<T>& mu, const T& eps) {
  CdtCheck<T> out;
  std::vector<T> adv = advantage(g, mu);
  bool first = true;
  for (int i = 0; i < g.num_players; ++i)
    for (int j = 0; j < mu.layout.num_infosets(i); ++j)
      for (int k = 0; k < mu.layout.block_sizes[i][j]; ++k) {
        const T& a = adv[mu.layout.flat(i, j, k)];
        if (first || a > out.residual) {
          out.residual = a;
          out.worst_player = i;
          out.worst_infoset = j;
          out.worst_action = k;
          first = false;
        }
      }
  if (first) out.residual = T(0);
  out.pass = !(out.residual > eps);
  return out;
}

// Every supported action must be eps-optimal among pure actions (by CDT
// utility, i.e. by gradient).
template <class T>
CdtCheck<T> verify_cdt_well_supported(const Game& g, const BasicProfile<T>& mu,
                                      const T& eps) {
  CdtCheck<T> out;
  out.residual = T(0);
  out.pass = true;
  for (int i = 0; i < g.num_players; ++i) {
    std::vector<T> grad = player_gradient(g, i, mu);
    for (int j = 0; j < mu.layout.num_infosets(i); ++j) {
      int m = mu.layout.block_sizes[i][j];
      if (m == 0) continue;
      T kappa = grad[mu.layout.flat(i, j, 0)];
      for (int k = 1; k < m; ++k)
        kappa = std::max(kappa, grad[mu.layout.flat(i, j, k)]);
      for (int k = 0; k < m; ++k) {
        int v = mu.layout.flat(i, j, k);
        if (!(mu.x[v] > T(0))) continue;
        T slack = kappa - grad[v];
        if (slack > out.residual) {
          out.residual = slack;
          out.worst_player = i;
          out.worst_infoset = j;
          out.worst_action = k;
        }
      }
    }
  }
  out.pass = !(out.residual > eps);
  return out;
}

template <class T>
struct KktReport {
  T residual{};              // complementary-slackness violation on the support
  std::vector<T> kappa;      // per (player, infoset), flattened in block order
  std::vector<T> tau;        // per flat variable
};

// KKT multipliers with the canonical choice kappa_j = max_k grad_{jk},
// tau_{jk} = kappa_j - grad_{jk}; residual = max over supported actions of tau.
template <class T>
KktReport<T> kkt_residual(const Game& g, const BasicProfile<T>& mu) {
  KktReport<T> out;
  out.residual = T(0);
  out.tau.assign(mu.layout.total_vars, T(0));
  for (int i = 0; i < g.num_players; ++i) {
    std::vector<T> grad = player_gradient(g, i, mu);
    for (int j = 0; j < mu.layout.num_infosets(i); ++j) {
      int m = mu.layout.block_sizes[i][j];
      if (m == 0) {
        out.kappa.push_back(T(0));
        continue;
      }
      T kappa = grad[mu.layout.flat(i, j, 0)];
      for (int k = 1; k < m; ++k)
        kappa = std::max(kappa, grad[mu.layout.flat(i, j, k)]);
      out.kappa.push_back(kappa);
      for (int k = 0; k < m; ++k) {
        int v = mu.layout.flat(i, j, k);
        out.tau[v] = kappa - grad[v];
        if (mu.x[v] > T(0) && out.tau[v] > out.residual) out.residual = out.tau[v];
      }
    }
  }
  return out;
}

struct EdtCheck {
  bool pass = false;
  double worst_gain = 0.0;  // certified attained deviation gain
  double bar = 0.0;         // true optimum gain <= worst_gain + bar
  int worst_player = -1, worst_infoset = -1;
  std::vector<double> worst_alpha;
};

// Per infoset, certified maximization of the deviation utility with error bar
// eps/10; pass iff the best certified gain <= eps + bar.
inline EdtCheck verify_edt(const Game& g, const Profile& mu, double eps) {
  EdtCheck out;
  EdtContext ctx(g);
  out.bar = eps / 10.0;
  std::vector<Rat> mu_exact = to_rat_point(mu.x);
  for (auto [i, j] : infoset_tiebreak_order(g)) {
    if (ctx.layout.block_sizes[i][j] > kMaxBranching)
      throw branching_too_large_error();
    BestResponse br = certified_best_response(ctx, i, j, mu_exact, out.bar);
    double gain = br.value - expected_utility(g, i, mu);
    if (out.worst_player < 0 || gain > out.worst_gain) {
      out.worst_gain = gain;
      out.worst_player = i;
      out.worst_infoset = j;
      out.worst_alpha = br.alpha;
    }
  }
  if (out.worst_player < 0) out.worst_gain = 0;
  out.pass = out.worst_gain <= eps + out.bar;
  return out;
}

struct NashCheck {
  bool pass = false;
  std::vector<double> gaps;
  double bar = 0.0;
};

// Delegates to nash_gap; pass iff every player's certified deviation benefit
// is <= eps + bar.
inline NashCheck verify_nash(const Game& g, const Profile& mu, double eps) {
  NashCheck out;
  NashGap ng = nash_gap(g, mu, eps / 10.0);
  out.gaps = ng.gaps;
  out.bar = ng.bar;
  out.pass = true;
  for (double gp : ng.gaps)
    if (gp > eps + ng.bar) out.pass = false;
  return out;
}

}  // namespace recall
