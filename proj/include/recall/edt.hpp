#pragma once

// EDT deviation utilities and the eps-best-response dynamics. The per-infoset
// best response is computed by certified grid search over the action simplex,
// so accept/reject verdicts come with explicit error bars.

#include <vector>

#include "recall/bridge.hpp"
#include "recall/game.hpp"
#include "recall/grid.hpp"
#include "recall/report.hpp"

namespace recall {

struct branching_too_large_error : std::runtime_error {
  branching_too_large_error() : std::runtime_error("BRANCHING_TOO_LARGE") {}
};

inline constexpr int kMaxBranching = 6;

// U^(i)(mu_{I -> alpha}, mu^(-i)): expected utility with one block replaced.
template <class T>
T edt_deviation_utility(const Game& g, int player, int infoset,
                        const std::vector<T>& alpha, const BasicProfile<T>& mu) {
  BasicProfile<T> dev = with_infoset_action(mu, player, infoset, alpha);
  return expected_utility(g, player, dev);
}

// Shared precomputation for repeated best-response queries on one game.
struct EdtContext {
  const Game* game = nullptr;
  ProfileLayout layout;
  std::vector<Polynomial> polys;

  explicit EdtContext(const Game& g)
      : game(&g), layout(g.layout()), polys(extract_utility_polynomials(g)) {}
};

struct BestResponse {
  std::vector<double> alpha;  // distribution over the infoset's actions
  double value = 0.0;         // attained deviation utility (lower bound)
  double upper = 0.0;         // certified: per-infoset optimum <= upper
};

inline BestResponse certified_best_response(const EdtContext& ctx, int player,
                                            int infoset,
                                            const std::vector<Rat>& mu_exact,
                                            double eps_half) {
  int m = ctx.layout.block_sizes[player][infoset];
  if (m > kMaxBranching) throw branching_too_large_error();
  Polynomial q = restrict_to_player_blocks(ctx.polys[player], ctx.layout, player,
                                           {infoset}, mu_exact);
  CertifiedMax cm = certified_max(q, {m - 1}, eps_half);
  BestResponse br;
  auto blocks = expand_blocks(cm.argmax, {m - 1});
  br.alpha = blocks[0];
  br.value = cm.value;
  br.upper = cm.upper;
  return br;
}

inline BestResponse certified_best_response(const Game& g, int player, int infoset,
                                            const Profile& mu, double eps_half) {
  EdtContext ctx(g);
  return certified_best_response(ctx, player, infoset, to_rat_point(mu.x), eps_half);
}

// Deterministic scan order: ascending (player, infoset) document order.
inline std::vector<std::pair<int, int>> infoset_tiebreak_order(const Game& g) {
  std::vector<std::pair<int, int>> order;
  for (int i = 0; i < g.num_players; ++i)
    for (int j = 0; j < (int)g.player_infosets[i].size(); ++j)
      order.emplace_back(i, j);
  return order;
}

// eps-best-response dynamics: move to the first neighbour (alpha, mu_{-j})
// with U(mu) <= U(alpha, mu_{-j}) - eps/2, alpha an eps/2-best response.
inline EquilibriumReport edt_dynamics(const Game& g, const Rat& eps,
                                      long max_rounds = 100000,
                                      const Profile* start = nullptr) {
  EquilibriumReport rep;
  rep.concept_name = "edt";
  rep.eps = eps;
  rep.certificate = "edt-dynamics";
  EdtContext ctx(g);
  Profile mu = start ? *start : uniform_profile<double>(ctx.layout);
  const double e = to_double(eps);
  auto order = infoset_tiebreak_order(g);

  long rounds = 0;
  long accepted = 0;
  double worst_gain = 0;
  bool settled = false;
  while (rounds < max_rounds) {
    ++rounds;
    bool moved = false;
    worst_gain = 0;
    for (auto [i, j] : order) {
      std::vector<Rat> mu_exact = to_rat_point(mu.x);
      BestResponse br = certified_best_response(ctx, i, j, mu_exact, e / 2);
      double cur = expected_utility(g, i, mu);
      double gain = br.value - cur;
      worst_gain = std::max(worst_gain, gain);
      if (cur <= br.value - e / 2) {
        mu = with_infoset_action(mu, i, j, br.alpha);
        ++accepted;
        moved = true;
        break;  // first improving neighbour, then rescan
      }
    }
    if (!moved) {
      settled = true;
      break;
    }
  }
  rep.profile = mu;
  rep.iterations = accepted;
  rep.residual = worst_gain;
  rep.details["rounds"] = std::to_string(rounds);
  rep.converged = settled;
  if (!settled) rep.certificate = "UNCONVERGED";
  return rep;
}

}  // namespace recall
