#pragma once

// CDT utilities (first-order Taylor deviations), the advantage vector, the
// Brouwer improvement map F, and the two CDT solvers (Picard fixed-point
// iteration on F; projected gradient ascent for single-player games).

#include <cmath>
#include <vector>

#include "recall/bridge.hpp"
#include "recall/game.hpp"
#include "recall/poly.hpp"
#include "recall/report.hpp"

namespace recall {

// Tree-walk gradient: d U^(i) / d mu_{I,a} = sum_{h in I} Prob(h|mu) * U(mu | h a).
template <class T>
T gradient_tree_walk(const Game& g, int player, int global_infoset, int action,
                     const BasicProfile<T>& mu) {
  const Infoset& is = g.infosets[global_infoset];
  T sum(0);
  for (int h : is.nodes) {
    T reach = reach_probability(g, h, mu);
    int child = g.nodes[h].children[action];
    sum += reach * expected_utility_from(g, g.infosets[global_infoset].player,
                                         mu.layout, mu, child);
  }
  (void)player;
  return sum;
}

// Full gradient of the infoset owner's utility, one entry per flat variable
// of that player's blocks.
template <class T>
std::vector<T> player_gradient(const Game& g, int player,
                               const BasicProfile<T>& mu) {
  std::vector<T> grad(mu.layout.total_vars, T(0));
  for (int gi : g.player_infosets[player]) {
    const Infoset& is = g.infosets[gi];
    for (int k = 0; k < (int)is.actions.size(); ++k)
      grad[mu.layout.flat(player, is.index_in_player, k)] =
          gradient_tree_walk(g, player, gi, k, mu);
  }
  return grad;
}

struct GradientPair {
  int player, infoset, action;  // infoset is the player-local index j
  Rat symbolic, tree_walk;
};

// Both routes to the same derivative: symbolic polynomial differentiation and
// the reach-weighted tree walk. Exact agreement in rational mode.
inline std::vector<GradientPair> gradient_two_ways(const Game& g, int player,
                                                   const RatProfile& mu) {
  std::vector<Polynomial> polys = extract_utility_polynomials(g);
  std::vector<GradientPair> out;
  for (int j = 0; j < mu.layout.num_infosets(player); ++j) {
    int gi = g.player_infosets[player][j];
    for (int k = 0; k < (int)g.infosets[gi].actions.size(); ++k) {
      GradientPair gp;
      gp.player = player;
      gp.infoset = j;
      gp.action = k;
      gp.symbolic = polys[player]
                        .partial_derivative(mu.layout.flat(player, j, k))
                        .evaluate(mu.x);
      gp.tree_walk = gradient_tree_walk(g, player, gi, k, mu);
      out.push_back(std::move(gp));
    }
  }
  return out;
}

// U_CDT(alpha | mu, I_j) = U(mu) + sum_a (alpha_a - mu_{j,a}) * grad_{j,a}.
template <class T>
T cdt_utility(const Game& g, int player, int infoset, const std::vector<T>& alpha,
              const BasicProfile<T>& mu) {
  int m = mu.layout.block_sizes[player][infoset];
  if ((int)alpha.size() != m || !is_distribution(alpha))
    throw block_dim_mismatch_error();
  int gi = g.player_infosets[player][infoset];
  T value = expected_utility(g, player, mu);
  for (int k = 0; k < m; ++k) {
    T grad = gradient_tree_walk(g, player, gi, k, mu);
    value += (alpha[k] - mu.at(player, infoset, k)) * grad;
  }
  return value;
}

// g_{j,k}^{(i)}(mu) = U_CDT(a_k | mu, I_j) - U(mu), per flat variable.
template <class T>
std::vector<T> advantage(const Game& g, const BasicProfile<T>& mu) {
  std::vector<T> adv(mu.layout.total_vars, T(0));
  for (int i = 0; i < g.num_players; ++i) {
    std::vector<T> grad = player_gradient(g, i, mu);
    for (int j = 0; j < mu.layout.num_infosets(i); ++j) {
      int m = mu.layout.block_sizes[i][j];
      T mean(0);
      for (int k = 0; k < m; ++k) {
        int v = mu.layout.flat(i, j, k);
        mean += mu.x[v] * grad[v];
      }
      for (int k = 0; k < m; ++k) {
        int v = mu.layout.flat(i, j, k);
        adv[v] = grad[v] - mean;
      }
    }
  }
  return adv;
}

// F(mu)_{jk} = (mu_{jk} + max{0, g_{jk}}) / (1 + sum_k' max{0, g_{jk'}}).
template <class T>
BasicProfile<T> brouwer_map(const Game& g, const BasicProfile<T>& mu) {
  std::vector<T> adv = advantage(g, mu);
  BasicProfile<T> out = mu;
  for (int i = 0; i < g.num_players; ++i)
    for (int j = 0; j < mu.layout.num_infosets(i); ++j) {
      int m = mu.layout.block_sizes[i][j];
      T denom(1);
      for (int k = 0; k < m; ++k) {
        int v = mu.layout.flat(i, j, k);
        if (adv[v] > T(0)) denom += adv[v];
      }
      for (int k = 0; k < m; ++k) {
        int v = mu.layout.flat(i, j, k);
        T plus = adv[v] > T(0) ? adv[v] : T(0);
        out.x[v] = (mu.x[v] + plus) / denom;
      }
    }
  return out;
}

struct CdtBoundParams {
  Rat theta;  // max{1, 3|H| max|u|}
  Rat L_F;    // 11 |H|^2 L_inf
  Rat Linf;
  int num_nodes = 0;
};

inline CdtBoundParams bound_params(const Game& g) {
  CdtBoundParams p;
  p.num_nodes = g.num_nodes();
  p.theta = std::max(Rat(1), Rat(3 * g.num_nodes() * max_abs_payoff(g)));
  p.Linf = game_lipschitz(extract_utility_polynomials(g)).Linf;
  p.L_F = Rat(11 * g.num_nodes() * g.num_nodes()) * p.Linf;
  return p;
}

// Damped fixed-point iteration mu <- (1 - gamma) mu + gamma F(mu), run until
// the raw residual ||F(mu) - mu||_inf falls below eps_fp, which guarantees an
// eps-CDT equilibrium via eps' = 2 theta |H|^{3/2} sqrt(eps_fp). Undamped
// Picard iteration of F cycles on interior equilibria, so gamma < 1 is
// required for convergence; the residual is still measured against F itself.
inline EquilibriumReport solve_cdt_fixed_point(const Game& g, const Rat& eps,
                                               long max_iter = 5'000'000,
                                               const Profile* start = nullptr) {
  EquilibriumReport rep;
  rep.concept_name = "cdt";
  rep.eps = eps;
  rep.certificate = "fixed-point-residual";
  ProfileLayout layout = g.layout();
  Profile mu = start ? *start : uniform_profile<double>(layout);

  CdtBoundParams bp = bound_params(g);
  double H = double(g.num_nodes());
  double theta = to_double(bp.theta);
  double eps_fp = to_double(eps) / (2.0 * theta * std::pow(H, 1.5));
  eps_fp *= eps_fp;
  if (eps_fp >= 0.25) eps_fp = 0.249;  // the eps' guarantee needs eps_fp < 1/4
  rep.details["eps_fp"] = double_to_string(eps_fp);
  rep.details["theta"] = rat_to_string(bp.theta);
  rep.details["L_F"] = rat_to_string(bp.L_F);

  if (layout.total_vars == 0) {
    rep.profile = mu;
    rep.converged = true;
    return rep;
  }
  const double gamma = 0.5;
  rep.details["gamma"] = double_to_string(gamma);
  double best_res = 1e300;
  Profile best = mu;
  long it = 0;
  for (; it < max_iter; ++it) {
    Profile next = brouwer_map(g, mu);
    double res = to_double(linf_distance(next, mu));
    if (res < best_res) {
      best_res = res;
      best = mu;
    }
    if (res < eps_fp) {
      rep.converged = true;
      break;
    }
    for (int v = 0; v < layout.total_vars; ++v)
      mu.x[v] = (1.0 - gamma) * mu.x[v] + gamma * next.x[v];
    renormalize(mu);
  }
  rep.iterations = it;
  rep.profile = best;
  rep.residual = best_res;
  rep.details["eps_prime"] =
      double_to_string(2.0 * theta * std::pow(H, 1.5) * std::sqrt(best_res));
  if (!rep.converged) rep.certificate = "UNCONVERGED";
  return rep;
}

// Projected gradient ascent with fixed step 1/L_inf; terminates once the
// iterate is an eps-well-supported CDT point (checked from the same gradient
// values). Single strategic player only.
inline EquilibriumReport solve_cdt_pgd_single_player(const Game& g, const Rat& eps,
                                                     long max_iter = 0,
                                                     const Profile* start = nullptr) {
  if (g.num_players != 1)
    throw std::runtime_error("solve_cdt_pgd_single_player: single-player games only");
  EquilibriumReport rep;
  rep.concept_name = "cdt-pgd";
  rep.eps = eps;
  rep.certificate = "well-supported";
  ProfileLayout layout = g.layout();
  Profile mu = start ? *start : uniform_profile<double>(layout);

  LipschitzBundle lb = game_lipschitz(extract_utility_polynomials(g));
  double Linf = to_double(lb.Linf);
  double e = to_double(eps);
  const double c_iter = 8.0;  // documented constant in max_iter = c L |H| / eps^2
  if (max_iter <= 0) {
    double cap = std::ceil(c_iter * Linf * double(g.num_nodes()) / (e * e));
    max_iter = cap > 1e8 ? (long)1e8 : (long)cap;
  }
  rep.details["step"] = double_to_string(1.0 / Linf);
  rep.details["c"] = double_to_string(c_iter);

  const double supp_tol = 1e-12;
  double kkt = 0;
  long it = 0;
  for (; it <= max_iter; ++it) {
    std::vector<double> grad = player_gradient(g, 0, mu);
    // Well-supported residual: max over supported actions of (max_k grad - grad).
    kkt = 0;
    for (int j = 0; j < layout.num_infosets(0); ++j) {
      int m = layout.block_sizes[0][j];
      double kappa = -1e300;
      for (int k = 0; k < m; ++k)
        kappa = std::max(kappa, grad[layout.flat(0, j, k)]);
      for (int k = 0; k < m; ++k) {
        int v = layout.flat(0, j, k);
        if (mu.x[v] > supp_tol) kkt = std::max(kkt, kappa - grad[v]);
      }
    }
    if (kkt <= e) {
      rep.converged = true;
      break;
    }
    std::vector<double> moved(mu.x.size());
    for (std::size_t v = 0; v < mu.x.size(); ++v)
      moved[v] = mu.x[v] + grad[v] / Linf;
    mu = project_to_simplex_product(moved, layout);
  }
  rep.iterations = it;
  rep.profile = mu;
  rep.residual = kkt;
  if (!rep.converged) rep.certificate = "UNCONVERGED";
  return rep;
}

}  // namespace recall
