#pragma once

// The two directions of the game <-> polynomial correspondence, plus the
// cube-to-simplex embedding.

#include <set>
#include <string>
#include <vector>

#include "recall/game.hpp"
#include "recall/poly.hpp"

namespace recall {

// One utility polynomial per player over the game's flat layout: each terminal
// contributes one monomial; exponent of variable (i', j, k) = count of that
// action on the terminal's history; coefficient = payoff * chance weights.
inline std::vector<Polynomial> extract_utility_polynomials(const Game& g) {
  ProfileLayout layout = g.layout();
  std::vector<Polynomial> out(g.num_players, Polynomial(layout.total_vars));

  struct Frame {
    int node;
    Rat chance;
    ExpVec exps;  // kept sorted by flat variable
  };
  std::vector<Frame> stack;
  if (g.num_nodes() > 0) stack.push_back({g.root(), Rat(1), {}});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const Node& nd = g.nodes[f.node];
    switch (nd.kind) {
      case NodeKind::Terminal:
        for (int i = 0; i < g.num_players; ++i)
          out[i].add_term(f.exps, nd.payoffs[i] * f.chance);
        break;
      case NodeKind::Chance:
        for (std::size_t k = 0; k < nd.children.size(); ++k)
          stack.push_back({nd.children[k], f.chance * nd.chance_weights[k], f.exps});
        break;
      case NodeKind::Decision:
        for (std::size_t k = 0; k < nd.children.size(); ++k) {
          Frame child{nd.children[k], f.chance, f.exps};
          int v = g.flat_var(layout, nd.infoset, (int)k);
          auto it = std::lower_bound(
              child.exps.begin(), child.exps.end(), std::make_pair(v, 0),
              [](const auto& a, const auto& b) { return a.first < b.first; });
          if (it != child.exps.end() && it->first == v)
            ++it->second;
          else
            child.exps.insert(it, {v, 1});
          stack.push_back(std::move(child));
        }
        break;
    }
  }
  return out;
}

// Inverse construction: uniform chance root over the union support, one
// chain subtree per monomial, lexicographically ordered (i, j, k) multiset.
inline Game poly_to_game(const std::vector<Polynomial>& polys,
                         const ProfileLayout& layout) {
  int num_players = layout.num_players();
  if ((int)polys.size() != num_players) throw layout_mismatch_error();
  for (const Polynomial& p : polys)
    if (p.n_vars() != layout.total_vars) throw layout_mismatch_error();

  // supp(p): exponent vectors with lambda_D != 0 for some player.
  std::set<ExpVec> supp;
  for (const Polynomial& p : polys)
    for (const auto& [e, c] : p.terms()) supp.insert(e);

  GameBuilder b(num_players);
  std::vector<std::vector<int>> infoset_ids(num_players);
  for (int i = 0; i < num_players; ++i)
    for (int j = 0; j < layout.num_infosets(i); ++j) {
      std::vector<std::string> actions;
      for (int k = 0; k < layout.block_sizes[i][j]; ++k)
        actions.push_back("a" + std::to_string(k + 1));
      infoset_ids[i].push_back(
          b.add_infoset(i, "I" + std::to_string(j + 1), std::move(actions)));
    }

  // Flat var -> (player, infoset-within-player, action).
  std::vector<std::tuple<int, int, int>> var_site(layout.total_vars);
  for (int i = 0; i < num_players; ++i)
    for (int j = 0; j < layout.num_infosets(i); ++j)
      for (int k = 0; k < layout.block_sizes[i][j]; ++k)
        var_site[layout.flat(i, j, k)] = {i, j, k};

  const int r = static_cast<int>(supp.size());
  if (r == 0) {
    // All-zero polynomials: a single zero terminal, no chance root.
    b.add_terminal(-1, std::vector<Rat>(num_players, Rat(0)));
    return b.build();
  }

  std::vector<std::pair<std::string, Rat>> dist;
  for (int d = 0; d < r; ++d)
    dist.emplace_back("m" + std::to_string(d + 1), Rat(1, r));
  int root = b.add_chance(-1, dist);

  const std::vector<Rat> zero_payoffs(num_players, Rat(0));
  for (const ExpVec& D : supp) {
    // Lexicographically ordered multiset of (i, j, k); ExpVec is sorted by
    // flat variable and flat order equals (i, j, k) order by construction.
    std::vector<int> chain_vars;
    for (const auto& [v, rep] : D)
      for (int step = 0; step < rep; ++step) chain_vars.push_back(v);

    std::vector<Rat> zD(num_players);
    for (int i = 0; i < num_players; ++i) {
      auto it = polys[i].terms().find(D);
      zD[i] = (it == polys[i].terms().end()) ? Rat(0) : Rat(it->second * r);
    }
    if (chain_vars.empty()) {
      b.add_terminal(root, zD);
      continue;
    }
    auto site0 = var_site[chain_vars[0]];
    int cur = b.add_decision(root, infoset_ids[std::get<0>(site0)][std::get<1>(site0)]);
    for (std::size_t step = 0; step < chain_vars.size(); ++step) {
      auto [i, j, k] = var_site[chain_vars[step]];
      int next = -1;
      for (int a = 0; a < layout.block_sizes[i][j]; ++a) {
        if (a == k) {
          if (step + 1 == chain_vars.size()) {
            b.add_terminal(cur, zD);  // the payoff leaf z_D
          } else {
            auto [i2, j2, k2] = var_site[chain_vars[step + 1]];
            (void)k2;
            next = b.add_decision(cur, infoset_ids[i2][j2]);
          }
        } else {
          b.add_terminal(cur, zero_payoffs);  // off the monomial's path
        }
      }
      cur = next;
    }
  }
  return b.build();
}

// Cube -> simplex-product embedding: each free variable x_j of a polynomial
// over [0,1]^n becomes the first coordinate of a fresh 2-action block; the
// embedded polynomial reads only first coordinates.
struct CubeEmbedding {
  Polynomial p_hat;
  ProfileLayout layout;  // single player, n blocks of 2 actions
};

inline CubeEmbedding cube_embed(const Polynomial& p) {
  const int n = p.n_vars();
  CubeEmbedding out;
  out.layout = ProfileLayout({std::vector<int>(n, 2)});
  Polynomial ph(out.layout.total_vars);
  for (const auto& [e, c] : p.terms()) {
    ExpVec e2;
    for (const auto& [v, k] : e) e2.emplace_back(out.layout.flat(0, v, 0), k);
    ph.add_term(std::move(e2), c);
  }
  out.p_hat = std::move(ph);
  return out;
}

// First coordinates of each block: maps an embedded profile back to a cube
// point.
template <class T>
std::vector<T> cube_project(const BasicProfile<T>& mu) {
  std::vector<T> x;
  for (int j = 0; j < mu.layout.num_infosets(0); ++j)
    x.push_back(mu.at(0, j, 0));
  return x;
}

}  // namespace recall
