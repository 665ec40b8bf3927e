#pragma once

// Chance-node consolidation (single uniform 2^t-ary chance root) and chance
// elimination via one absentminded infoset I_c.

#include <string>
#include <vector>

#include "recall/bridge.hpp"
#include "recall/game.hpp"
#include "recall/poly.hpp"

namespace recall {

struct needs_consolidation_error : std::runtime_error {
  needs_consolidation_error() : std::runtime_error("NEEDS_CONSOLIDATION") {}
};
struct nonpositive_eps_error : std::runtime_error {
  nonpositive_eps_error() : std::runtime_error("NONPOSITIVE_EPS") {}
};

struct ConsolidatedGame {
  Game game;
  int t = 0;       // root randomizes uniformly over 2^t edges
  int r = 0;       // |supp| of the extracted polynomials
  Rat scale = 1;   // surviving terminal payoffs were multiplied by 2^t / r
};

// Rebuilds the game with a single uniform chance root over 2^t edges
// (t = ceil(log2 |supp|)); strategy sets and utility polynomials unchanged.
inline ConsolidatedGame consolidate_chance(const Game& g) {
  std::vector<Polynomial> polys = extract_utility_polynomials(g);
  ProfileLayout layout = g.layout();

  // poly_to_game gives a uniform root over r = |supp| subtrees with payoffs
  // r * lambda_D; pad to 2^t edges and rescale to 2^t * lambda_D.
  std::set<ExpVec> supp;
  for (const Polynomial& p : polys)
    for (const auto& [e, c] : p.terms()) supp.insert(e);
  int r = static_cast<int>(supp.size());
  int t = 0;
  while ((1 << t) < std::max(1, r)) ++t;
  int edges = 1 << t;

  Game core = poly_to_game(polys, layout);

  ConsolidatedGame out;
  out.t = t;
  out.r = std::max(1, r);
  out.scale = Rat(edges, std::max(1, r));
  out.scale.canonicalize();

  if (r == 0) {
    // Zero utility: single root edge to a zero terminal.
    GameBuilder b(g.num_players);
    for (int i = 0; i < layout.num_players(); ++i)
      for (int j = 0; j < layout.num_infosets(i); ++j) {
        std::vector<std::string> actions;
        for (int k = 0; k < layout.block_sizes[i][j]; ++k)
          actions.push_back("a" + std::to_string(k + 1));
        b.add_infoset(i, "I" + std::to_string(j + 1), actions);
      }
    int root = b.add_chance(-1, {{"m1", Rat(1)}});
    b.add_terminal(root, std::vector<Rat>(g.num_players, Rat(0)));
    out.game = b.build();
    out.t = 0;
    out.r = 1;
    out.scale = 1;
    return out;
  }

  // Rebuild from `core` (root chance over r edges, payoffs r * lambda):
  // change root weights to 1/2^t, multiply every payoff by 2^t / r, append
  // 2^t - r zero-terminal edges.
  Game game = core;
  Rat rescale(edges, r);
  for (Rat& w : game.nodes[0].chance_weights) w = Rat(1, edges);
  for (Node& nd : game.nodes)
    if (nd.kind == NodeKind::Terminal)
      for (Rat& u : nd.payoffs) u *= rescale;
  for (int pad = r; pad < edges; ++pad) {
    int id = static_cast<int>(game.nodes.size());
    Node z;
    z.kind = NodeKind::Terminal;
    z.parent = 0;
    z.action_in_parent = static_cast<int>(game.nodes[0].children.size());
    z.payoffs.assign(g.num_players, Rat(0));
    game.nodes.push_back(std::move(z));
    game.nodes[0].children.push_back(id);
    game.nodes[0].chance_labels.push_back("m" + std::to_string(pad + 1));
    game.nodes[0].chance_weights.push_back(Rat(1, edges));
  }
  out.game = std::move(game);
  return out;
}

struct ChanceRemoval {
  Game game;       // chance-free; P1 owns the new absentminded infoset I_c
  int t = 0;       // I_c has degree of absentmindedness 2t
  Rat shift = 0;   // payoffs (except gadget terminals) were shifted by this
  int ic_infoset = -1;  // global infoset id of I_c in the output game
};

// Chance-removal gadget: replaces the single uniform 2^t-ary chance root by an
// absentminded 2-action infoset I_c. V^(i)(mu, l) =
// -l^2 - (1-l)^2 + 2^t (l(1-l))^t U^(i)(mu), maximized at l = 1/2.
inline ChanceRemoval remove_chance(const Game& input_game) {
  // Precondition: consolidated form (unique chance node = uniform root).
  const Game* gp = &input_game;
  Game duplicated;
  int chance_count = 0;
  for (const Node& nd : input_game.nodes)
    if (nd.kind == NodeKind::Chance) ++chance_count;
  if (chance_count != 1 || input_game.nodes[0].kind != NodeKind::Chance)
    throw needs_consolidation_error();
  std::size_t edges = input_game.nodes[0].children.size();
  for (const Rat& w : input_game.nodes[0].chance_weights)
    if (w != Rat(1, (long)edges)) throw needs_consolidation_error();
  int t = 0;
  while ((1u << t) < edges) ++t;
  if ((1u << t) != edges) throw needs_consolidation_error();

  ChanceRemoval out;

  // The gadget needs t >= 1; duplicate the lone subtree for a 2-ary root
  // (both copies share infosets, so U is unchanged: U = p/2 + p/2).
  if (t == 0) {
    duplicated = input_game;
    Node& root = duplicated.nodes[0];
    root.chance_weights = {Rat(1, 2), Rat(1, 2)};
    root.chance_labels = {"m1", "m2"};
    // Deep-copy the subtree under the single edge.
    std::function<int(int, int)> copy_subtree = [&](int src, int parent) {
      int id = static_cast<int>(duplicated.nodes.size());
      Node nd = duplicated.nodes[src];
      nd.parent = parent;
      nd.action_in_parent = static_cast<int>(duplicated.nodes[parent].children.size());
      std::vector<int> kids = nd.children;
      nd.children.clear();
      duplicated.nodes.push_back(std::move(nd));
      duplicated.nodes[parent].children.push_back(id);
      if (duplicated.nodes[id].kind == NodeKind::Decision)
        duplicated.infosets[duplicated.nodes[id].infoset].nodes.push_back(id);
      for (int c : kids) copy_subtree(c, id);
      return id;
    };
    int child = duplicated.nodes[0].children[0];
    copy_subtree(child, 0);
    // copy_subtree appended the copy as a child of the root already.
    gp = &duplicated;
    t = 1;
    edges = 2;
  }
  const Game& g = *gp;
  out.t = t;

  // Shift all payoffs to >= 1.
  Rat min_payoff;
  bool first = true;
  for (const Node& nd : g.nodes)
    if (nd.kind == NodeKind::Terminal)
      for (const Rat& u : nd.payoffs) {
        if (first || u < min_payoff) min_payoff = u;
        first = false;
      }
  Rat shift = (!first && min_payoff < 1) ? Rat(1 - min_payoff) : Rat(0);
  out.shift = shift;

  // Build the output: same players and infosets (document order), then I_c
  // appended as a new infoset of player 1, then the gadget tree with the
  // original chance subtrees attached at the 2^t slots.
  GameBuilder b(g.num_players);
  std::vector<int> infoset_map(g.infosets.size());
  for (int i = 0; i < g.num_players; ++i)
    for (int j : g.player_infosets[i])
      infoset_map[j] = b.add_infoset(i, g.infosets[j].label, g.infosets[j].actions);
  int ic = b.add_infoset(0, "I_c", {"l", "r"});
  out.ic_infoset = ic;

  std::vector<Rat> minus_one(g.num_players, Rat(-1));
  std::vector<Rat> zero(g.num_players, Rat(0));

  std::function<void(int, int)> attach = [&](int src, int parent) {
    const Node& nd = g.nodes[src];
    switch (nd.kind) {
      case NodeKind::Terminal: {
        std::vector<Rat> pays = nd.payoffs;
        for (Rat& u : pays) u += shift;
        b.add_terminal(parent, pays);
        break;
      }
      case NodeKind::Decision: {
        int id = b.add_decision(parent, infoset_map[nd.infoset]);
        for (int c : nd.children) attach(c, id);
        break;
      }
      case NodeKind::Chance:
        throw needs_consolidation_error();
    }
  };

  // Gadget levels. Frontier holds I_c nodes at the current even depth whose
  // two-level expansion is pending; at depth 2t the expansion slots take the
  // chance subtrees instead.
  int h0 = b.add_decision(-1, ic);
  struct Slot { int parent; };
  std::vector<int> frontier;  // even-depth I_c nodes
  // Depth 0 -> 2: children h1 (l), h2 (r); terminals at h1 l and h2 r.
  int next_subtree = 0;
  auto expand = [&](int h, bool last_level) {
    // h's children: hl, hr in I_c; grandchildren per the gadget pattern.
    std::vector<int> produced;
    int hl = b.add_decision(h, ic);
    int hr = b.add_decision(h, ic);
    bool root_level = (h == h0);
    // Pattern at the root pair: h1 l and h2 r are the -1 terminals.
    // Deeper pairs: h l l and h r r are 0 terminals.
    const std::vector<Rat>& off_payoff = root_level ? minus_one : zero;
    // hl children: [off-terminal at action l, continuation at action r]
    if (root_level) {
      b.add_terminal(hl, off_payoff);  // h1 l
      if (last_level)
        attach(g.nodes[0].children[next_subtree++], hl);
      else
        produced.push_back(b.add_decision(hl, ic));
      if (last_level)
        attach(g.nodes[0].children[next_subtree++], hr);
      else
        produced.push_back(b.add_decision(hr, ic));
      b.add_terminal(hr, off_payoff);  // h2 r
    } else {
      b.add_terminal(hl, off_payoff);  // h l l
      if (last_level)
        attach(g.nodes[0].children[next_subtree++], hl);
      else
        produced.push_back(b.add_decision(hl, ic));
      if (last_level)
        attach(g.nodes[0].children[next_subtree++], hr);
      else
        produced.push_back(b.add_decision(hr, ic));
      b.add_terminal(hr, off_payoff);  // h r r
    }
    return produced;
  };
  frontier.push_back(h0);
  for (int level = 1; level <= t; ++level) {
    bool last = (level == t);
    std::vector<int> next;
    for (int h : frontier) {
      std::vector<int> produced = expand(h, last);
      next.insert(next.end(), produced.begin(), produced.end());
    }
    frontier = std::move(next);
  }

  out.game = b.build();
  return out;
}

struct PrecisionMap {
  Rat delta_nash;               // min{1/4, eps / 2^t} (proof value)
  Rat delta_nash_conservative;  // min{1/4, eps / (2^t + t L_inf)} (statement)
  Rat delta_edt;                // = delta_nash
  Rat delta_cdt;                // (min{1, eps/(2^t + t L_inf)} / (3 L_inf |H|))^2
};

inline PrecisionMap precision_map(const Rat& eps, int t, const Rat& Linf,
                                  long num_nodes) {
  if (eps <= 0) throw nonpositive_eps_error();
  PrecisionMap pm;
  Rat pow2t(1);
  for (int i = 0; i < t; ++i) pow2t *= 2;
  pm.delta_nash = std::min(Rat(1, 4), Rat(eps / pow2t));
  pm.delta_nash_conservative =
      std::min(Rat(1, 4), Rat(eps / (pow2t + t * Linf)));
  pm.delta_edt = pm.delta_nash;
  Rat inner = std::min(Rat(1), Rat(eps / (pow2t + t * Linf)));
  Rat base = inner / (Rat(3) * Linf * num_nodes);
  pm.delta_cdt = base * base;
  return pm;
}

}  // namespace recall
