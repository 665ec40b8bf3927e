#pragma once

// Immutable extensive-form games with imperfect recall: rooted tree of
// decision/chance/terminal nodes, per-player infoset partition, exact
// rational payoffs and chance weights.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "recall/rational.hpp"
#include "recall/strategy.hpp"

namespace recall {

enum class NodeKind { Decision, Chance, Terminal };

struct Node {
  NodeKind kind = NodeKind::Terminal;
  int parent = -1;
  int action_in_parent = -1;         // index of the edge parent -> this
  int infoset = -1;                  // global infoset id (Decision only)
  std::vector<int> children;         // Decision: one per action; Chance: per outcome
  std::vector<std::string> chance_labels;  // Chance only
  std::vector<Rat> chance_weights;         // Chance only
  std::vector<Rat> payoffs;                // Terminal only, one per player
};

struct Infoset {
  int player = -1;
  int index_in_player = -1;  // j in the (i, j, k) indexing
  std::string label;
  std::vector<std::string> actions;
  std::vector<int> nodes;  // member decision nodes, document order
};

struct Game {
  int num_players = 0;
  std::vector<Node> nodes;  // nodes[0] is the root; document (preorder) order
  std::vector<Infoset> infosets;
  std::vector<std::vector<int>> player_infosets;  // player -> global infoset ids

  int root() const { return 0; }
  int num_nodes() const { return static_cast<int>(nodes.size()); }

  ProfileLayout layout() const {
    std::vector<std::vector<int>> sizes(num_players);
    for (int i = 0; i < num_players; ++i)
      for (int g : player_infosets[i])
        sizes[i].push_back(static_cast<int>(infosets[g].actions.size()));
    return ProfileLayout(std::move(sizes));
  }

  // Flat layout variable of (node's infoset, action k).
  int flat_var(const ProfileLayout& layout, int global_infoset, int k) const {
    const Infoset& is = infosets[global_infoset];
    return layout.flat(is.player, is.index_in_player, k);
  }
};

struct invalid_game_error : std::runtime_error {
  explicit invalid_game_error(const std::string& m) : std::runtime_error(m) {}
};

// Incremental construction helper. Infosets are registered up front (so games
// built from a polynomial layout may carry infosets with no member nodes);
// nodes are appended in document order.
class GameBuilder {
 public:
  explicit GameBuilder(int num_players) { game_.num_players = num_players; }

  int add_infoset(int player, std::string label, std::vector<std::string> actions) {
    Infoset is;
    is.player = player;
    is.label = std::move(label);
    is.actions = std::move(actions);
    if ((int)game_.player_infosets.size() < game_.num_players)
      game_.player_infosets.resize(game_.num_players);
    is.index_in_player = static_cast<int>(game_.player_infosets[player].size());
    int id = static_cast<int>(game_.infosets.size());
    game_.player_infosets[player].push_back(id);
    game_.infosets.push_back(std::move(is));
    return id;
  }

  int add_decision(int parent, int global_infoset) {
    int id = new_node(parent);
    game_.nodes[id].kind = NodeKind::Decision;
    game_.nodes[id].infoset = global_infoset;
    game_.infosets[global_infoset].nodes.push_back(id);
    return id;
  }

  int add_chance(int parent, std::vector<std::pair<std::string, Rat>> dist) {
    int id = new_node(parent);
    game_.nodes[id].kind = NodeKind::Chance;
    for (auto& [label, w] : dist) {
      game_.nodes[id].chance_labels.push_back(label);
      game_.nodes[id].chance_weights.push_back(w);
    }
    return id;
  }

  int add_terminal(int parent, std::vector<Rat> payoffs) {
    int id = new_node(parent);
    game_.nodes[id].kind = NodeKind::Terminal;
    game_.nodes[id].payoffs = std::move(payoffs);
    return id;
  }

  const std::vector<std::string>& infoset_actions(int global_infoset) const {
    return game_.infosets[global_infoset].actions;
  }

  Game build() {
    if ((int)game_.player_infosets.size() < game_.num_players)
      game_.player_infosets.resize(game_.num_players);
    return std::move(game_);
  }

 private:
  int new_node(int parent) {
    int id = static_cast<int>(game_.nodes.size());
    game_.nodes.emplace_back();
    game_.nodes[id].parent = parent;
    if (parent >= 0) {
      game_.nodes[id].action_in_parent =
          static_cast<int>(game_.nodes[parent].children.size());
      game_.nodes[parent].children.push_back(id);
    }
    return id;
  }

  Game game_;
};

enum class ValidationCode {
  ACTION_SET_MISMATCH,
  CHANCE_NOT_NORMALIZED,
  ORPHAN_NODE,
  CROSS_PLAYER_INFOSET,
  BAD_PAYOFF_ARITY,
};

struct ValidationError {
  ValidationCode code;
  std::string message;
};

inline const char* validation_code_name(ValidationCode c) {
  switch (c) {
    case ValidationCode::ACTION_SET_MISMATCH: return "ACTION_SET_MISMATCH";
    case ValidationCode::CHANCE_NOT_NORMALIZED: return "CHANCE_NOT_NORMALIZED";
    case ValidationCode::ORPHAN_NODE: return "ORPHAN_NODE";
    case ValidationCode::CROSS_PLAYER_INFOSET: return "CROSS_PLAYER_INFOSET";
    case ValidationCode::BAD_PAYOFF_ARITY: return "BAD_PAYOFF_ARITY";
  }
  return "?";
}

inline std::vector<ValidationError> validate(const Game& g) {
  std::vector<ValidationError> errs;
  auto err = [&](ValidationCode c, std::string m) {
    errs.push_back({c, std::move(m)});
  };
  if (g.nodes.empty()) {
    err(ValidationCode::ORPHAN_NODE, "game has no nodes");
    return errs;
  }
  // Reachability from the root and parent consistency.
  std::vector<bool> reached(g.nodes.size(), false);
  std::vector<int> stack = {g.root()};
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    if (reached[n]) continue;
    reached[n] = true;
    for (int c : g.nodes[n].children) {
      if (g.nodes[c].parent != n)
        err(ValidationCode::ORPHAN_NODE,
            "node " + std::to_string(c) + " parent pointer mismatch");
      stack.push_back(c);
    }
  }
  for (int n = 0; n < g.num_nodes(); ++n)
    if (!reached[n])
      err(ValidationCode::ORPHAN_NODE,
          "node " + std::to_string(n) + " unreachable from root");
  for (int n = 0; n < g.num_nodes(); ++n) {
    const Node& nd = g.nodes[n];
    switch (nd.kind) {
      case NodeKind::Terminal:
        if (!nd.children.empty())
          err(ValidationCode::ORPHAN_NODE,
              "terminal node " + std::to_string(n) + " has children");
        if ((int)nd.payoffs.size() != g.num_players)
          err(ValidationCode::BAD_PAYOFF_ARITY,
              "terminal node " + std::to_string(n) + " payoff arity");
        break;
      case NodeKind::Chance: {
        Rat sum(0);
        for (const Rat& w : nd.chance_weights) {
          if (w < 0)
            err(ValidationCode::CHANCE_NOT_NORMALIZED,
                "negative chance weight at node " + std::to_string(n));
          sum += w;
        }
        if (sum != 1)
          err(ValidationCode::CHANCE_NOT_NORMALIZED,
              "chance weights at node " + std::to_string(n) + " sum to " +
                  rat_to_string(sum));
        if (nd.children.size() != nd.chance_weights.size())
          err(ValidationCode::ORPHAN_NODE,
              "chance node " + std::to_string(n) + " children/weights mismatch");
        break;
      }
      case NodeKind::Decision: {
        if (nd.infoset < 0 || nd.infoset >= (int)g.infosets.size()) {
          err(ValidationCode::CROSS_PLAYER_INFOSET,
              "decision node " + std::to_string(n) + " has no infoset");
          break;
        }
        const Infoset& is = g.infosets[nd.infoset];
        if (nd.children.size() != is.actions.size())
          err(ValidationCode::ACTION_SET_MISMATCH,
              "node " + std::to_string(n) + " has " +
                  std::to_string(nd.children.size()) + " children, infoset " +
                  is.label + " has " + std::to_string(is.actions.size()) +
                  " actions");
        break;
      }
    }
  }
  for (const Infoset& is : g.infosets) {
    if (is.player < 0 || is.player >= g.num_players)
      err(ValidationCode::CROSS_PLAYER_INFOSET,
          "infoset " + is.label + " assigned to player " +
              std::to_string(is.player));
    for (int n : is.nodes)
      if (g.nodes[n].infoset != (&is - g.infosets.data()))
        err(ValidationCode::CROSS_PLAYER_INFOSET,
            "infoset " + is.label + " membership mismatch at node " +
                std::to_string(n));
  }
  return errs;
}

inline Game validated(Game g) {
  auto errs = validate(g);
  if (!errs.empty()) throw invalid_game_error(errs.front().message);
  return g;
}

// --- Reach probabilities and utilities ------------------------------------

// Probability of the edge into `node` under `profile` (1 for the root).
template <class T>
T edge_probability(const Game& g, const ProfileLayout& layout,
                   const BasicProfile<T>& mu, int node) {
  int par = g.nodes[node].parent;
  if (par < 0) return T(1);
  const Node& pn = g.nodes[par];
  int k = g.nodes[node].action_in_parent;
  if (pn.kind == NodeKind::Chance) return scalar_cast<T>(pn.chance_weights[k]);
  return mu.x[g.flat_var(layout, pn.infoset, k)];
}

template <class T>
T reach_probability(const Game& g, int target, const BasicProfile<T>& mu,
                    int from = 0) {
  if (mu.layout != g.layout()) throw layout_mismatch_error();
  // Walk up from target; fail with 0 if `from` is not an ancestor.
  T prod(1);
  int n = target;
  while (n != from) {
    if (n < 0) return T(0);
    prod *= edge_probability(g, mu.layout, mu, n);
    n = g.nodes[n].parent;
  }
  return prod;
}

template <class T>
T expected_utility_from(const Game& g, int player, const ProfileLayout& layout,
                        const BasicProfile<T>& mu, int node) {
  const Node& nd = g.nodes[node];
  switch (nd.kind) {
    case NodeKind::Terminal:
      return scalar_cast<T>(nd.payoffs[player]);
    case NodeKind::Chance: {
      T sum(0);
      for (std::size_t k = 0; k < nd.children.size(); ++k)
        sum += scalar_cast<T>(nd.chance_weights[k]) *
               expected_utility_from(g, player, layout, mu, nd.children[k]);
      return sum;
    }
    case NodeKind::Decision: {
      T sum(0);
      for (std::size_t k = 0; k < nd.children.size(); ++k)
        sum += mu.x[g.flat_var(layout, nd.infoset, (int)k)] *
               expected_utility_from(g, player, layout, mu, nd.children[k]);
      return sum;
    }
  }
  return T(0);
}

template <class T>
T expected_utility(const Game& g, int player, const BasicProfile<T>& mu,
                   int from = 0) {
  if (mu.layout != g.layout()) throw layout_mismatch_error();
  return expected_utility_from(g, player, mu.layout, mu, from);
}

// --- Structural analysis ---------------------------------------------------

struct AbsentmindednessReport {
  std::vector<int> per_infoset;  // indexed by global infoset id
  int global = 0;
};

inline void absent_walk(const Game& g, int node, std::vector<int>& counts,
                        AbsentmindednessReport& rep) {
  const Node& nd = g.nodes[node];
  if (nd.kind == NodeKind::Decision) {
    int& c = counts[nd.infoset];
    ++c;
    rep.per_infoset[nd.infoset] = std::max(rep.per_infoset[nd.infoset], c);
  }
  for (int c : nd.children) absent_walk(g, c, counts, rep);
  if (nd.kind == NodeKind::Decision) --counts[nd.infoset];
}

inline AbsentmindednessReport degree_of_absentmindedness(const Game& g) {
  AbsentmindednessReport rep;
  rep.per_infoset.assign(g.infosets.size(), 0);
  std::vector<int> counts(g.infosets.size(), 0);
  if (!g.nodes.empty()) absent_walk(g, g.root(), counts, rep);
  for (int d : rep.per_infoset) rep.global = std::max(rep.global, d);
  return rep;
}

// Alternating (infoset id, action) pairs experienced by `player` strictly
// above `node`.
using ExperiencedSequence = std::vector<std::pair<int, int>>;

inline ExperiencedSequence experienced_sequence(const Game& g, int player,
                                                int node) {
  ExperiencedSequence seq;
  int n = node;
  while (g.nodes[n].parent >= 0) {
    int par = g.nodes[n].parent;
    const Node& pn = g.nodes[par];
    if (pn.kind == NodeKind::Decision && g.infosets[pn.infoset].player == player)
      seq.emplace_back(pn.infoset, g.nodes[n].action_in_parent);
    n = par;
  }
  std::reverse(seq.begin(), seq.end());
  return seq;
}

struct RecallWitness {
  bool perfect = true;
  int infoset = -1;  // violating infoset (global id) when !perfect
  int node_a = -1, node_b = -1;
};

inline RecallWitness has_perfect_recall(const Game& g) {
  for (std::size_t gi = 0; gi < g.infosets.size(); ++gi) {
    const Infoset& is = g.infosets[gi];
    if (is.nodes.empty()) continue;
    ExperiencedSequence ref = experienced_sequence(g, is.player, is.nodes[0]);
    for (std::size_t k = 1; k < is.nodes.size(); ++k) {
      if (experienced_sequence(g, is.player, is.nodes[k]) != ref) {
        RecallWitness w;
        w.perfect = false;
        w.infoset = static_cast<int>(gi);
        w.node_a = is.nodes[0];
        w.node_b = is.nodes[k];
        return w;
      }
    }
  }
  return RecallWitness{};
}

inline std::vector<int> terminal_nodes(const Game& g) {
  std::vector<int> zs;
  for (int n = 0; n < g.num_nodes(); ++n)
    if (g.nodes[n].kind == NodeKind::Terminal) zs.push_back(n);
  return zs;
}

inline Rat max_abs_payoff(const Game& g) {
  Rat m(0);
  for (const Node& nd : g.nodes)
    if (nd.kind == NodeKind::Terminal)
      for (const Rat& u : nd.payoffs) m = std::max(m, rat_abs(u));
  return m;
}

}  // namespace recall
