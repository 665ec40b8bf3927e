#pragma once

// JSON (de)serialization for games, profiles, polynomials and reports.
// Rationals travel as strings so round trips stay exact.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "recall/game.hpp"
#include "recall/nash.hpp"
#include "recall/poly.hpp"
#include "recall/report.hpp"
#include "recall/strategy.hpp"

namespace recall {

using Json = nlohmann::ordered_json;

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- games ----

namespace detail {

inline void node_to_json(const Game& g, int node, Json& out) {
  const Node& nd = g.nodes[node];
  switch (nd.kind) {
    case NodeKind::Terminal: {
      Json pay = Json::array();
      for (const Rat& p : nd.payoffs) pay.push_back(rat_to_string(p));
      out["terminal"] = Json{{"payoffs", pay}};
      break;
    }
    case NodeKind::Chance: {
      Json dist = Json::array();
      Json children = Json::object();
      for (std::size_t k = 0; k < nd.children.size(); ++k) {
        dist.push_back(Json::array(
            {nd.chance_labels[k], rat_to_string(nd.chance_weights[k])}));
        Json child;
        node_to_json(g, nd.children[k], child);
        children[nd.chance_labels[k]] = std::move(child);
      }
      out["chance"] = Json{{"dist", dist}, {"children", children}};
      break;
    }
    case NodeKind::Decision: {
      const Infoset& is = g.infosets[nd.infoset];
      Json actions = Json::array();
      Json children = Json::object();
      for (std::size_t k = 0; k < is.actions.size(); ++k) {
        actions.push_back(is.actions[k]);
        Json child;
        node_to_json(g, nd.children[k], child);
        children[is.actions[k]] = std::move(child);
      }
      out["decision"] = Json{{"player", is.player},
                             {"infoset", is.label},
                             {"actions", actions},
                             {"children", children}};
      break;
    }
  }
}

inline int node_from_json(const Json& j, GameBuilder& b, int parent,
                          std::map<std::pair<int, std::string>, int>& infosets,
                          int num_players) {
  if (!j.is_object() || j.size() != 1)
    throw io_error("node must be an object with exactly one variant key");
  if (j.contains("terminal")) {
    const Json& t = j.at("terminal");
    std::vector<Rat> payoffs;
    for (const Json& p : t.at("payoffs"))
      payoffs.push_back(rat_from_string(p.get<std::string>()));
    if (static_cast<int>(payoffs.size()) != num_players)
      throw io_error("terminal payoff arity does not match player count");
    return b.add_terminal(parent, payoffs);
  }
  if (j.contains("chance")) {
    const Json& c = j.at("chance");
    std::vector<std::pair<std::string, Rat>> dist;
    for (const Json& entry : c.at("dist"))
      dist.emplace_back(entry.at(0).get<std::string>(),
                        rat_from_string(entry.at(1).get<std::string>()));
    std::vector<std::string> labels;
    for (const auto& [label, w] : dist) labels.push_back(label);
    int node = b.add_chance(parent, dist);
    const Json& children = c.at("children");
    for (const std::string& label : labels) {
      if (!children.contains(label))
        throw io_error("chance child missing for outcome '" + label + "'");
      node_from_json(children.at(label), b, node, infosets, num_players);
    }
    return node;
  }
  if (j.contains("decision")) {
    const Json& d = j.at("decision");
    int player = d.at("player").get<int>();
    if (player < 0 || player >= num_players)
      throw io_error("decision player index out of range");
    std::string label = d.at("infoset").get<std::string>();
    std::vector<std::string> actions;
    for (const Json& a : d.at("actions")) actions.push_back(a.get<std::string>());
    auto key = std::make_pair(player, label);
    auto it = infosets.find(key);
    int is;
    if (it == infosets.end()) {
      is = b.add_infoset(player, label, actions);
      infosets.emplace(key, is);
    } else {
      is = it->second;
      if (b.infoset_actions(is) != actions)
        throw io_error("infoset '" + label + "' redeclared with different actions");
    }
    int node = b.add_decision(parent, is);
    const Json& children = d.at("children");
    for (const std::string& a : actions) {
      if (!children.contains(a))
        throw io_error("decision child missing for action '" + a + "'");
      node_from_json(children.at(a), b, node, infosets, num_players);
    }
    return node;
  }
  throw io_error("unknown node variant");
}

}  // namespace detail

inline Json game_to_json(const Game& g) {
  Json out;
  out["players"] = g.num_players;
  Json root;
  detail::node_to_json(g, 0, root);
  out["root"] = std::move(root);
  return out;
}

inline Game game_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("players") || !j.contains("root"))
    throw io_error("game document needs 'players' and 'root'");
  int players = j.at("players").get<int>();
  if (players < 1) throw io_error("player count must be positive");
  GameBuilder b(players);
  std::map<std::pair<int, std::string>, int> infosets;
  detail::node_from_json(j.at("root"), b, -1, infosets, players);
  return b.build();
}

// FNV-1a over the canonical serialization; used as a provenance stamp.
inline std::string game_hash(const Game& g) {
  std::string s = game_to_json(g).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

// ------------------------------------------------------------- profiles ----

template <class T>
inline Json profile_to_json(const Game& g, const BasicProfile<T>& mu) {
  Json blocks = Json::array();
  for (const Infoset& is : g.infosets) {
    Json probs = Json::object();
    for (std::size_t k = 0; k < is.actions.size(); ++k) {
      T v = mu.at(is.player, is.index_in_player, static_cast<int>(k));
      if constexpr (std::is_same_v<T, Rat>)
        probs[is.actions[k]] = rat_to_string(v);
      else
        probs[is.actions[k]] = rat_to_string(Rat(v));
    }
    blocks.push_back(Json{
        {"player", is.player}, {"infoset", is.label}, {"probs", probs}});
  }
  return Json{{"profile", blocks}};
}

template <class T>
inline BasicProfile<T> profile_from_json(const Game& g, const Json& j) {
  ProfileLayout layout = g.layout();
  BasicProfile<T> mu(layout, std::vector<T>(layout.total_vars, T(0)));
  std::vector<bool> seen(g.infosets.size(), false);
  if (!j.contains("profile")) throw io_error("profile document needs 'profile'");
  for (const Json& block : j.at("profile")) {
    int player = block.at("player").get<int>();
    std::string label = block.at("infoset").get<std::string>();
    int found = -1;
    for (std::size_t i = 0; i < g.infosets.size(); ++i)
      if (g.infosets[i].player == player && g.infosets[i].label == label)
        found = static_cast<int>(i);
    if (found < 0)
      throw io_error("profile references unknown infoset '" + label + "'");
    if (seen[found]) throw io_error("duplicate profile block for '" + label + "'");
    seen[found] = true;
    const Infoset& is = g.infosets[found];
    const Json& probs = block.at("probs");
    for (std::size_t k = 0; k < is.actions.size(); ++k) {
      if (!probs.contains(is.actions[k]))
        throw io_error("profile block for '" + label + "' missing action '" +
                       is.actions[k] + "'");
      Rat v = rat_from_string(probs.at(is.actions[k]).get<std::string>());
      mu.at(is.player, is.index_in_player, static_cast<int>(k)) =
          scalar_cast<T>(v);
    }
  }
  for (bool s : seen)
    if (!s) throw io_error("profile is missing a block for some infoset");
  return mu;
}

// ---------------------------------------------------------- polynomials ----

inline Json layout_to_json(const ProfileLayout& layout) {
  Json blocks = Json::array();
  for (const auto& player : layout.block_sizes) {
    Json row = Json::array();
    for (int d : player) row.push_back(d);
    blocks.push_back(row);
  }
  return Json{{"blocks", blocks}};
}

inline ProfileLayout layout_from_json(const Json& j) {
  std::vector<std::vector<int>> sizes;
  for (const Json& row : j.at("blocks")) {
    sizes.emplace_back();
    for (const Json& d : row) sizes.back().push_back(d.get<int>());
  }
  return ProfileLayout(sizes);
}

inline Json poly_to_json(const Polynomial& p, const ProfileLayout& layout) {
  Json terms = Json::array();
  for (const auto& [exps, coef] : p.terms()) {
    Json e = Json::object();
    for (const auto& [var, k] : exps) e[std::to_string(var)] = k;
    terms.push_back(Json{{"exps", e}, {"coef", rat_to_string(coef)}});
  }
  return Json{{"layout", layout_to_json(layout)}, {"terms", terms}};
}

struct PolyDocument {
  Polynomial poly;
  ProfileLayout layout;
};

inline PolyDocument poly_from_json(const Json& j) {
  ProfileLayout layout = layout_from_json(j.at("layout"));
  Polynomial p(layout.total_vars);
  for (const Json& term : j.at("terms")) {
    ExpVec exps;
    for (const auto& [key, val] : term.at("exps").items()) {
      int var = std::stoi(key);
      if (var < 0 || var >= layout.total_vars)
        throw io_error("exponent variable index out of range");
      exps.emplace_back(var, val.get<int>());
    }
    std::sort(exps.begin(), exps.end());
    p.add_term(exps, rat_from_string(term.at("coef").get<std::string>()));
  }
  return {std::move(p), std::move(layout)};
}

// -------------------------------------------------------------- reports ----

inline Json report_to_json(const Game& g, const EquilibriumReport& rep) {
  Json out;
  out["concept"] = rep.concept_name;
  out["eps"] = rat_to_string(rep.eps);
  out["residual"] = rep.residual;
  out["certificate"] = rep.certificate;
  out["converged"] = rep.converged;
  out["iterations"] = rep.iterations;
  out["profile"] = profile_to_json(g, rep.profile);
  Json details = Json::object();
  for (const auto& [k, v] : rep.details) details[k] = v;
  out["details"] = details;
  out["game_hash"] = game_hash(g);
  return out;
}

inline Json duality_to_json(const Game& g, const DualityReport& dr) {
  Json out;
  out["maxmin"] = dr.maxmin;
  out["minmax"] = dr.minmax;
  out["gap"] = dr.gap;
  out["error_bar"] = dr.error_bar;
  out["resolution"] = dr.resolution;
  out["game_hash"] = game_hash(g);
  return out;
}

}  // namespace recall
