#pragma once

// Catalog of the worked example games used as test fixtures, with
// machine-readable known facts.

#include <optional>
#include <string>
#include <vector>

#include "recall/game.hpp"

namespace recall {

struct KnownFact {
  std::string concept_name;  // e.g. "maxmin", "edt-value", "degree"
  std::string note;
  Rat value = Rat(0);
  Rat tolerance = Rat(0);
};

struct CatalogEntry {
  std::string name;
  Game game;
  std::vector<KnownFact> facts;
};

// Two-player zero-sum penalty shoot-out where the kicker forgets her first
// choice: P1 picks a side twice (I1 then I2, different infosets), the keeper
// picks once; all four keeper nodes share one infoset. Matching coordinated
// kick vs. wrong keeper side pays 3, everything else -1.
inline Game forgetful_shootout() {
  GameBuilder b(2);
  int i1 = b.add_infoset(0, "I1", {"L", "R"});
  int i2 = b.add_infoset(0, "I2", {"L", "R"});
  int ik = b.add_infoset(1, "I", {"L", "R"});
  int root = b.add_decision(-1, i1);
  // payoff[first][second][keeper] for player 1 (P2 gets the negation)
  const int pay[2][2][2] = {{{-1, 3}, {-1, -1}}, {{-1, -1}, {3, -1}}};
  for (int a = 0; a < 2; ++a) {
    int mid = b.add_decision(root, i2);
    for (int c = 0; c < 2; ++c) {
      int keeper = b.add_decision(mid, ik);
      for (int d = 0; d < 2; ++d)
        b.add_terminal(keeper, {Rat(pay[a][c][d]), Rat(-pay[a][c][d])});
    }
  }
  return b.build();
}

// Three chained decision nodes in a single absentminded infoset: exit pays
// 0 / 0 / 6 at the successive exits, continuing past the last pays 0.
// U(mu) = 6 c^2 e.
inline Game absentminded_driver() {
  GameBuilder b(1);
  int is = b.add_infoset(0, "I", {"e", "c"});
  int n0 = b.add_decision(-1, is);
  b.add_terminal(n0, {Rat(0)});
  int n1 = b.add_decision(n0, is);
  b.add_terminal(n1, {Rat(0)});
  int n2 = b.add_decision(n1, is);
  b.add_terminal(n2, {Rat(6)});
  b.add_terminal(n2, {Rat(0)});
  return b.build();
}

// Single-player coordination-with-yourself: I1 at the root, both second-level
// nodes share I2; payoffs (l1,l2) -> 1, (r1,r2) -> lambda, miscoordination 0.
inline Game coordination_game(const Rat& lambda = Rat(2)) {
  GameBuilder b(1);
  int i1 = b.add_infoset(0, "I1", {"l1", "r1"});
  int i2 = b.add_infoset(0, "I2", {"l2", "r2"});
  int root = b.add_decision(-1, i1);
  int left = b.add_decision(root, i2);
  int right = b.add_decision(root, i2);
  b.add_terminal(left, {Rat(1)});
  b.add_terminal(left, {Rat(0)});
  b.add_terminal(right, {Rat(0)});
  b.add_terminal(right, {lambda});
  return b.build();
}

// Shoot-out shape, but both of P1's levels share one absentminded infoset;
// the (L, L, keeper-L) payoff is the parameter lambda.
inline Game absentminded_kicker(const Rat& lambda) {
  GameBuilder b(2);
  int is = b.add_infoset(0, "I", {"L", "R"});
  int ik = b.add_infoset(1, "I", {"L", "R"});
  int root = b.add_decision(-1, is);
  const Rat pay[2][2][2] = {{{lambda, Rat(3)}, {Rat(-1), Rat(-1)}},
                            {{Rat(-1), Rat(-1)}, {Rat(3), Rat(-1)}}};
  for (int a = 0; a < 2; ++a) {
    int mid = b.add_decision(root, is);
    for (int c = 0; c < 2; ++c) {
      int keeper = b.add_decision(mid, ik);
      for (int d = 0; d < 2; ++d)
        b.add_terminal(keeper, {pay[a][c][d], Rat(-pay[a][c][d])});
    }
  }
  return b.build();
}

// n chained nodes in one absentminded infoset; exiting anywhere pays 1,
// continuing past the last node pays 0. U_CDT(exit | always-continue) = n.
inline Game dont_go_straight(int n) {
  GameBuilder b(1);
  int is = b.add_infoset(0, "I", {"e", "c"});
  int cur = -1;
  for (int step = 0; step < n; ++step) {
    cur = b.add_decision(cur, is);
    b.add_terminal(cur, {Rat(1)});
    if (step + 1 == n) b.add_terminal(cur, {Rat(0)});
  }
  return b.build();
}

inline std::vector<CatalogEntry> catalog() {
  std::vector<CatalogEntry> out;
  out.push_back(
      {"forgetful_shootout",
       forgetful_shootout(),
       {{"maxmin", "zero-sum lower value of the shoot-out game", Rat(0), Rat(1, 50)},
        {"minmax", "zero-sum upper value", Rat(1), Rat(1, 50)},
        {"duality_gap", "no Nash equilibrium; gap 1", Rat(1), Rat(1, 25)},
        {"degree", "no absentmindedness", Rat(1), Rat(0)},
        {"node_count", "Fig. 1a", Rat(15), Rat(0)}}});
  out.push_back({"absentminded_driver",
                 absentminded_driver(),
                 {{"edt-value", "optimum of 6 c^2 e at c = 2/3", Rat(8, 9), Rat(1, 1000)},
                  {"edt-arg-c", "optimizer c", Rat(2, 3), Rat(1, 1000)},
                  {"degree", "three visits to I", Rat(3), Rat(0)},
                  {"node_count", "", Rat(7), Rat(0)}}});
  out.push_back({"coordination_game",
                 coordination_game(),
                 {{"edt-value-low", "(l1, l2) equilibrium value", Rat(1), Rat(0)},
                  {"edt-value-high", "(r1, r2) equilibrium value", Rat(2), Rat(0)},
                  {"degree", "", Rat(1), Rat(0)}}});
  out.push_back({"absentminded_kicker",
                 absentminded_kicker(Rat(3)),
                 {{"edt-threshold-lambda", "EDT equilibrium iff lambda >= 3",
                   Rat(3), Rat(0)},
                  {"degree", "both P1 levels in one infoset", Rat(2), Rat(0)}}});
  out.push_back({"dont_go_straight",
                 dont_go_straight(5),
                 {{"cdt-exit-utility", "U_CDT(exit | always-continue) = n", Rat(5),
                   Rat(0)}}});
  return out;
}

}  // namespace recall
