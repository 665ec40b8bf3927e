#include <catch2/catch_amalgamated.hpp>

#include "recall/game.hpp"
#include "recall/instances.hpp"
#include "recall/nash.hpp"
#include "recall/strategy.hpp"
#include "test_util.hpp"

using namespace recall;

TEST_CASE("profile layout flat indexing") {
  ProfileLayout layout({{2, 3}, {2}});
  CHECK(layout.total_vars == 7);
  CHECK(layout.flat(0, 0, 0) == 0);
  CHECK(layout.flat(0, 1, 2) == 4);
  CHECK(layout.flat(1, 0, 1) == 6);
  CHECK(layout.free_dims() == 4);
}

TEST_CASE("simplex projection oracles") {
  auto p1 = project_to_simplex<double>({0.2, 0.2});
  CHECK(p1[0] == Catch::Approx(0.5));
  CHECK(p1[1] == Catch::Approx(0.5));
  auto p2 = project_to_simplex<double>({2.0, 0.0});
  CHECK(p2[0] == Catch::Approx(1.0));
  CHECK(p2[1] == Catch::Approx(0.0));
  auto p3 = project_to_simplex<double>({0.4, 0.3, 0.3});
  CHECK(p3[0] + p3[1] + p3[2] == Catch::Approx(1.0));
}

TEST_CASE("uniform profile is a distribution per block") {
  Game g = forgetful_shootout();
  Profile mu = uniform_profile<double>(g.layout());
  for (int i = 0; i < g.num_players; ++i)
    for (int j = 0; j < mu.layout.num_infosets(i); ++j) {
      double s = 0;
      for (int k = 0; k < mu.layout.block_sizes[i][j]; ++k)
        s += mu.at(i, j, k);
      CHECK(s == Catch::Approx(1.0));
    }
}

TEST_CASE("catalog games validate") {
  for (const CatalogEntry& e : catalog()) {
    INFO(e.name);
    CHECK(validate(e.game).empty());
  }
}

TEST_CASE("shootout structure") {
  Game g = forgetful_shootout();
  CHECK(g.num_nodes() == 15);
  CHECK(g.infosets.size() == 3);
  CHECK(g.infosets[2].nodes.size() == 4);  // keeper's single infoset
  CHECK_FALSE(has_perfect_recall(g).perfect);
  CHECK(degree_of_absentmindedness(g).global == 1);
  CHECK(is_zero_sum(g));
}

TEST_CASE("shootout reach and utility oracles") {
  Game g = forgetful_shootout();
  Profile mu = uniform_profile<double>(g.layout());
  // Every terminal has reach 1/2^3 under uniform play.
  for (int z : terminal_nodes(g))
    CHECK(reach_probability(g, z, mu) == Catch::Approx(0.125));
  // Payoff table: two +3 and six -1 for P1 -> E = (6 - 6)/8 = 0.
  CHECK(expected_utility(g, 0, mu) == Catch::Approx(0.0));
  CHECK(expected_utility(g, 1, mu) == Catch::Approx(0.0));
}

TEST_CASE("driver structure and oracles") {
  Game g = absentminded_driver();
  CHECK(g.num_nodes() == 7);
  CHECK(degree_of_absentmindedness(g).global == 3);
  CHECK_FALSE(has_perfect_recall(g).perfect);

  ProfileLayout layout = g.layout();
  RatProfile mu(layout, {Rat(1, 3), Rat(2, 3)});
  // U = 6 c^2 e = 6 * (4/9) * (1/3) = 8/9.
  CHECK(expected_utility(g, 0, mu) == Rat(8, 9));
  // Reach of the ccc terminal: (2/3)^3.
  CHECK(reach_probability(g, 6, mu) == Rat(8, 27));
  // Reach of the winning exit (cce): (2/3)^2 * 1/3 = 4/27.
  CHECK(reach_probability(g, 5, mu) == Rat(4, 27));
}

TEST_CASE("reach probabilities sum to 1 over terminals") {
  std::mt19937 rng(7);
  for (const CatalogEntry& e : catalog()) {
    for (int rep = 0; rep < 5; ++rep) {
      RatProfile mu = testutil::random_rat_profile(e.game.layout(), rng);
      Rat total(0);
      for (int z : terminal_nodes(e.game))
        total += reach_probability(e.game, z, mu);
      INFO(e.name);
      CHECK(total == Rat(1));
    }
  }
}

TEST_CASE("experienced sequences flag imperfect recall precisely") {
  // Perfect-recall two-stage game: second infosets split by first action.
  GameBuilder b(1);
  int i1 = b.add_infoset(0, "I1", {"a", "b"});
  int i2 = b.add_infoset(0, "I2", {"a", "b"});
  int i3 = b.add_infoset(0, "I3", {"a", "b"});
  int root = b.add_decision(-1, i1);
  for (int k = 0; k < 2; ++k) {
    int mid = b.add_decision(root, k == 0 ? i2 : i3);
    b.add_terminal(mid, {Rat(k)});
    b.add_terminal(mid, {Rat(1 - k)});
  }
  Game g = b.build();
  CHECK(has_perfect_recall(g).perfect);
  CHECK(degree_of_absentmindedness(g).global == 1);
}

TEST_CASE("validation catches malformed games") {
  GameBuilder b(2);
  int i1 = b.add_infoset(0, "I1", {"a", "b"});
  int root = b.add_decision(-1, i1);
  b.add_terminal(root, {Rat(1), Rat(-1)});
  // Missing second child for action "b" and wrong arity below.
  int t = b.add_terminal(root, {Rat(1)});
  (void)t;
  Game g = b.build();
  auto errs = validate(g);
  bool arity = false;
  for (auto& e : errs) arity |= e.code == ValidationCode::BAD_PAYOFF_ARITY;
  CHECK(arity);
}

TEST_CASE("dont_go_straight counts visits") {
  Game g = dont_go_straight(5);
  CHECK(degree_of_absentmindedness(g).global == 5);
  CHECK(g.infosets.size() == 1);
}
