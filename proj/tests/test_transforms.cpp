#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "recall/instances.hpp"
#include "recall/transforms.hpp"
#include "test_util.hpp"

using namespace recall;

// Chance root (1/2, 1/2): left branch a 2-action decision (payoffs 4, 0),
// right branch a terminal worth 2. U = 2x + 1.
static Game chancey_game() {
  GameBuilder b(1);
  int is = b.add_infoset(0, "I", {"x", "y"});
  int root = b.add_chance(-1, {{"a", Rat(1, 2)}, {"b", Rat(1, 2)}});
  int d = b.add_decision(root, is);
  b.add_terminal(d, {Rat(4)});
  b.add_terminal(d, {Rat(0)});
  b.add_terminal(root, {Rat(2)});
  return b.build();
}

TEST_CASE("consolidation preserves the utility polynomials") {
  for (Game g : {chancey_game(), absentminded_driver(), forgetful_shootout()}) {
    auto before = extract_utility_polynomials(g);
    ConsolidatedGame cg = consolidate_chance(g);
    CHECK(validate(cg.game).empty());
    auto after = extract_utility_polynomials(cg.game);
    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(before[i] == after[i]);
    // Single uniform chance root over 2^t outcomes.
    CHECK(cg.game.nodes[0].kind == NodeKind::Chance);
    CHECK((int)cg.game.nodes[0].children.size() == (1 << cg.t));
  }
}

TEST_CASE("consolidation constants on the chancey game") {
  ConsolidatedGame cg = consolidate_chance(chancey_game());
  CHECK(cg.r == 2);  // monomials: 2x and 1
  CHECK(cg.t == 1);
  CHECK(cg.scale == Rat(1));
}

TEST_CASE("chance removal: V formula holds") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> num(0, 12);
  for (Game g : {chancey_game(), absentminded_driver()}) {
    Game consolidated = consolidate_chance(g).game;
    ChanceRemoval cr = remove_chance(consolidated);
    CHECK(validate(cr.game).empty());
    INFO("t = " << cr.t << " shift = " << rat_to_string(cr.shift));

    ProfileLayout orig_layout = g.layout();
    ProfileLayout new_layout = cr.game.layout();
    REQUIRE(new_layout.total_vars == orig_layout.total_vars + 2);
    auto vpoly = extract_utility_polynomials(cr.game)[0];

    Rat pow2t(1);
    for (int i = 0; i < cr.t; ++i) pow2t *= 2;

    for (int rep = 0; rep < 100; ++rep) {
      RatProfile mu = testutil::random_rat_profile(orig_layout, rng);
      Rat l(num(rng), 12);
      l.canonicalize();
      // Assemble the profile of the transformed game: original player-0
      // blocks first (document order preserved), then I_c = (l, 1-l).
      std::vector<Rat> x = mu.x;
      x.push_back(l);
      x.push_back(Rat(1) - l);
      Rat u = expected_utility(g, 0, mu) + cr.shift;
      Rat lr = l * (Rat(1) - l);
      Rat gadget(1);
      for (int i = 0; i < cr.t; ++i) gadget *= lr;
      Rat expect = -l * l - (Rat(1) - l) * (Rat(1) - l) + pow2t * gadget * u;
      CHECK(vpoly.evaluate<Rat>(x) == expect);
      if (l == Rat(1, 2)) {
        // V(mu, 1/2) = -1/2 + U(mu)/2^t exactly.
        CHECK(vpoly.evaluate<Rat>(x) == Rat(-1, 2) + u / pow2t);
      }
    }
  }
}

TEST_CASE("chance removal output is chance-free and absentminded") {
  Game consolidated = consolidate_chance(chancey_game()).game;
  ChanceRemoval cr = remove_chance(consolidated);
  for (const Node& n : cr.game.nodes) CHECK(n.kind != NodeKind::Chance);
  auto rep = degree_of_absentmindedness(cr.game);
  CHECK(rep.per_infoset[cr.ic_infoset] == 2 * cr.t);
}

TEST_CASE("precision map constants") {
  PrecisionMap pm = precision_map(Rat(1, 100), 1, Rat(12), 20);
  CHECK(pm.delta_nash == Rat(1, 200));
  CHECK(pm.delta_nash_conservative == Rat(1, 1400));
  CHECK(pm.delta_edt == Rat(1, 200));
  CHECK(pm.delta_cdt == Rat(1, 1008000) * Rat(1, 1008000));
  CHECK(precision_map(Rat(10), 0, Rat(1), 3).delta_nash == Rat(1, 4));
  CHECK_THROWS_AS(precision_map(Rat(0), 1, Rat(1), 1), nonpositive_eps_error);
}
