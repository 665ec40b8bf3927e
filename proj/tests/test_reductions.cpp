#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "recall/bridge.hpp"
#include "recall/edt.hpp"
#include "recall/nash.hpp"
#include "recall/reductions.hpp"
#include "test_util.hpp"

using namespace recall;

static WeightedGraph k2() { return {2, {{0, 1, 1}}}; }
static WeightedGraph triangle() {
  return {3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}};
}

TEST_CASE("maxcut constants") {
  MaxCutInstance a = maxcut_to_cube_instance(k2());
  CHECK(a.W == Rat(1));
  CHECK(a.Wprime == Rat(4));
  CHECK(a.Linf == Rat(15));
  CHECK(a.eps == Rat(1, 32));

  MaxCutInstance b = maxcut_to_cube_instance(triangle());
  CHECK(b.W == Rat(3));
  CHECK(b.eps == Rat(1, 92));
}

TEST_CASE("maxcut identity p(z) = W'n/4 + cut(z)") {
  for (const WeightedGraph& graph : {k2(), triangle(),
                                     WeightedGraph{4, {{0, 1, 2}, {1, 2, 1},
                                                       {2, 3, 3}, {0, 3, 1}}}}) {
    MaxCutInstance inst = maxcut_to_cube_instance(graph);
    Rat base = inst.Wprime * inst.n / 4;
    for (int bits = 0; bits < (1 << inst.n); ++bits) {
      std::vector<int> z;
      std::vector<Rat> zr;
      for (int v = 0; v < inst.n; ++v) {
        z.push_back((bits >> v) & 1);
        zr.push_back(Rat(z.back()));
      }
      CHECK(inst.p.evaluate<Rat>(zr) == base + cut_weight(graph, z));
    }
  }
}

static std::vector<int> solve_maxcut_by_dynamics(const WeightedGraph& graph) {
  MaxCutInstance inst = maxcut_to_cube_instance(graph);
  CubeEmbedding emb = cube_embed(inst.p);
  Game g = poly_to_game({emb.p_hat}, emb.layout);
  EquilibriumReport rep = edt_dynamics(g, inst.eps);
  REQUIRE(rep.converged);
  std::vector<double> x;
  for (int v = 0; v < inst.n; ++v)
    x.push_back(rep.profile.at(0, v, 0));
  return round_cube_solution(x, to_double(inst.eps));
}

TEST_CASE("maxcut pipeline yields flip-local maxima") {
  for (const WeightedGraph& graph : {k2(), triangle()}) {
    std::vector<int> z = solve_maxcut_by_dynamics(graph);
    FlipCheck fc = check_flip_local_max(graph, z);
    CHECK(fc.pass);
  }
  CHECK(cut_weight(k2(), solve_maxcut_by_dynamics(k2())) == 1);
}

TEST_CASE("round_cube_solution rejects interior points") {
  CHECK(round_cube_solution({0.001, 0.999}, 0.01) == std::vector<int>{0, 1});
  CHECK_THROWS_AS(round_cube_solution({0.4}, 0.01), not_integral_error);
}

TEST_CASE("minsat normalization") {
  TwoDnfFormula f;
  f.num_vars = 1;
  f.clauses.push_back({Literal{0, false}, Literal{0, false}});  // x AND x
  TwoDnfFormula norm = normalize_two_dnf(f);
  CHECK(norm.num_vars == 2);  // padded with a fresh dummy
  CHECK(norm.clauses[0][1].negated);

  TwoDnfFormula bad;
  bad.num_vars = 1;
  bad.clauses.push_back({Literal{0, false}, Literal{0, true}});  // x AND NOT x
  CHECK_THROWS_AS(normalize_two_dnf(bad), bad_formula_error);
}

TEST_CASE("minsat constants for one clause on two variables") {
  TwoDnfFormula f;
  f.num_vars = 2;
  f.clauses.push_back({Literal{0, false}, Literal{1, true}});  // x1 AND NOT x2
  MinSatInstance inst = minsat_to_game(f, 1);
  CHECK(inst.n == 2);
  CHECK(inst.m == 1);
  CHECK(inst.B == Rat(64) * Rat(64) * Rat(64));
  CHECK(inst.eps == Rat(1, 8));
  CHECK(inst.tstar == -inst.B / 2 + Rat(1, 2));
  CHECK(validate(inst.game).empty());
}

TEST_CASE("minsat identity over random formulas and all assignments") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> nv(2, 3), nc(1, 4), coin(0, 1);
  for (int rep = 0; rep < 10; ++rep) {
    TwoDnfFormula f;
    f.num_vars = nv(rng);
    int m = nc(rng);
    for (int c = 0; c < m; ++c) {
      int a = coin(rng) ? 0 : 1;
      int b2 = (a + 1) % f.num_vars;
      f.clauses.push_back(
          {Literal{a, coin(rng) == 1}, Literal{b2, coin(rng) == 1}});
    }
    MinSatInstance inst = minsat_to_game(f, 0);
    auto polys = extract_utility_polynomials(inst.game);
    int n = inst.n;
    for (int bits = 0; bits < (1 << n); ++bits) {
      std::vector<int> psi;
      for (int v = 0; v < n; ++v) psi.push_back((bits >> v) & 1);
      RatProfile mu = assignment_profile_exact(inst, psi);
      Rat s(satisfied_clause_count(inst.normalized, psi));
      Rat expect = -inst.B / n + Rat(2) * s / (Rat(n) * n);
      CHECK(polys[0].evaluate<Rat>(mu.x) == expect);
      CHECK(expected_utility(inst.game, 0, mu) == expect);
    }
  }
}

TEST_CASE("exists-forall 3-DNF instance constants and forward identity") {
  XYDnfFormula phi;
  phi.num_x = 1;
  phi.num_y = 1;
  phi.clauses.push_back({XYLiteral{false, 0, false}});  // clause: x1
  DnfForallInstance inst = dnf_forall_to_edt_instance(phi);
  CHECK(inst.m == 2);
  CHECK(inst.n == 2);
  CHECK(inst.k == 3);
  CHECK(inst.R == Rat(24));
  CHECK(inst.eps == Rat(1, 7056));
  CHECK(inst.L == Rat(8) * Rat(24) * Rat(7056));
  CHECK(validate(inst.game).empty());
  CHECK(is_zero_sum(inst.game));

  // Witness x~ = (1, 1): x* = x~/m with slack 0; y* = e_{n+2}.
  ProfileLayout layout = inst.layout;
  std::vector<Rat> star(layout.total_vars, Rat(0));
  star[layout.flat(0, 0, 0)] = Rat(1, 2);
  star[layout.flat(0, 0, 1)] = Rat(1, 2);
  star[layout.flat(1, 0, 3)] = Rat(1);
  CHECK(inst.p1.evaluate<Rat>(star) == Rat(0));

  // P1 cannot gain against y*: U1(x, y*) = -L psi_m(x) <= 0. P2 cannot gain
  // against x*: U1(x*, y) >= 0 (Claim 1 forward direction), on random points.
  std::mt19937 rng(29);
  for (int rep = 0; rep < 50; ++rep) {
    RatProfile mu = testutil::random_rat_profile(layout, rng);
    std::vector<Rat> xdev = star;
    for (int kk = 0; kk < 3; ++kk)
      xdev[layout.flat(0, 0, kk)] = mu.at(0, 0, kk);
    CHECK(inst.p1.evaluate<Rat>(xdev) <= Rat(0));
    std::vector<Rat> ydev = star;
    for (int kk = 0; kk < 4; ++kk)
      ydev[layout.flat(1, 0, kk)] = mu.at(1, 0, kk);
    CHECK(inst.p1.evaluate<Rat>(ydev) >= Rat(0));
  }

  // psi vanishes exactly at integral points.
  std::vector<Rat> integral(layout.total_vars, Rat(0));
  integral[layout.flat(0, 0, 0)] = Rat(1, 2);
  integral[layout.flat(0, 0, 1)] = Rat(1, 2);
  integral[layout.flat(1, 0, 2)] = Rat(1);  // y_n+1 pure: z_j in {0,1} for j<=n
  integral[layout.flat(1, 0, 3)] = Rat(0);
  // gate = 1 here; phi' at (x~=(1,1), y~=(0,0)) counts satisfied clauses.
  // clause x1: sat; x2 AND NOT y2: sat; NOT x2 AND y2: unsat -> phi' = 2.
  CHECK(inst.p1.evaluate<Rat>(integral) == Rat(3, 2));
}
