#include <catch2/catch_amalgamated.hpp>

#include "recall/edt.hpp"
#include "recall/instances.hpp"
#include "recall/verify.hpp"

using namespace recall;

TEST_CASE("certified best response on the driver") {
  Game g = absentminded_driver();
  Profile any = uniform_profile<double>(g.layout());
  BestResponse br = certified_best_response(g, 0, 0, any, 1e-6);
  CHECK(br.value == Catch::Approx(8.0 / 9.0).margin(1e-6));
  CHECK(br.upper >= 8.0 / 9.0 - 1e-12);
  CHECK(br.alpha[0] == Catch::Approx(1.0 / 3.0).margin(1e-2));
}

TEST_CASE("edt dynamics finds the driver optimum") {
  Game g = absentminded_driver();
  EquilibriumReport rep = edt_dynamics(g, Rat(1, 1000));
  REQUIRE(rep.converged);
  CHECK(expected_utility(g, 0, rep.profile) ==
        Catch::Approx(8.0 / 9.0).margin(1e-3));
  CHECK(verify_edt(g, rep.profile, 1e-3).pass);
}

TEST_CASE("edt dynamics on the coordination game") {
  Game g = coordination_game(Rat(2));
  EquilibriumReport rep = edt_dynamics(g, Rat(1, 100));
  REQUIRE(rep.converged);
  double v = expected_utility(g, 0, rep.profile);
  // Both pure coordination points are EDT equilibria (values 1 and 2);
  // the dynamics must settle at one of them up to eps.
  bool near1 = std::abs(v - 1.0) < 0.05, near2 = std::abs(v - 2.0) < 0.05;
  CHECK((near1 || near2));
  CHECK(verify_edt(g, rep.profile, 1e-2).pass);
}

TEST_CASE("coordination pure profiles are exact EDT equilibria") {
  Game g = coordination_game(Rat(2));
  ProfileLayout layout = g.layout();
  Profile ll(layout, {1, 0, 1, 0});
  Profile rr(layout, {0, 1, 0, 1});
  CHECK(verify_edt(g, ll, 1e-9).pass);
  CHECK(verify_edt(g, rr, 1e-9).pass);
  Profile mix(layout, {0.5, 0.5, 0.5, 0.5});
  CHECK_FALSE(verify_edt(g, mix, 1e-2).pass);
}

TEST_CASE("driver pure-exit profile fails verify_edt with gain ~ 3/4") {
  Game g = absentminded_driver();
  Profile pure(g.layout(), {1.0, 0.0});
  auto chk = verify_edt(g, pure, 1e-6);
  CHECK_FALSE(chk.pass);
  // Deviating to the interior optimum gains 8/9 - 0 ... but the certified
  // verifier reports the best deviation gain, >= 8/9 - bar.
  CHECK(chk.worst_gain >= 8.0 / 9.0 - 2e-7 - chk.bar);
}

TEST_CASE("kicker threshold at lambda = 3") {
  ProfileLayout layout = absentminded_kicker(Rat(3)).layout();
  Profile pure_lr(layout, {1.0, 0.0, 0.0, 1.0});  // P1 kicks L, keeper dives R
  for (int lam : {3, 4}) {
    Game g = absentminded_kicker(Rat(lam));
    INFO("lambda " << lam);
    CHECK(verify_edt(g, pure_lr, 1e-6).pass);
  }
  Game g2 = absentminded_kicker(Rat(2));
  CHECK_FALSE(verify_edt(g2, pure_lr, 1e-3).pass);
}
