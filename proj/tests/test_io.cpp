#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "recall/instances.hpp"
#include "recall/io.hpp"
#include "test_util.hpp"

using namespace recall;

TEST_CASE("game JSON round trip is the identity") {
  for (const CatalogEntry& e : catalog()) {
    Json j1 = game_to_json(e.game);
    Game g2 = game_from_json(j1);
    Json j2 = game_to_json(g2);
    INFO(e.name);
    CHECK(j1 == j2);
    CHECK(j1.dump() == j2.dump());  // bit-exact serialization
    CHECK(game_hash(e.game) == game_hash(g2));
  }
}

TEST_CASE("rationals survive as strings") {
  GameBuilder b(1);
  int root = b.add_chance(-1, {{"a", Rat(1, 3)}, {"b", Rat(2, 3)}});
  b.add_terminal(root, {rat_from_string("0.1")});
  b.add_terminal(root, {rat_from_string("-7/3")});
  Game g = b.build();
  Json j = game_to_json(g);
  Game g2 = game_from_json(j);
  CHECK(g2.nodes[0].chance_weights[0] == Rat(1, 3));
  CHECK(g2.nodes[1].payoffs[0] == Rat(1, 10));
  CHECK(g2.nodes[2].payoffs[0] == Rat(-7, 3));
  CHECK(game_to_json(g2) == j);
}

TEST_CASE("malformed game documents are rejected") {
  CHECK_THROWS_AS(game_from_json(Json{{"players", 1}}), io_error);
  Json bad = game_to_json(absentminded_driver());
  bad["root"]["decision"]["children"].erase("e");
  CHECK_THROWS_AS(game_from_json(bad), io_error);
}

TEST_CASE("profile JSON round trip") {
  Game g = forgetful_shootout();
  std::mt19937 rng(31);
  RatProfile mu = testutil::random_rat_profile(g.layout(), rng);
  Json j = profile_to_json(g, mu);
  RatProfile back = profile_from_json<Rat>(g, j);
  CHECK(back.x == mu.x);
  Profile dbl = profile_from_json<double>(g, j);
  CHECK(dbl.x.size() == mu.x.size());
}

TEST_CASE("polynomial JSON round trip") {
  ProfileLayout layout({{2}, {3}});
  Polynomial p(layout.total_vars);
  p.add_term({{0, 1}, {3, 2}}, Rat(-5, 7));
  p.add_term({}, Rat(2));
  Json j = poly_to_json(p, layout);
  PolyDocument doc = poly_from_json(j);
  CHECK(doc.poly == p);
  CHECK(doc.layout == layout);
  CHECK(poly_to_json(doc.poly, doc.layout) == j);
}

// ------------------------------------------------------------------ CLI ----

namespace {

struct CliResult {
  int exit_code;
  std::string stdout_text;
};

CliResult run_cli(const std::string& args) {
  std::string out_path = "cli_test_out.json";
  std::string cmd = std::string(RECALL_CLI_PATH) + " " + args + " > " + out_path;
  int rc = std::system(cmd.c_str());
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
#ifdef WEXITSTATUS
  rc = WEXITSTATUS(rc);
#endif
  return {rc, ss.str()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("cli validate and catalog") {
  CliResult list = run_cli("catalog list");
  CHECK(list.exit_code == 0);
  CHECK(Json::parse(list.stdout_text).at("games").size() == 5);

  CliResult emit = run_cli("catalog emit absentminded_driver");
  CHECK(emit.exit_code == 0);
  write_file("driver.json", emit.stdout_text);
  CHECK(run_cli("validate driver.json").exit_code == 0);
  CHECK(run_cli("validate no_such_file.json").exit_code == 4);
}

TEST_CASE("cli solve edt on the driver") {
  write_file("driver.json", game_to_json(absentminded_driver()).dump());
  CliResult res = run_cli("solve --concept edt --eps 1e-3 driver.json");
  CHECK(res.exit_code == 0);
  Json rep = Json::parse(res.stdout_text);
  CHECK(rep.at("converged").get<bool>());
  CHECK(std::abs(rep.at("values").at(0).get<double>() - 8.0 / 9.0) < 1e-3);
}

TEST_CASE("cli verify round trip") {
  Game g = absentminded_driver();
  write_file("driver.json", game_to_json(g).dump());
  RatProfile mu(g.layout(), {Rat(1, 3), Rat(2, 3)});
  write_file("prof.json", profile_to_json(g, mu).dump());
  CHECK(run_cli("verify --concept cdt --eps 1e-9 --profile prof.json driver.json")
            .exit_code == 0);
  RatProfile bad(g.layout(), {Rat(1, 2), Rat(1, 2)});
  write_file("bad.json", profile_to_json(g, bad).dump());
  CHECK(run_cli("verify --concept cdt --eps 1e-2 --profile bad.json driver.json")
            .exit_code == 2);
}

TEST_CASE("cli transform pipeline is composable") {
  write_file("driver.json", game_to_json(absentminded_driver()).dump());
  CliResult poly = run_cli("transform extract-poly driver.json");
  CHECK(poly.exit_code == 0);
  write_file("poly.json", poly.stdout_text);
  CliResult game2 = run_cli("transform poly2game poly.json");
  CHECK(game2.exit_code == 0);
  write_file("game2.json", game2.stdout_text);
  CHECK(run_cli("validate game2.json").exit_code == 0);
  CliResult removed = run_cli("transform remove-chance game2.json --eps 0.01");
  CHECK(removed.exit_code == 0);
  CHECK(Json::parse(removed.stdout_text).contains("precision"));
}

TEST_CASE("cli determinism: identical invocations, identical bytes") {
  write_file("driver.json", game_to_json(absentminded_driver()).dump());
  CliResult a = run_cli("solve --concept cdt --eps 1e-2 --seed 1 driver.json");
  CliResult b = run_cli("solve --concept cdt --eps 1e-2 --seed 1 driver.json");
  CHECK(a.exit_code == 0);
  CHECK(a.stdout_text == b.stdout_text);
}

TEST_CASE("cli gen minsat") {
  write_file("clauses.txt", "1 -2\n");
  CliResult res = run_cli("gen minsat clauses.txt --sstar 1");
  CHECK(res.exit_code == 0);
  Json j = Json::parse(res.stdout_text);
  CHECK(j.at("n").get<int>() == 2);
  CHECK(j.at("eps").get<std::string>() == "1/8");
}
