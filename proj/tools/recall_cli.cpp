// Batch CLI: validate / solve / verify / gap / transform / gen / catalog.
// All reports are JSON on stdout; exit codes: 0 ok, 2 verified-fail or
// certified-nonexistence, 3 unconverged, 4 input error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "recall/cdt.hpp"
#include "recall/edt.hpp"
#include "recall/instances.hpp"
#include "recall/io.hpp"
#include "recall/nash.hpp"
#include "recall/reductions.hpp"
#include "recall/transforms.hpp"
#include "recall/verify.hpp"

namespace {

using namespace recall;

constexpr int kOk = 0, kFail = 2, kUnconverged = 3, kInputError = 4;

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  Json j;
  in >> j;
  return j;
}

// Transform commands wrap their output as {"game": ..., <meta>}; accept both.
Game load_game(const std::string& path) {
  Json j = read_json_file(path);
  if (j.contains("game")) j = j.at("game");
  return game_from_json(j);
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<double> player_values(const Game& g, const Profile& mu) {
  std::vector<double> v;
  for (int i = 0; i < g.num_players; ++i)
    v.push_back(expected_utility(g, i, mu));
  return v;
}

int cmd_validate(const std::string& path) {
  Game g = load_game(path);
  auto errors = validate(g);
  Json out;
  out["valid"] = errors.empty();
  Json errs = Json::array();
  for (const auto& e : errors)
    errs.push_back(std::string(validation_code_name(e.code)) + ": " + e.message);
  out["errors"] = errs;
  out["players"] = g.num_players;
  out["nodes"] = g.num_nodes();
  out["infosets"] = g.infosets.size();
  out["perfect_recall"] = has_perfect_recall(g).perfect;
  out["degree_of_absentmindedness"] = degree_of_absentmindedness(g).global;
  out["game_hash"] = game_hash(g);
  emit(out);
  return errors.empty() ? kOk : kFail;
}

int cmd_solve(const std::string& path, const std::string& concept_name,
              const std::string& eps_str, long max_iter, unsigned seed) {
  Game g = validated(load_game(path));
  Rat eps = rat_from_string(eps_str);
  EquilibriumReport rep;
  if (concept_name == "cdt") {
    rep = solve_cdt_fixed_point(g, eps, max_iter > 0 ? max_iter : 5000000);
  } else if (concept_name == "cdt-pgd") {
    rep = solve_cdt_pgd_single_player(g, eps, max_iter);
  } else if (concept_name == "edt") {
    rep = edt_dynamics(g, eps, max_iter > 0 ? max_iter : 100000);
  } else if (concept_name == "nash") {
    rep = grid_nash_search(g, eps);
  } else {
    throw io_error("unknown concept '" + concept_name + "'");
  }
  rep.details["seed"] = std::to_string(seed);
  Json out = report_to_json(g, rep);
  Json values = Json::array();
  for (double v : player_values(g, rep.profile)) values.push_back(v);
  out["values"] = values;
  emit(out);
  if (rep.certificate == "CERTIFIED_NO_EXACT_NASH" ||
      rep.certificate == "CERTIFIED_NO_EXACT_EDT")
    return kFail;
  if (!rep.converged) return kUnconverged;
  return kOk;
}

int cmd_verify(const std::string& path, const std::string& concept_name,
               const std::string& eps_str, const std::string& profile_path) {
  Game g = validated(load_game(path));
  double eps = to_double(rat_from_string(eps_str));
  Profile mu = profile_from_json<double>(g, read_json_file(profile_path));
  Json out;
  out["concept"] = concept_name;
  out["eps"] = eps_str;
  out["game_hash"] = game_hash(g);
  bool pass = false;
  if (concept_name == "cdt") {
    auto chk = verify_cdt(g, mu, eps);
    pass = chk.pass;
    out["residual"] = chk.residual;
    out["worst"] = Json{{"player", chk.worst_player},
                        {"infoset", chk.worst_infoset},
                        {"action", chk.worst_action}};
  } else if (concept_name == "cdt-ws") {
    auto chk = verify_cdt_well_supported(g, mu, eps);
    pass = chk.pass;
    out["residual"] = chk.residual;
  } else if (concept_name == "kkt") {
    auto chk = kkt_residual(g, mu);
    pass = chk.residual <= eps;
    out["residual"] = chk.residual;
  } else if (concept_name == "edt") {
    auto chk = verify_edt(g, mu, eps);
    pass = chk.pass;
    out["residual"] = chk.worst_gain;
    out["error_bar"] = chk.bar;
    out["worst"] =
        Json{{"player", chk.worst_player}, {"infoset", chk.worst_infoset}};
  } else if (concept_name == "nash") {
    auto chk = verify_nash(g, mu, eps);
    pass = chk.pass;
    Json gaps = Json::array();
    for (double gp : chk.gaps) gaps.push_back(gp);
    out["gaps"] = gaps;
    out["error_bar"] = chk.bar;
  } else {
    throw io_error("unknown concept '" + concept_name + "'");
  }
  out["pass"] = pass;
  emit(out);
  return pass ? kOk : kFail;
}

int cmd_gap(const std::string& path) {
  Game g = validated(load_game(path));
  DualityReport dr = maxmin_minmax(g);
  emit(duality_to_json(g, dr));
  return kOk;
}

int cmd_transform(const std::string& kind, const std::string& path,
                  const std::string& eps_str) {
  if (kind == "extract-poly") {
    Game g = validated(load_game(path));
    auto polys = extract_utility_polynomials(g);
    ProfileLayout layout = g.layout();
    Json players = Json::array();
    for (const Polynomial& p : polys)
      players.push_back(poly_to_json(p, layout).at("terms"));
    emit(Json{{"layout", layout_to_json(layout)}, {"players", players}});
    return kOk;
  }
  if (kind == "poly2game") {
    Json j = read_json_file(path);
    ProfileLayout layout = layout_from_json(j.at("layout"));
    std::vector<Polynomial> polys;
    if (j.contains("players")) {
      for (const Json& terms : j.at("players"))
        polys.push_back(
            poly_from_json(Json{{"layout", j.at("layout")}, {"terms", terms}})
                .poly);
    } else {
      polys.push_back(poly_from_json(j).poly);
    }
    Game g = poly_to_game(polys, layout);
    emit(Json{{"game", game_to_json(g)}});
    return kOk;
  }
  if (kind == "consolidate-chance") {
    Game g = validated(load_game(path));
    ConsolidatedGame cg = consolidate_chance(g);
    emit(Json{{"game", game_to_json(cg.game)},
              {"t", cg.t},
              {"r", cg.r},
              {"scale", rat_to_string(cg.scale)}});
    return kOk;
  }
  if (kind == "remove-chance") {
    Game g = validated(load_game(path));
    ChanceRemoval cr = remove_chance(g);
    Json out{{"game", game_to_json(cr.game)},
             {"t", cr.t},
             {"shift", rat_to_string(cr.shift)},
             {"ic_infoset", cr.ic_infoset}};
    if (!eps_str.empty()) {
      Rat eps = rat_from_string(eps_str);
      LipschitzBundle lb = game_lipschitz(extract_utility_polynomials(g));
      PrecisionMap pm =
          precision_map(eps, cr.t, lb.Linf, cr.game.num_nodes());
      out["precision"] = Json{
          {"delta_nash", rat_to_string(pm.delta_nash)},
          {"delta_nash_conservative",
           rat_to_string(pm.delta_nash_conservative)},
          {"delta_edt", rat_to_string(pm.delta_edt)},
          {"delta_cdt", rat_to_string(pm.delta_cdt)}};
    }
    emit(out);
    return kOk;
  }
  throw io_error("unknown transform '" + kind + "'");
}

WeightedGraph parse_edgelist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  WeightedGraph graph;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    int u, v;
    long w = 1;
    if (!(ls >> u >> v)) continue;  // skip blanks/comments
    ls >> w;
    graph.edges.push_back({u, v, w});
    graph.num_vertices = std::max({graph.num_vertices, u + 1, v + 1});
  }
  return graph;
}

// One clause per line, literals as +-1-based integers: "1 -2".
TwoDnfFormula parse_two_dnf(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  TwoDnfFormula f;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    long a, b;
    if (!(ls >> a >> b)) continue;
    if (a == 0 || b == 0) throw io_error("literals are 1-based, 0 invalid");
    std::array<Literal, 2> clause{
        Literal{static_cast<int>(std::labs(a)) - 1, a < 0},
        Literal{static_cast<int>(std::labs(b)) - 1, b < 0}};
    f.clauses.push_back(clause);
    f.num_vars = std::max({f.num_vars, clause[0].var + 1, clause[1].var + 1});
  }
  return f;
}

// One clause per line, literals like "x1 -y2 x3" (1-based after x/y).
XYDnfFormula parse_xy_dnf(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  XYDnfFormula f;
  std::string line, tok;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<XYLiteral> clause;
    while (ls >> tok) {
      XYLiteral lit;
      std::size_t pos = 0;
      if (tok[pos] == '-') {
        lit.negated = true;
        ++pos;
      }
      if (pos >= tok.size() || (tok[pos] != 'x' && tok[pos] != 'y'))
        throw io_error("bad literal '" + tok + "'");
      lit.is_y = tok[pos] == 'y';
      lit.idx = std::stoi(tok.substr(pos + 1)) - 1;
      if (lit.idx < 0) throw io_error("bad literal '" + tok + "'");
      clause.push_back(lit);
      int& bound = lit.is_y ? f.num_y : f.num_x;
      bound = std::max(bound, lit.idx + 1);
    }
    if (clause.empty()) continue;
    if (clause.size() > 3) throw io_error("clauses are limited to 3 literals");
    f.clauses.push_back(clause);
  }
  return f;
}

int cmd_gen(const std::string& kind, const std::string& path, long sstar) {
  if (kind == "maxcut") {
    MaxCutInstance inst = maxcut_to_cube_instance(parse_edgelist(path));
    ProfileLayout layout({std::vector<int>(inst.n, 2)});
    emit(Json{{"poly", poly_to_json(cube_embed(inst.p).p_hat, layout)},
              {"n", inst.n},
              {"W", rat_to_string(inst.W)},
              {"Wprime", rat_to_string(inst.Wprime)},
              {"Linf", rat_to_string(inst.Linf)},
              {"eps", rat_to_string(inst.eps)}});
    return kOk;
  }
  if (kind == "minsat") {
    MinSatInstance inst = minsat_to_game(parse_two_dnf(path), sstar);
    emit(Json{{"game", game_to_json(inst.game)},
              {"n", inst.n},
              {"m", inst.m},
              {"B", rat_to_string(inst.B)},
              {"tstar", rat_to_string(inst.tstar)},
              {"eps", rat_to_string(inst.eps)}});
    return kOk;
  }
  if (kind == "dnf-forall") {
    DnfForallInstance inst = dnf_forall_to_edt_instance(parse_xy_dnf(path));
    emit(Json{{"game", game_to_json(inst.game)},
              {"p1", poly_to_json(inst.p1, inst.layout)},
              {"m", inst.m},
              {"n", inst.n},
              {"k", inst.k},
              {"R", rat_to_string(inst.R)},
              {"L", rat_to_string(inst.L)},
              {"eps", rat_to_string(inst.eps)}});
    return kOk;
  }
  throw io_error("unknown generator '" + kind + "'");
}

int cmd_catalog(const std::string& sub, const std::string& name,
                const std::string& lambda_str, int n) {
  if (sub == "list") {
    Json names = Json::array();
    for (const CatalogEntry& e : catalog()) names.push_back(e.name);
    emit(Json{{"games", names}});
    return kOk;
  }
  Game g;
  if (name == "forgetful_shootout") {
    g = forgetful_shootout();
  } else if (name == "absentminded_driver") {
    g = absentminded_driver();
  } else if (name == "coordination_game") {
    g = coordination_game(lambda_str.empty() ? Rat(2)
                                             : rat_from_string(lambda_str));
  } else if (name == "absentminded_kicker") {
    g = absentminded_kicker(lambda_str.empty() ? Rat(3)
                                               : rat_from_string(lambda_str));
  } else if (name == "dont_go_straight") {
    g = dont_go_straight(n > 0 ? n : 5);
  } else {
    throw io_error("unknown catalog game '" + name + "'");
  }
  emit(game_to_json(g));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solvers and verifiers for extensive-form games with "
               "imperfect recall"};
  app.require_subcommand(1);

  std::string game_path, profile_path, concept_name, eps_str, name, lambda_str;
  std::string transform_kind, gen_kind, catalog_sub;
  long max_iter = 0, sstar = 0;
  unsigned seed = 0;
  int n = 0;

  auto* validate_cmd = app.add_subcommand("validate", "Check a game file");
  validate_cmd->add_option("game", game_path)->required();

  auto* solve_cmd = app.add_subcommand("solve", "Compute an equilibrium");
  solve_cmd->add_option("--concept", concept_name)
      ->required()
      ->check(CLI::IsMember({"cdt", "cdt-pgd", "edt", "nash"}));
  solve_cmd->add_option("--eps", eps_str)->required();
  solve_cmd->add_option("--max-iter", max_iter);
  solve_cmd->add_option("--seed", seed);
  solve_cmd->add_option("game", game_path)->required();

  auto* verify_cmd = app.add_subcommand("verify", "Check a candidate profile");
  verify_cmd->add_option("--concept", concept_name)
      ->required()
      ->check(CLI::IsMember({"cdt", "cdt-ws", "edt", "nash", "kkt"}));
  verify_cmd->add_option("--eps", eps_str)->required();
  verify_cmd->add_option("--profile", profile_path)->required();
  verify_cmd->add_option("game", game_path)->required();

  auto* gap_cmd = app.add_subcommand("gap", "Zero-sum duality gap");
  gap_cmd->add_option("game", game_path)->required();

  auto* transform_cmd = app.add_subcommand("transform", "Game transforms");
  transform_cmd->add_option("kind", transform_kind)
      ->required()
      ->check(CLI::IsMember(
          {"extract-poly", "poly2game", "consolidate-chance", "remove-chance"}));
  transform_cmd->add_option("input", game_path)->required();
  transform_cmd->add_option("--eps", eps_str);

  auto* gen_cmd = app.add_subcommand("gen", "Hardness-instance generators");
  gen_cmd->add_option("kind", gen_kind)
      ->required()
      ->check(CLI::IsMember({"maxcut", "minsat", "dnf-forall"}));
  gen_cmd->add_option("input", game_path)->required();
  gen_cmd->add_option("--sstar", sstar);

  auto* catalog_cmd = app.add_subcommand("catalog", "Built-in example games");
  catalog_cmd->add_option("sub", catalog_sub)
      ->required()
      ->check(CLI::IsMember({"list", "emit"}));
  catalog_cmd->add_option("name", name);
  catalog_cmd->add_option("--lambda", lambda_str);
  catalog_cmd->add_option("--n", n);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) return cmd_validate(game_path);
    if (solve_cmd->parsed())
      return cmd_solve(game_path, concept_name, eps_str, max_iter, seed);
    if (verify_cmd->parsed())
      return cmd_verify(game_path, concept_name, eps_str, profile_path);
    if (gap_cmd->parsed()) return cmd_gap(game_path);
    if (transform_cmd->parsed())
      return cmd_transform(transform_kind, game_path, eps_str);
    if (gen_cmd->parsed()) return cmd_gen(gen_kind, game_path, sstar);
    if (catalog_cmd->parsed()) {
      if (catalog_sub == "emit" && name.empty())
        throw recall::io_error("catalog emit needs a game name");
      return cmd_catalog(catalog_sub, name, lambda_str, n);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
