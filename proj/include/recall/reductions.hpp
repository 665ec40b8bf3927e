#pragma once

// Hardness-reduction instance generators with solution-correspondence
// mappers: MaxCut/FLIP -> cube polynomial, 2-DNF-MaxSAT -> single-infoset
// game, exists-forall 3-DNF -> two-player zero-sum EDT instance.

#include <array>
#include <string>
#include <vector>

#include "recall/bridge.hpp"
#include "recall/game.hpp"
#include "recall/poly.hpp"

namespace recall {

struct empty_graph_error : std::runtime_error {
  empty_graph_error() : std::runtime_error("EMPTY_GRAPH") {}
};
struct not_integral_error : std::runtime_error {
  not_integral_error() : std::runtime_error("NOT_INTEGRAL") {}
};
struct bad_formula_error : std::runtime_error {
  explicit bad_formula_error(const std::string& m) : std::runtime_error(m) {}
};

struct WeightedGraph {
  int num_vertices = 0;
  struct Edge {
    int u, v;
    long w;  // >= 1
  };
  std::vector<Edge> edges;
};

// --- MaxCut / FLIP -----------------------------------------------------------

struct MaxCutInstance {
  int n = 0;      // |V| = number of cube variables
  Polynomial p;   // over [0,1]^n
  Rat W, Wprime;  // W = total weight, W' = 2(W+1)
  Rat Linf;       // 15 W
  Rat eps;        // 1 / (2 Linf + 2)
};

// p(x) = W' sum_v (1/2 - x_v)^2 + sum_{(t,v)} w(t,v) d_{t,v}(x) with
// d_{t,v}(x) = x_t (1 - x_v) + (1 - x_t) x_v.
inline MaxCutInstance maxcut_to_cube_instance(const WeightedGraph& graph) {
  if (graph.edges.empty()) throw empty_graph_error();
  MaxCutInstance inst;
  inst.n = graph.num_vertices;
  long W = 0;
  for (const auto& e : graph.edges) {
    if (e.u == e.v) throw bad_formula_error("self-loop");
    if (e.w < 1) throw bad_formula_error("edge weight < 1");
    W += e.w;
  }
  inst.W = W;
  inst.Wprime = 2 * (inst.W + 1);
  inst.Linf = 15 * inst.W;
  inst.eps = Rat(1) / (2 * inst.Linf + 2);

  const int n = inst.n;
  Polynomial p(n);
  for (int v = 0; v < n; ++v) {
    // W' (1/2 - x_v)^2 = W' (1/4 - x_v + x_v^2)
    p.add_term({}, inst.Wprime / 4);
    p.add_term({{v, 1}}, -inst.Wprime);
    p.add_term({{v, 2}}, inst.Wprime);
  }
  for (const auto& e : graph.edges) {
    int a = std::min(e.u, e.v), c = std::max(e.u, e.v);
    // w * (x_a + x_c - 2 x_a x_c)
    p.add_term({{a, 1}}, Rat(e.w));
    p.add_term({{c, 1}}, Rat(e.w));
    p.add_term({{a, 1}, {c, 1}}, Rat(-2 * e.w));
  }
  inst.p = std::move(p);
  return inst;
}

// Claim-2 rounding: every coordinate of an eps-Nash point is eps-integral.
inline std::vector<int> round_cube_solution(const std::vector<double>& x,
                                            double eps) {
  std::vector<int> z;
  for (double v : x) {
    if (v <= eps)
      z.push_back(0);
    else if (v >= 1.0 - eps)
      z.push_back(1);
    else
      throw not_integral_error();
  }
  return z;
}

inline long cut_weight(const WeightedGraph& graph, const std::vector<int>& z) {
  long w = 0;
  for (const auto& e : graph.edges)
    if (z[e.u] != z[e.v]) w += e.w;
  return w;
}

struct FlipCheck {
  bool pass = true;
  int improving_vertex = -1;
  long cut = 0;
};

inline FlipCheck check_flip_local_max(const WeightedGraph& graph,
                                      const std::vector<int>& z) {
  FlipCheck out;
  out.cut = cut_weight(graph, z);
  for (int v = 0; v < graph.num_vertices; ++v) {
    std::vector<int> flipped = z;
    flipped[v] ^= 1;
    if (cut_weight(graph, flipped) > out.cut) {
      out.pass = false;
      out.improving_vertex = v;
      return out;
    }
  }
  return out;
}

// --- 2-DNF-MaxSAT ------------------------------------------------------------

struct Literal {
  int var = 0;  // index < n
  bool negated = false;
};

struct TwoDnfFormula {
  int num_vars = 0;
  std::vector<std::array<Literal, 2>> clauses;  // conjunctions of 2 literals
};

struct MinSatInstance {
  Game game;  // single infoset, 2n actions, depth 2
  TwoDnfFormula normalized;
  Rat B;      // (16 m n^2)^3 penalty
  Rat tstar;  // -B/n + 2 s*/n^2
  Rat eps;    // 1 / (2 n^2)
  int n = 0, m = 0;
};

// Pads singleton-style clauses with fresh dummy variables until every clause
// uses exactly two distinct variables.
inline TwoDnfFormula normalize_two_dnf(const TwoDnfFormula& in) {
  TwoDnfFormula out;
  out.num_vars = in.num_vars;
  for (const auto& cl : in.clauses) {
    Literal a = cl[0], b = cl[1];
    if (a.var != b.var) {
      out.clauses.push_back({a, b});
      continue;
    }
    if (a.negated != b.negated)
      throw bad_formula_error("clause x AND NOT x is never satisfiable");
    // x AND x == x: pad with a fresh dummy y, clause becomes x AND NOT y.
    Literal dummy{out.num_vars++, true};
    out.clauses.push_back({a, dummy});
  }
  return out;
}

inline bool literal_satisfied(const Literal& l, const std::vector<int>& assign) {
  return assign[l.var] != (l.negated ? 1 : 0);
}

inline long satisfied_clause_count(const TwoDnfFormula& f,
                                   const std::vector<int>& assign) {
  long s = 0;
  for (const auto& cl : f.clauses)
    if (literal_satisfied(cl[0], assign) && literal_satisfied(cl[1], assign)) ++s;
  return s;
}

// Number of clauses made true by the partial assignment {x_i = v, x_i' = w}
// alone (both clause variables must be among the assigned ones).
inline long partial_clause_count(const TwoDnfFormula& f, int i, int v, int i2,
                                 int w) {
  long s = 0;
  for (const auto& cl : f.clauses) {
    bool ok = true;
    for (const Literal& l : {cl[0], cl[1]}) {
      int val;
      if (l.var == i)
        val = v;
      else if (l.var == i2)
        val = w;
      else {
        ok = false;
        break;
      }
      if (val == (l.negated ? 1 : 0)) ok = false;
      if (!ok) break;
    }
    if (ok) ++s;
  }
  return s;
}

inline MinSatInstance minsat_to_game(const TwoDnfFormula& formula, long s_star) {
  MinSatInstance inst;
  inst.normalized = normalize_two_dnf(formula);
  const int n = inst.normalized.num_vars;
  const int m = static_cast<int>(inst.normalized.clauses.size());
  inst.n = n;
  inst.m = m;
  Rat base = Rat(16) * m * n * n;
  inst.B = base * base * base;
  inst.tstar = -inst.B / n + Rat(2 * s_star) / (n * (long)n);
  inst.eps = Rat(1, 2L * n * n);

  // One infoset with actions x1->T, x1->F, x2->T, ... ; depth 2; terminal
  // payoff -B when both picks touch the same variable, else the partial
  // clause count.
  GameBuilder b(1);
  std::vector<std::string> actions;
  for (int i = 0; i < n; ++i) {
    actions.push_back("t" + std::to_string(i + 1));
    actions.push_back("f" + std::to_string(i + 1));
  }
  int is = b.add_infoset(0, "I", actions);
  int root = b.add_decision(-1, is);
  for (int a1 = 0; a1 < 2 * n; ++a1) {
    int node = b.add_decision(root, is);
    for (int a2 = 0; a2 < 2 * n; ++a2) {
      int i = a1 / 2, v = 1 - (a1 % 2);
      int i2 = a2 / 2, w = 1 - (a2 % 2);
      Rat payoff = (i == i2)
                       ? Rat(-inst.B)
                       : Rat(partial_clause_count(inst.normalized, i, v, i2, w));
      b.add_terminal(node, {payoff});
    }
  }
  inst.game = b.build();
  return inst;
}

// mu_psi: the behavioral strategy spreading 1/n over the action matching psi
// at each variable.
inline Profile assignment_profile(const MinSatInstance& inst,
                                  const std::vector<int>& psi) {
  ProfileLayout layout = inst.game.layout();
  std::vector<double> x(layout.total_vars, 0.0);
  for (int i = 0; i < inst.n; ++i)
    x[layout.flat(0, 0, 2 * i + (psi[i] ? 0 : 1))] = 1.0 / double(inst.n);
  return Profile(layout, std::move(x));
}

inline RatProfile assignment_profile_exact(const MinSatInstance& inst,
                                           const std::vector<int>& psi) {
  ProfileLayout layout = inst.game.layout();
  std::vector<Rat> x(layout.total_vars, Rat(0));
  for (int i = 0; i < inst.n; ++i)
    x[layout.flat(0, 0, 2 * i + (psi[i] ? 0 : 1))] = Rat(1, inst.n);
  return RatProfile(layout, std::move(x));
}

// --- exists-forall 3-DNF -> EDT instance -------------------------------------

struct XYLiteral {
  bool is_y = false;
  int idx = 0;  // 0-based within its group
  bool negated = false;
};

struct XYDnfFormula {
  int num_x = 0, num_y = 0;
  std::vector<std::vector<XYLiteral>> clauses;  // conjunctions, <= 3 literals
};

struct DnfForallInstance {
  Game game;  // 2p0s via poly_to_game; one infoset per player
  ProfileLayout layout;
  Polynomial p1;  // U^(1) over the layout
  int m = 0, n = 0, k = 0;
  Rat R, L, eps;
};

inline DnfForallInstance dnf_forall_to_edt_instance(const XYDnfFormula& phi) {
  DnfForallInstance inst;
  // Augment: x_m, y_n fresh; clauses x_m AND NOT y_n, NOT x_m AND y_n.
  const int m = phi.num_x + 1;
  const int n = phi.num_y + 1;
  const int k = static_cast<int>(phi.clauses.size()) + 2;
  inst.m = m;
  inst.n = n;
  inst.k = k;
  long mx = std::max(m, n);
  inst.R = Rat(k) * mx * mx * mx;
  inst.eps = Rat(1, 28L * k) * Rat(1, 28L * k);
  inst.L = Rat(8) * inst.R / inst.eps;

  // Layout: P1 one infoset with m+1 actions, P2 one infoset with n+2 actions.
  ProfileLayout layout({{m + 1}, {n + 2}});
  inst.layout = layout;
  const int NV = layout.total_vars;
  auto xvar = [&](int i) { return layout.flat(0, 0, i); };        // x_1..x_{m+1}
  auto yvar = [&](int j) { return layout.flat(1, 0, j); };        // y_1..y_{n+2}

  std::vector<std::vector<XYLiteral>> clauses = phi.clauses;
  clauses.push_back({{false, m - 1, false}, {true, n - 1, true}});
  clauses.push_back({{false, m - 1, true}, {true, n - 1, false}});

  // phi'(m x, n y): multilinear extension, literal z -> m x_i or 1 - m x_i.
  Polynomial phi_poly(NV);
  for (const auto& cl : clauses) {
    Polynomial term = Polynomial::constant(NV, Rat(1));
    for (const XYLiteral& l : cl) {
      Polynomial z = l.is_y ? Polynomial::var(NV, yvar(l.idx), Rat(n))
                            : Polynomial::var(NV, xvar(l.idx), Rat(m));
      term = term * (l.negated ? Polynomial::constant(NV, Rat(1)) - z : z);
    }
    phi_poly = phi_poly + term;
  }

  // psi_m(x) = sum_i (m x_i)^2 (1 - m x_i)^2, over the first m coordinates.
  auto make_psi = [&](int count, auto var_of, long scale) {
    Polynomial psi(NV);
    for (int i = 0; i < count; ++i) {
      Polynomial z = Polynomial::var(NV, var_of(i), Rat(scale));
      Polynomial zz = z * (Polynomial::constant(NV, Rat(1)) - z);
      psi = psi + zz * zz;
    }
    return psi;
  };
  Polynomial psi_x = make_psi(m, xvar, m);
  Polynomial psi_y = make_psi(n, yvar, n);

  // U^(1) = (1 - y_{n+2}) (phi' - 1/2) - L psi_m(x) + L psi_n(y).
  Polynomial gate = Polynomial::constant(NV, Rat(1)) -
                    Polynomial::var(NV, yvar(n + 1));
  Polynomial u1 = gate * (phi_poly - Polynomial::constant(NV, Rat(1, 2))) -
                  psi_x.scaled(inst.L) + psi_y.scaled(inst.L);
  inst.p1 = u1;
  inst.game = poly_to_game({u1, u1.scaled(Rat(-1))}, layout);
  return inst;
}

}  // namespace recall
