#pragma once

// Shared helpers for the unit and acceptance tests.

#include <random>
#include <vector>

#include "recall/game.hpp"
#include "recall/strategy.hpp"

namespace testutil {

using recall::Game;
using recall::ProfileLayout;
using recall::Rat;

// Random exact-rational mixed profile: small integer weights, normalized.
inline recall::RatProfile random_rat_profile(const ProfileLayout& layout,
                                             std::mt19937& rng) {
  std::uniform_int_distribution<int> d(1, 9);
  std::vector<Rat> x(layout.total_vars, Rat(0));
  for (int i = 0; i < (int)layout.block_sizes.size(); ++i)
    for (int j = 0; j < layout.num_infosets(i); ++j) {
      int m = layout.block_sizes[i][j];
      std::vector<int> w(m);
      int sum = 0;
      for (int k = 0; k < m; ++k) sum += (w[k] = d(rng));
      for (int k = 0; k < m; ++k) {
        Rat q(w[k], sum);
        q.canonicalize();
        x[layout.flat(i, j, k)] = q;
      }
    }
  return recall::RatProfile(layout, std::move(x));
}

inline recall::Profile random_profile(const ProfileLayout& layout,
                                      std::mt19937& rng) {
  return recall::to_float(random_rat_profile(layout, rng));
}

// Sometimes-degenerate random profile (zero entries allowed) for hierarchy
// and collapse property tests.
inline recall::Profile random_sparse_profile(const ProfileLayout& layout,
                                             std::mt19937& rng) {
  std::uniform_int_distribution<int> d(0, 4);
  std::vector<Rat> x(layout.total_vars, Rat(0));
  for (int i = 0; i < (int)layout.block_sizes.size(); ++i)
    for (int j = 0; j < layout.num_infosets(i); ++j) {
      int m = layout.block_sizes[i][j];
      std::vector<int> w(m);
      int sum = 0;
      for (int k = 0; k < m; ++k) sum += (w[k] = d(rng));
      if (sum == 0) {
        w[0] = 1;
        sum = 1;
      }
      for (int k = 0; k < m; ++k) {
        Rat q(w[k], sum);
        q.canonicalize();
        x[layout.flat(i, j, k)] = q;
      }
    }
  return recall::to_float(recall::RatProfile(layout, std::move(x)));
}

}  // namespace testutil
