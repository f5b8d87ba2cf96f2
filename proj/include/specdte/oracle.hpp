#pragma once

// Brute-force enumeration of sharp finite-population bounds. Exponential in
// n; guarded to small sizes and used as ground truth in tests.

#include "specdte/spectra.hpp"

#include <vector>

namespace specdte {

using Permutation = std::vector<Index>;

struct SharpInterval {
  double min = 0.0;
  double max = 0.0;
  Permutation argmin_perm;
  Permutation argmax_perm;
};

inline constexpr Index kMaxOracleSize = 8;
inline constexpr Index kMaxBipartiteOracleSize = 5;

/// Visits every permutation of {0..n-1} (Heap's algorithm), n! calls.
template <class Visitor>
void for_each_permutation(Index n, Visitor&& visit) {
  Permutation p(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  std::vector<Index> c(static_cast<std::size_t>(n), 0);
  visit(static_cast<const Permutation&>(p));
  Index i = 1;
  while (i < n) {
    auto& ci = c[static_cast<std::size_t>(i)];
    if (ci < i) {
      const auto k = static_cast<std::size_t>(i % 2 == 0 ? 0 : ci);
      std::swap(p[k], p[static_cast<std::size_t>(i)]);
      visit(static_cast<const Permutation&>(p));
      ++ci;
      i = 1;
    } else {
      ci = 0;
      ++i;
    }
  }
}

/// min/max over relabelings pi of (1/n^2) sum_ij A1[pi(i)][pi(j)] A0[i][j].
/// With exclude_diagonal the sum skips i == j and divides by n(n-1).
SharpInterval qap_sharp_dpo(const Matrix& a1, const Matrix& a0,
                            bool exclude_diagonal = false);

/// min/max over pi of the fraction of (i,j) with Y1[pi(i)][pi(j)] - Y0[i][j] <= y.
SharpInterval brute_dte_sharp(const Matrix& y1, const Matrix& y0, double y);

/// Independent row and column relabelings of a rectangular overlap. The
/// returned permutations are the row permutation followed by the column one.
SharpInterval bipartite_sharp_dpo(const Matrix& a1, const Matrix& a0);

}  // namespace specdte
