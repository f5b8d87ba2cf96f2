#pragma once

// Randomization tests of the global null of no treatment effect, built on the
// squared distance between thresholded spectra of two outcome matrices.

#include "specdte/bipartite.hpp"
#include "specdte/random.hpp"
#include "specdte/spectra.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace specdte {

enum class Design { MatchedPair, Conjunctive, Censored };
std::string_view to_string(Design d);

struct TestReport {
  double statistic = 0.0;
  std::vector<double> resampled;
  double p_value = 1.0;  // (1 + #{resampled >= statistic}) / (A + 1)
  std::uint64_t seed = 0;
  Design design = Design::MatchedPair;
  /// Draws rejected (empty or too-small groups) and redrawn.
  int redraws = 0;
};

inline constexpr int kMaxRedraws = 100;

/// sup over y in `grid` of sum_r (lambda_r1(y) - lambda_r0(y))^2 with each
/// arm's indicator eigenvalues normalized by its own size, zero-padded.
double eig_distance_stat(const Matrix& m1, const Matrix& m0,
                         const std::vector<double>& grid);

double p_value_from(double statistic, const std::vector<double>& resampled);

TestReport matched_pair_test(const std::vector<std::pair<OutcomeMatrix, OutcomeMatrix>>& pairs,
                             int resamples, std::uint64_t seed);

/// Labels are 1 or 2 per buyer (rows) and seller (columns).
TestReport conjunctive_test(const BipartiteMatrix& y, const std::vector<int>& buyer_groups,
                            const std::vector<int>& seller_groups, double pi,
                            int resamples, std::uint64_t seed);

TestReport censored_test(const OutcomeMatrix& y1, const OutcomeMatrix& y0, double pi,
                         int resamples, std::uint64_t seed);

/// Conjunctive statistic for one labeling (used by the test and exposed for
/// recomputation checks).
double conjunctive_statistic(const BipartiteMatrix& y, const std::vector<int>& buyer_groups,
                             const std::vector<int>& seller_groups);

}  // namespace specdte
