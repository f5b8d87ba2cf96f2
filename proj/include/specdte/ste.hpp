#pragma once

// Spectral treatment effects: eigenvalue differences expanded in an
// orthonormal basis, the matrix lift, rank-invariance diagnostics, the
// Hoffman-Wielandt gap and doubly stochastic counterfactual weights.

#include "specdte/spectra.hpp"

#include <functional>
#include <string_view>
#include <vector>

namespace specdte {

enum class BasisTag { Treated, Untreated, Custom };
std::string_view to_string(BasisTag tag);

struct SteMatrix {
  Matrix entries;
  BasisTag basis_tag = BasisTag::Custom;
  /// Set when the basis arm has (numerically) repeated eigenvalues, so the
  /// eigenvector choice within a cluster is solver dependent.
  bool eigengap_warning = false;
};

/// Minimum gap between consecutive eigenvalues is below this, relative to
/// max(1, largest |eigenvalue|) at matrix scale.
inline constexpr double kEigengapTolerance = 1e-8;

/// sum_r (sigma_r1 - sigma_r0) * n * b_r b_r', b_r the columns of `basis`.
SteMatrix ste(const OutcomeMatrix& y1, const OutcomeMatrix& y0, const Matrix& basis);

/// ste in the treated (stt) or untreated (stu) eigenbasis.
SteMatrix stt(const OutcomeMatrix& y1, const OutcomeMatrix& y0);
SteMatrix stu(const OutcomeMatrix& y1, const OutcomeMatrix& y0);

/// W = sum_r phi_r1 phi_r0'; stt == Y1 - W Y0 W'.
Matrix counterfactual_weights(const OutcomeMatrix& y1, const OutcomeMatrix& y0);

/// sum_r g(n sigma_r) phi_r phi_r'. Rejects g that is non-finite at any
/// eigenvalue.
Matrix matrix_lift(const std::function<double(double)>& g, const Matrix& y);
OutcomeMatrix matrix_lift(const std::function<double(double)>& g,
                          const OutcomeMatrix& y);

struct RankInvarianceReport {
  bool invariant = false;
  /// Largest sine of the principal angle between an eigenspace of Y0 and the
  /// Y1 eigenspace at the same ranks.
  double max_eigenvector_misalignment = 0.0;
  /// Largest increase of the Y1 Rayleigh quotient along Y0's descending
  /// eigenvalues, relative to the Y1 spectral scale.
  double g_monotonicity_violation = 0.0;
  bool eigengap_warning = false;
};

RankInvarianceReport rank_invariance_check(const OutcomeMatrix& y1,
                                           const OutcomeMatrix& y0,
                                           double tol = 1e-8);

struct HwGap {
  double lhs = 0.0;  // sum_r (sigma_r1 - sigma_r0)^2
  double rhs = 0.0;  // ||Y1 - Y0||_F^2 / n^2
};

HwGap hw_gap(const OutcomeMatrix& y1, const OutcomeMatrix& y0);

struct WeightsResult {
  Matrix weights;                     // doubly stochastic D
  double objective = 0.0;             // ||Y1 - D Y0 D'||_F^2
  std::vector<double> objective_trace;  // objective after each iteration, trace[0] at D = I
  int iterations = 0;
  bool converged = false;
};

double weights_objective(const Matrix& y1, const Matrix& y0, const Matrix& d);

/// Frank-Wolfe over the Birkhoff polytope starting from the identity: each
/// step moves toward the permutation minimizing the linearized objective,
/// with an exact line search on the quartic step polynomial.
WeightsResult non_extrapolative_weights(const OutcomeMatrix& y1,
                                        const OutcomeMatrix& y0,
                                        int max_iter = 500, double tol = 1e-8);

namespace detail {
bool has_small_eigengap(const Vector& normalized_values, Index n);
}

}  // namespace specdte
