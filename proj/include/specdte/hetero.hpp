#pragma once

// Row/column heterogeneity: additive decomposition of a symmetric matrix into
// row effects plus a doubly centered residual, the adjusted DPO/DTE bounds
// and the heterogeneity-adjusted spectral treatment effect.

#include "specdte/bounds.hpp"
#include "specdte/ste.hpp"

#include <string_view>

namespace specdte {

struct AdditiveDecomposition {
  Vector alpha;     // row effects, M(i,j) = alpha(i) + alpha(j) + epsilon(i,j)
  Matrix epsilon;   // doubly centered residual
  double alpha_bar = 0.0;
};

AdditiveDecomposition decompose_additive(const Matrix& m);

/// Conservative drops the mass branches for the residual term (they assume
/// binary residuals); PaperExact keeps them.
enum class HeteroMode { Conservative, PaperExact };
std::string_view to_string(HeteroMode mode);

/// Upper and lower bounds on the average product of two row-effect step
/// functions over all relabelings: integrals of the comonotone and the
/// antitone quantile pairings. Arms may differ in length.
struct AlphaPairing {
  double comonotone = 0.0;
  double antitone = 0.0;
};
AlphaPairing alpha_pairing(const Vector& alpha1, const Vector& alpha0);

IntervalBound dpo_bounds_hetero(const OutcomeMatrix& y1, const OutcomeMatrix& y0,
                                double t1, double t0,
                                HeteroMode mode = HeteroMode::Conservative,
                                const BoundsOptions& opts = {});

IntervalBound dte_bounds_hetero(const OutcomeMatrix& y1, const OutcomeMatrix& y0,
                                double y, HeteroMode mode = HeteroMode::Conservative,
                                const BoundsOptions& opts = {});

/// Row-effect differences at matched ranks plus the residual STE in the
/// chosen arm's residual eigenbasis. `basis_arm` must be Treated or Untreated.
SteMatrix ste_hetero(const OutcomeMatrix& y1, const OutcomeMatrix& y0,
                     BasisTag basis_arm);

}  // namespace specdte
