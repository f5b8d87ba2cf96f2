#pragma once

// Two-population outcomes (rows and columns are different agent sets) are
// embedded as a symmetric block matrix [[0, B], [B', 0]].

#include "specdte/interval.hpp"
#include "specdte/spectra.hpp"

namespace specdte {

class BipartiteMatrix {
 public:
  BipartiteMatrix() = default;
  explicit BipartiteMatrix(Matrix entries);

  Index rows() const { return entries_.rows(); }
  Index cols() const { return entries_.cols(); }
  const Matrix& entries() const { return entries_; }

 private:
  Matrix entries_;
};

OutcomeMatrix symmetrize(const BipartiteMatrix& b);

/// Maps a bound on the symmetrized DPO back to the rows x cols scale. The
/// zero diagonal blocks contribute (rows^2 + cols^2) deterministic cells
/// that fall below the thresholds exactly when both are >= 0.
IntervalBound bipartite_cell_unmap(const IntervalBound& symmetrized, double t1,
                                   double t0, Index rows, Index cols);

}  // namespace specdte
