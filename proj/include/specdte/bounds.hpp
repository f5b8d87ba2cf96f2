#pragma once

// Eigenvalue bounds on the joint distribution of potential outcomes (DPO) and
// on the distribution of treatment effects (DTE), binary cell bounds and
// weighted aggregation across networks.

#include "specdte/interval.hpp"
#include "specdte/spectra.hpp"

#include <functional>
#include <span>
#include <vector>

namespace specdte {

struct BoundsOptions {
  /// Drop i == j pairs: indicator diagonals are zeroed and every branch term
  /// is rescaled from the n^2 to the n(n-1) denominator.
  bool exclude_diagonal = false;
};

/// Branch terms entering the DPO bounds at one threshold pair.
struct DpoTerms {
  double mass1 = 0.0;       // F1(y1), sum of squared eigenvalues
  double mass0 = 0.0;       // F0(y0)
  double sorted = 0.0;      // sorted eigenvalue product
  double antisorted = 0.0;  // antisorted eigenvalue product
};

/// Terms from two indicator-like matrices (any symmetric matrices are
/// accepted; masses are the squared spectral energies).
DpoTerms dpo_terms(const Matrix& a1, const Matrix& a0,
                   const BoundsOptions& opts = {});

/// max(F1+F0-1, antisorted, 0) <= F <= min(F1, F0, sorted), clipped.
IntervalBound dpo_from_terms(const DpoTerms& t);

IntervalBound dpo_bounds(const OutcomeMatrix& y1, const OutcomeMatrix& y0,
                         double t1, double t0, const BoundsOptions& opts = {});

/// Sup/inf of the DTE branch algebra over the finite candidate grid
/// {v, v - delta} x {v - y}.
IntervalBound dte_bounds(const OutcomeMatrix& y1, const OutcomeMatrix& y0,
                         double y, const BoundsOptions& opts = {});

struct DteCurve {
  std::vector<double> grid;
  std::vector<double> lower;
  std::vector<double> upper;
  bool monotonized = false;
};

DteCurve dte_curve(const OutcomeMatrix& y1, const OutcomeMatrix& y0,
                   const std::vector<double>& grid, bool monotonize,
                   const BoundsOptions& opts = {});

/// Bounds on P(Y1 = a, Y0 = b) for binary outcome matrices.
struct CellBounds {
  IntervalBound c11;
  IntervalBound c10;
  IntervalBound c01;
  IntervalBound c00;
  double f1_zero = 0.0;  // P(Y1 = 0)
  double f0_zero = 0.0;  // P(Y0 = 0)
};

CellBounds binary_cell_bounds(const OutcomeMatrix& y1, const OutcomeMatrix& y0,
                              const BoundsOptions& opts = {});

IntervalBound weighted_average_bounds(std::span<const IntervalBound> bounds,
                                      std::span<const double> weights);

namespace detail {

/// Candidate (y1, y0) pairs with y1 - y0 == y used by the DTE bounds.
std::vector<std::pair<double, double>> dte_candidates(const Matrix& y1,
                                                      const Matrix& y0,
                                                      double y);

/// Mass and padded spectra of an indicator matrix, cached by threshold cell.
class IndicatorCache {
 public:
  IndicatorCache(const Matrix& y, bool exclude_diagonal);

  struct Entry {
    double mass = 0.0;
    Vector values;
  };
  const Entry& at(double threshold);
  Index size() const { return y_.rows(); }

 private:
  const Matrix& y_;
  bool exclude_diagonal_;
  std::vector<double> distinct_;
  std::vector<Entry> cache_;
  std::vector<bool> filled_;
};

/// Combines cached arm data into branch terms (padding spectra as needed).
DpoTerms combine_terms(const IndicatorCache::Entry& a1, Index n1,
                       const IndicatorCache::Entry& a0, Index n0,
                       bool exclude_diagonal);

/// Per-candidate inputs to the DTE branch algebra. `cross` is an upper bound
/// on F(y1, y0) tighter than the masses (the sorted product, or its
/// heterogeneity-adjusted analog).
struct DteTerms {
  double mass1 = 0.0;
  double mass0 = 0.0;
  double cross = 0.0;
};

/// lower = max over candidates of max(F1-F0, F1-cross, 0);
/// upper = 1 + min over candidates of min(F1-F0, cross-F0, 0); clipped.
IntervalBound dte_from_candidates(
    const std::vector<std::pair<double, double>>& candidates,
    const std::function<DteTerms(double, double)>& terms_of);

}  // namespace detail

}  // namespace specdte

