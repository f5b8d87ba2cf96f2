#pragma once

// Single-randomization baselines for vector outcomes: Frechet-Hoeffding and
// Makarov bounds, quantile treatment effects, and binned CATE samples.

#include "specdte/interval.hpp"
#include "specdte/spectra.hpp"

#include <vector>

namespace specdte {

/// One outcome per agent. Nonempty, finite.
class OutcomeVector {
 public:
  explicit OutcomeVector(std::vector<double> values, int arm = 0);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& sorted() const { return sorted_; }
  std::size_t size() const { return values_.size(); }
  int arm() const { return arm_; }

  /// Right-continuous empirical CDF.
  double cdf(double y) const;
  /// Left-continuous inverse: inf{y : u <= F(y)}, u in (0,1].
  double quantile(double u) const;

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
  int arm_ = 0;
};

IntervalBound fh_bounds(double f1_at_y1, double f0_at_y0);

IntervalBound makarov_bounds(const OutcomeVector& y1, const OutcomeVector& y0,
                             double y);

double qte(const OutcomeVector& y1, const OutcomeVector& y0, double u);

struct CateCell {
  int bin_row = 0;
  int bin_col = 0;
  double value = 0.0;
  double weight = 0.0;
};

/// Per ordered bin pair: mean treated outcome minus mean untreated outcome,
/// weighted by the number of treated entries in the cell. Diagonal (i == i)
/// entries are retained.
std::vector<CateCell> binned_cate(const OutcomeMatrix& y1,
                                  const OutcomeMatrix& y0,
                                  const std::vector<int>& bins1,
                                  const std::vector<int>& bins0);

}  // namespace specdte
