#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace specdte {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised for every domain-level rejection (bad shapes, invalid inputs).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kSymmetryTolerance = 1e-12;

/// Largest |m(i,j) - m(j,i)|.
double max_asymmetry(const Matrix& m);

/// Square symmetric matrix of pairwise outcomes for one treatment arm.
///
/// Inputs asymmetric by at most `sym_tol` relative to the largest entry are
/// averaged with their transpose; anything worse is rejected.
class OutcomeMatrix {
 public:
  OutcomeMatrix() = default;
  explicit OutcomeMatrix(Matrix entries, int arm = 0,
                         double sym_tol = kSymmetryTolerance);

  Index size() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  double operator()(Index i, Index j) const { return entries_(i, j); }
  int arm() const { return arm_; }

 private:
  Matrix entries_;
  int arm_ = 0;
};

/// Eigenpairs of a symmetric matrix. `values` are the matrix eigenvalues
/// divided by `scale` (the matrix dimension), sorted signed-descending.
/// Columns of `vectors` are the matching unit eigenvectors, each with its
/// first nonzero coordinate positive.
struct Spectrum {
  Vector values;
  Matrix vectors;
  Index scale = 0;

  Index size() const { return values.size(); }
  /// Sum of squared normalized eigenvalues (equals sum of squared entries / n^2).
  double energy() const { return values.squaredNorm(); }
};

Spectrum eig_sorted(const Matrix& m);
Spectrum eig_sorted(const OutcomeMatrix& m);

/// Normalized signed-descending eigenvalues only; cheaper than eig_sorted.
Vector eig_values(const Matrix& m);

/// Entrywise 1{Y <= threshold}.
struct IndicatorMatrix {
  Matrix entries;
  double threshold = 0.0;

  Index size() const { return entries.rows(); }
  /// Empirical CDF of the base matrix at the threshold.
  double mass() const { return entries.size() == 0 ? 0.0 : entries.mean(); }
};

IndicatorMatrix indicator(const OutcomeMatrix& y, double threshold);
IndicatorMatrix indicator(const Matrix& y, double threshold);

enum class Pairing { Sorted, Antisorted };

/// Sum of products of two signed-descending eigenvalue lists. Sorted pairs
/// rank r with rank r, antisorted pairs rank r with rank n-r+1.
double eig_dot(const Vector& a, const Vector& b, Pairing pairing);
double eig_dot(const Spectrum& a, const Spectrum& b, Pairing pairing);

/// Zero-pads a signed-descending list to length n, keeping the order.
Vector pad_spectrum(const Vector& values, Index n);

/// Sorted distinct entries of a matrix.
std::vector<double> distinct_values(const Matrix& m);

/// Sorted distinct entries of both matrices, plus a sentinel one unit below
/// the minimum and one unit above the maximum.
std::vector<double> threshold_grid(const OutcomeMatrix& y1,
                                   const OutcomeMatrix& y0);
std::vector<double> threshold_grid(const Matrix& y1, const Matrix& y0);

/// Half of the smallest positive gap between consecutive grid points
/// (0.5 when the grid has fewer than two points).
double half_min_gap(const std::vector<double>& sorted_grid);

}  // namespace specdte
