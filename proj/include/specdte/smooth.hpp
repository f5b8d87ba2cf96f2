#pragma once

// Kernel-smoothed plug-in estimators: indicator matrices are replaced by
// K((Yhat - y) / h) before the eigen-decomposition, and the STE distribution
// function by an average of K((STE - y) / h).

#include "specdte/bounds.hpp"
#include "specdte/ste.hpp"

#include <optional>
#include <string_view>

namespace specdte {

enum class KernelKind {
  SymmetricQuartic,  // 1 - integrated biweight density on [-1, 1], K(0) = 1/2
  OneSidedQuintic,   // 1 - smootherstep on [0, 1], K(0) = 1
};
std::string_view to_string(KernelKind k);

/// Smooth survival-type kernel: 1 at -infinity, 0 at +infinity, C^2.
class SmoothKernel {
 public:
  explicit SmoothKernel(KernelKind kind) : kind_(kind) {}

  KernelKind kind() const { return kind_; }
  double operator()(double u) const { return evaluate(u); }
  double evaluate(double u) const;
  double derivative(double u) const;
  double second_derivative(double u) const;

 private:
  KernelKind kind_;
};

/// 1.06 * sd(entries) * n^(-1/3); falls back to 1e-3 * range, then 1e-3,
/// for degenerate matrices.
double default_bandwidth(const Matrix& y);

/// max - min of the entries of both matrices (1 when constant).
double entry_scale(const Matrix& a, const Matrix& b);

Matrix smoothed_indicator(const Matrix& y, double threshold, double h,
                          const SmoothKernel& kernel);

double smoothed_eig_product(const OutcomeMatrix& yhat_t, const OutcomeMatrix& yhat_s,
                            double y_t, double y_s, double h,
                            const SmoothKernel& kernel = SmoothKernel(KernelKind::OneSidedQuintic));

IntervalBound smoothed_dpo_bounds(const OutcomeMatrix& yhat1, const OutcomeMatrix& yhat0,
                                  double y1, double y0, double h,
                                  const SmoothKernel& kernel = SmoothKernel(KernelKind::OneSidedQuintic),
                                  const BoundsOptions& opts = {});

/// (1/n^2) sum_ij K((STE(i,j) - y) / h) with STE the stt/stu matrix.
double smoothed_ste_cdf(const OutcomeMatrix& yhat1, const OutcomeMatrix& yhat0,
                        BasisTag basis_arm, double y, double h,
                        const SmoothKernel& kernel = SmoothKernel(KernelKind::SymmetricQuartic));

/// Same, on a precomputed STE matrix.
double smoothed_cdf(const Matrix& ste_entries, double y, double h,
                    const SmoothKernel& kernel = SmoothKernel(KernelKind::SymmetricQuartic));

}  // namespace specdte
