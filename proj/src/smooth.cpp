#include "specdte/smooth.hpp"

#include <algorithm>
#include <cmath>

namespace specdte {

std::string_view to_string(KernelKind k) {
  return k == KernelKind::SymmetricQuartic ? "symmetricQuartic" : "oneSidedQuintic";
}

double SmoothKernel::evaluate(double u) const {
  if (kind_ == KernelKind::SymmetricQuartic) {
    if (u <= -1.0) return 1.0;
    if (u >= 1.0) return 0.0;
    // Factored so both tails stay inside [0,1] under rounding.
    const double w = 1.0 - u;
    return std::min(1.0, w * w * w * (8.0 + u * (9.0 + 3.0 * u)) / 16.0);
  }
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  const double w = 1.0 - u;
  return std::min(1.0, w * w * w * (10.0 + w * (-15.0 + 6.0 * w)));
}

double SmoothKernel::derivative(double u) const {
  if (kind_ == KernelKind::SymmetricQuartic) {
    if (u <= -1.0 || u >= 1.0) return 0.0;
    const double w = 1.0 - u * u;
    return -(15.0 / 16.0) * w * w;
  }
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double w = 1.0 - u;
  return -30.0 * u * u * w * w;
}

double SmoothKernel::second_derivative(double u) const {
  if (kind_ == KernelKind::SymmetricQuartic) {
    if (u <= -1.0 || u >= 1.0) return 0.0;
    return (15.0 / 4.0) * u * (1.0 - u * u);
  }
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return -60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
}

double default_bandwidth(const Matrix& y) {
  const double n = static_cast<double>(y.rows());
  const double mean = y.mean();
  const double var = (y.array() - mean).square().mean();
  const double sd = std::sqrt(var);
  if (sd > 0.0) return 1.06 * sd * std::pow(n, -1.0 / 3.0);
  const double range = y.maxCoeff() - y.minCoeff();
  return range > 0.0 ? 1e-3 * range : 1e-3;
}

double entry_scale(const Matrix& a, const Matrix& b) {
  const double hi = std::max(a.maxCoeff(), b.maxCoeff());
  const double lo = std::min(a.minCoeff(), b.minCoeff());
  return hi > lo ? hi - lo : 1.0;
}

Matrix smoothed_indicator(const Matrix& y, double threshold, double h,
                          const SmoothKernel& kernel) {
  if (!(h > 0.0)) throw Error("bandwidth h must be positive");
  return y.unaryExpr([&](double v) { return kernel((v - threshold) / h); });
}

double smoothed_eig_product(const OutcomeMatrix& yhat_t, const OutcomeMatrix& yhat_s,
                            double y_t, double y_s, double h,
                            const SmoothKernel& kernel) {
  const Vector lt = eig_values(smoothed_indicator(yhat_t.entries(), y_t, h, kernel));
  const Vector ls = eig_values(smoothed_indicator(yhat_s.entries(), y_s, h, kernel));
  const Index n = std::max(lt.size(), ls.size());
  return eig_dot(pad_spectrum(lt, n), pad_spectrum(ls, n), Pairing::Sorted);
}

IntervalBound smoothed_dpo_bounds(const OutcomeMatrix& yhat1, const OutcomeMatrix& yhat0,
                                  double y1, double y0, double h,
                                  const SmoothKernel& kernel, const BoundsOptions& opts) {
  const Matrix a1 = smoothed_indicator(yhat1.entries(), y1, h, kernel);
  const Matrix a0 = smoothed_indicator(yhat0.entries(), y0, h, kernel);
  return dpo_from_terms(dpo_terms(a1, a0, opts));
}

double smoothed_cdf(const Matrix& ste_entries, double y, double h,
                    const SmoothKernel& kernel) {
  if (!(h > 0.0)) throw Error("bandwidth h must be positive");
  double acc = 0.0;
  for (Index j = 0; j < ste_entries.cols(); ++j)
    for (Index i = 0; i < ste_entries.rows(); ++i)
      acc += kernel((ste_entries(i, j) - y) / h);
  return std::clamp(acc / static_cast<double>(ste_entries.size()), 0.0, 1.0);
}

double smoothed_ste_cdf(const OutcomeMatrix& yhat1, const OutcomeMatrix& yhat0,
                        BasisTag basis_arm, double y, double h,
                        const SmoothKernel& kernel) {
  if (!(h > 0.0)) throw Error("bandwidth h must be positive");
  const SteMatrix s = basis_arm == BasisTag::Untreated ? stu(yhat1, yhat0)
                                                       : stt(yhat1, yhat0);
  return smoothed_cdf(s.entries, y, h, kernel);
}

}  // namespace specdte
