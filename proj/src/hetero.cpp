#include "specdte/hetero.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace specdte {

std::string_view to_string(HeteroMode mode) {
  return mode == HeteroMode::Conservative ? "conservative" : "paperExact";
}

AdditiveDecomposition decompose_additive(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error("decompose_additive: matrix must be square and nonempty");
  AdditiveDecomposition d;
  const double grand = m.mean();
  d.alpha = m.rowwise().mean().array() - 0.5 * grand;
  d.epsilon = m;
  d.epsilon.colwise() -= d.alpha;
  d.epsilon.rowwise() -= d.alpha.transpose();
  d.alpha_bar = d.alpha.mean();
  return d;
}

AlphaPairing alpha_pairing(const Vector& alpha1, const Vector& alpha0) {
  std::vector<double> a(alpha1.data(), alpha1.data() + alpha1.size());
  std::vector<double> b(alpha0.data(), alpha0.data() + alpha0.size());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());

  // Integral over [0,1] of two step functions with n1 and n0 equal pieces,
  // either both increasing (comonotone) or one reversed (antitone).
  auto integrate = [](const std::vector<double>& x, const std::vector<double>& y,
                      bool reverse_y) {
    const auto n1 = static_cast<long long>(x.size());
    const auto n0 = static_cast<long long>(y.size());
    // Breakpoints k/n1 and l/n0 merged on the common denominator n1*n0.
    long long i = 0;
    long long j = 0;
    long long pos = 0;
    const long long total = n1 * n0;
    double acc = 0.0;
    while (pos < total) {
      const long long next_i = (i + 1) * n0;
      const long long next_j = (j + 1) * n1;
      const long long next = std::min(next_i, next_j);
      const double yv = reverse_y ? y[static_cast<std::size_t>(n0 - 1 - j)]
                                  : y[static_cast<std::size_t>(j)];
      acc += static_cast<double>(next - pos) * x[static_cast<std::size_t>(i)] * yv;
      pos = next;
      if (next == next_i) ++i;
      if (next == next_j) ++j;
    }
    return acc / static_cast<double>(total);
  };
  return {integrate(a, b, false), integrate(a, b, true)};
}

namespace {

double diagonal_scale(Index n, bool exclude) {
  if (!exclude) return 1.0;
  if (n < 2) throw Error("exclude_diagonal requires at least two agents");
  return static_cast<double>(n) / static_cast<double>(n - 1);
}

struct HeteroArm {
  AdditiveDecomposition dec;
  Vector eps_values;
  double mass = 0.0;  // indicator mass F_t
  Index n = 0;
};

class HeteroCache {
 public:
  HeteroCache(const Matrix& y, bool exclude)
      : y_(y), exclude_(exclude), distinct_(distinct_values(y)),
        cache_(distinct_.size() + 1), filled_(distinct_.size() + 1, false) {}

  const HeteroArm& at(double threshold) {
    const auto cell = static_cast<std::size_t>(
        std::upper_bound(distinct_.begin(), distinct_.end(), threshold) -
        distinct_.begin());
    if (!filled_[cell]) {
      Matrix a = indicator(y_, threshold).entries;
      if (exclude_) a.diagonal().setZero();
      HeteroArm arm;
      arm.n = a.rows();
      arm.mass = a.mean() * diagonal_scale(arm.n, exclude_);
      arm.dec = decompose_additive(a);
      arm.eps_values = eig_values(arm.dec.epsilon);
      cache_[cell] = std::move(arm);
      filled_[cell] = true;
    }
    return cache_[cell];
  }

 private:
  const Matrix& y_;
  bool exclude_;
  std::vector<double> distinct_;
  std::vector<HeteroArm> cache_;
  std::vector<bool> filled_;
};

IntervalBound hetero_from_arms(const HeteroArm& a1, const HeteroArm& a0,
                               HeteroMode mode, bool exclude) {
  const Index n = std::max(a1.n, a0.n);
  const Vector l1 = pad_spectrum(a1.eps_values, n);
  const Vector l0 = pad_spectrum(a0.eps_values, n);
  const double s = std::sqrt(diagonal_scale(a1.n, exclude) * diagonal_scale(a0.n, exclude));

  const AlphaPairing ap = alpha_pairing(a1.dec.alpha, a0.dec.alpha);
  const double cross_mean = 2.0 * a1.dec.alpha_bar * a0.dec.alpha_bar;
  const double alpha_upper = s * (2.0 * ap.comonotone + cross_mean);
  const double alpha_lower = s * (2.0 * ap.antitone + cross_mean);

  const double sorted = s * eig_dot(l1, l0, Pairing::Sorted);
  const double antisorted = s * eig_dot(l1, l0, Pairing::Antisorted);

  IntervalBound b;
  double eps_upper = sorted;
  double eps_lower = antisorted;
  b.binding_upper = Binding::SortedProduct;
  b.binding_lower = Binding::Antisorted;
  if (mode == HeteroMode::PaperExact) {
    const double m1 = s * l1.squaredNorm();
    const double m0 = s * l0.squaredNorm();
    if (m1 < eps_upper) {
      eps_upper = m1;
      b.binding_upper = Binding::Mass1;
    }
    if (m0 < eps_upper) {
      eps_upper = m0;
      b.binding_upper = Binding::Mass0;
    }
    if (m1 + m0 - 1.0 > eps_lower) {
      eps_lower = m1 + m0 - 1.0;
      b.binding_lower = Binding::MassSum;
    }
    if (0.0 > eps_lower) {
      eps_lower = 0.0;
      b.binding_lower = Binding::Zero;
    }
  }
  b.upper = alpha_upper + eps_upper;
  b.lower = alpha_lower + eps_lower;
  return clip_unit(b);
}

}  // namespace

IntervalBound dpo_bounds_hetero(const OutcomeMatrix& y1, const OutcomeMatrix& y0,
                                double t1, double t0, HeteroMode mode,
                                const BoundsOptions& opts) {
  HeteroCache c1(y1.entries(), opts.exclude_diagonal);
  HeteroCache c0(y0.entries(), opts.exclude_diagonal);
  return hetero_from_arms(c1.at(t1), c0.at(t0), mode, opts.exclude_diagonal);
}

IntervalBound dte_bounds_hetero(const OutcomeMatrix& y1, const OutcomeMatrix& y0,
                                double y, HeteroMode mode, const BoundsOptions& opts) {
  if (!std::isfinite(y)) throw Error("dte_bounds_hetero: y must be finite");
  HeteroCache c1(y1.entries(), opts.exclude_diagonal);
  HeteroCache c0(y0.entries(), opts.exclude_diagonal);
  const auto candidates = detail::dte_candidates(y1.entries(), y0.entries(), y);
  return detail::dte_from_candidates(candidates, [&](double t1, double t0) {
    const HeteroArm& a1 = c1.at(t1);
    const HeteroArm& a0 = c0.at(t0);
    // The unclipped upper DPO bound; clipping at 1 never tightens the DTE terms.
    IntervalBound raw = hetero_from_arms(a1, a0, mode, opts.exclude_diagonal);
    return detail::DteTerms{a1.mass, a0.mass, raw.upper};
  });
}

SteMatrix ste_hetero(const OutcomeMatrix& y1, const OutcomeMatrix& y0,
                     BasisTag basis_arm) {
  if (y1.size() != y0.size()) throw Error("ste_hetero: arms must have equal size");
  if (basis_arm == BasisTag::Custom)
    throw Error("ste_hetero: basis arm must be treated or untreated");
  const Index n = y1.size();
  const AdditiveDecomposition d1 = decompose_additive(y1.entries());
  const AdditiveDecomposition d0 = decompose_additive(y0.entries());
  const bool treated = basis_arm == BasisTag::Treated;
  const Vector& basis_alpha = treated ? d1.alpha : d0.alpha;

  // Descending rank of each agent in the basis arm's row effects, ties by index.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return basis_alpha(a) > basis_alpha(b);
  });
  std::vector<double> s1(d1.alpha.data(), d1.alpha.data() + n);
  std::vector<double> s0(d0.alpha.data(), d0.alpha.data() + n);
  std::sort(s1.begin(), s1.end(), std::greater<>());
  std::sort(s0.begin(), s0.end(), std::greater<>());
  Vector shift(n);
  for (Index r = 0; r < n; ++r) {
    const auto rr = static_cast<std::size_t>(r);
    shift(order[rr]) = s1[rr] - s0[rr];
  }

  const Spectrum e1 = eig_sorted(d1.epsilon);
  const Spectrum e0 = eig_sorted(d0.epsilon);
  const Matrix& basis = treated ? e1.vectors : e0.vectors;
  const Vector diff = (e1.values - e0.values) * static_cast<double>(n);

  SteMatrix out;
  out.entries = basis * diff.asDiagonal() * basis.transpose();
  out.entries = 0.5 * (out.entries + out.entries.transpose());
  out.entries.colwise() += shift;
  out.entries.rowwise() += shift.transpose();
  out.basis_tag = basis_arm;
  out.eigengap_warning =
      detail::has_small_eigengap(treated ? e1.values : e0.values, n);
  return out;
}

}  // namespace specdte
