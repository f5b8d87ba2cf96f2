#include "specdte/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace specdte {

namespace {

Matrix prepared_indicator(const Matrix& y, double threshold, bool exclude_diagonal) {
  Matrix a = indicator(y, threshold).entries;
  if (exclude_diagonal) a.diagonal().setZero();
  return a;
}

double diagonal_scale(Index n, bool exclude_diagonal) {
  if (!exclude_diagonal) return 1.0;
  if (n < 2) throw Error("exclude_diagonal requires at least two agents");
  return static_cast<double>(n) / static_cast<double>(n - 1);
}

void require_binary(const OutcomeMatrix& m, const char* name) {
  const Matrix& e = m.entries();
  for (Index j = 0; j < e.cols(); ++j)
    for (Index i = 0; i < e.rows(); ++i)
      if (e(i, j) != 0.0 && e(i, j) != 1.0) {
        std::ostringstream os;
        os << "binary_cell_bounds: " << name << " has non-binary entry at (" << i
           << "," << j << ")";
        throw Error(os.str());
      }
}

}  // namespace

namespace detail {

IndicatorCache::IndicatorCache(const Matrix& y, bool exclude_diagonal)
    : y_(y),
      exclude_diagonal_(exclude_diagonal),
      distinct_(distinct_values(y)),
      cache_(distinct_.size() + 1),
      filled_(distinct_.size() + 1, false) {
  diagonal_scale(y.rows(), exclude_diagonal);
}

const IndicatorCache::Entry& IndicatorCache::at(double threshold) {
  // The indicator only changes when the threshold crosses a distinct entry.
  const auto cell = static_cast<std::size_t>(
      std::upper_bound(distinct_.begin(), distinct_.end(), threshold) -
      distinct_.begin());
  if (!filled_[cell]) {
    const Index n = y_.rows();
    const Matrix a = prepared_indicator(y_, threshold, exclude_diagonal_);
    Entry e;
    e.values = eig_values(a);
    e.mass = a.sum() / static_cast<double>(n * n) *
             diagonal_scale(n, exclude_diagonal_);
    cache_[cell] = std::move(e);
    filled_[cell] = true;
  }
  return cache_[cell];
}

DpoTerms combine_terms(const IndicatorCache::Entry& a1, Index n1,
                       const IndicatorCache::Entry& a0, Index n0,
                       bool exclude_diagonal) {
  const Index n = std::max(n1, n0);
  const Vector l1 = pad_spectrum(a1.values, n);
  const Vector l0 = pad_spectrum(a0.values, n);
  const double s = std::sqrt(diagonal_scale(n1, exclude_diagonal) *
                             diagonal_scale(n0, exclude_diagonal));
  DpoTerms t;
  t.mass1 = a1.mass;
  t.mass0 = a0.mass;
  t.sorted = s * eig_dot(l1, l0, Pairing::Sorted);
  t.antisorted = s * eig_dot(l1, l0, Pairing::Antisorted);
  return t;
}

std::vector<std::pair<double, double>> dte_candidates(const Matrix& y1,
                                                      const Matrix& y0,
                                                      double y) {
  std::vector<double> v = threshold_grid(y1, y1);
  for (double t : threshold_grid(y0, y0)) v.push_back(t + y);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  const double delta = half_min_gap(v);

  std::vector<std::pair<double, double>> out;
  out.reserve(2 * v.size());
  for (double t : v) {
    out.emplace_back(t, t - y);
    out.emplace_back(t - delta, t - delta - y);
  }
  return out;
}

IntervalBound dte_from_candidates(
    const std::vector<std::pair<double, double>>& candidates,
    const std::function<DteTerms(double, double)>& terms_of) {
  double lower = 0.0;
  Binding lower_tag = Binding::Zero;
  double upper_gap = 0.0;
  Binding upper_tag = Binding::One;
  for (const auto& [t1, t0] : candidates) {
    const DteTerms t = terms_of(t1, t0);
    const double diff = t.mass1 - t.mass0;
    if (diff > lower) {
      lower = diff;
      lower_tag = Binding::MassDifference;
    }
    if (t.mass1 - t.cross > lower) {
      lower = t.mass1 - t.cross;
      lower_tag = Binding::CrossProduct;
    }
    if (diff < upper_gap) {
      upper_gap = diff;
      upper_tag = Binding::MassDifference;
    }
    if (t.cross - t.mass0 < upper_gap) {
      upper_gap = t.cross - t.mass0;
      upper_tag = Binding::CrossProduct;
    }
  }
  IntervalBound b;
  b.lower = lower;
  b.binding_lower = lower_tag;
  b.upper = 1.0 + upper_gap;
  b.binding_upper = upper_tag;
  return clip_unit(b);
}

}  // namespace detail

DpoTerms dpo_terms(const Matrix& a1, const Matrix& a0, const BoundsOptions& opts) {
  detail::IndicatorCache::Entry e1;
  detail::IndicatorCache::Entry e0;
  Matrix m1 = a1;
  Matrix m0 = a0;
  if (opts.exclude_diagonal) {
    m1.diagonal().setZero();
    m0.diagonal().setZero();
  }
  e1.values = eig_values(m1);
  e0.values = eig_values(m0);
  e1.mass = e1.values.squaredNorm() * diagonal_scale(m1.rows(), opts.exclude_diagonal);
  e0.mass = e0.values.squaredNorm() * diagonal_scale(m0.rows(), opts.exclude_diagonal);
  return detail::combine_terms(e1, m1.rows(), e0, m0.rows(), opts.exclude_diagonal);
}

IntervalBound dpo_from_terms(const DpoTerms& t) {
  IntervalBound b;
  b.lower = 0.0;
  b.binding_lower = Binding::Zero;
  const double sum = t.mass1 + t.mass0 - 1.0;
  if (sum > b.lower) {
    b.lower = sum;
    b.binding_lower = Binding::MassSum;
  }
  if (t.antisorted > b.lower) {
    b.lower = t.antisorted;
    b.binding_lower = Binding::Antisorted;
  }
  b.upper = t.mass1;
  b.binding_upper = Binding::Mass1;
  if (t.mass0 < b.upper) {
    b.upper = t.mass0;
    b.binding_upper = Binding::Mass0;
  }
  if (t.sorted < b.upper) {
    b.upper = t.sorted;
    b.binding_upper = Binding::SortedProduct;
  }
  return clip_unit(b);
}

IntervalBound dpo_bounds(const OutcomeMatrix& y1, const OutcomeMatrix& y0,
                         double t1, double t0, const BoundsOptions& opts) {
  detail::IndicatorCache c1(y1.entries(), opts.exclude_diagonal);
  detail::IndicatorCache c0(y0.entries(), opts.exclude_diagonal);
  return dpo_from_terms(detail::combine_terms(c1.at(t1), y1.size(), c0.at(t0),
                                              y0.size(), opts.exclude_diagonal));
}

IntervalBound dte_bounds(const OutcomeMatrix& y1, const OutcomeMatrix& y0,
                         double y, const BoundsOptions& opts) {
  if (!std::isfinite(y)) throw Error("dte_bounds: y must be finite");
  detail::IndicatorCache c1(y1.entries(), opts.exclude_diagonal);
  detail::IndicatorCache c0(y0.entries(), opts.exclude_diagonal);
  const auto candidates = detail::dte_candidates(y1.entries(), y0.entries(), y);
  return detail::dte_from_candidates(candidates, [&](double t1, double t0) {
    const DpoTerms t = detail::combine_terms(c1.at(t1), y1.size(), c0.at(t0),
                                             y0.size(), opts.exclude_diagonal);
    return detail::DteTerms{t.mass1, t.mass0, t.sorted};
  });
}

DteCurve dte_curve(const OutcomeMatrix& y1, const OutcomeMatrix& y0,
                   const std::vector<double>& grid, bool monotonize,
                   const BoundsOptions& opts) {
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw Error("dte_curve: grid must be sorted ascending");
  DteCurve c;
  c.grid = grid;
  c.monotonized = monotonize;
  c.lower.reserve(grid.size());
  c.upper.reserve(grid.size());
  for (double y : grid) {
    const IntervalBound b = dte_bounds(y1, y0, y, opts);
    c.lower.push_back(b.lower);
    c.upper.push_back(b.upper);
  }
  if (monotonize && !grid.empty()) {
    for (std::size_t k = 1; k < grid.size(); ++k)
      c.lower[k] = std::max(c.lower[k], c.lower[k - 1]);
    for (std::size_t k = grid.size() - 1; k-- > 0;)
      c.upper[k] = std::min(c.upper[k], c.upper[k + 1]);
  }
  return c;
}

CellBounds binary_cell_bounds(const OutcomeMatrix& y1, const OutcomeMatrix& y0,
                              const BoundsOptions& opts) {
  require_binary(y1, "Y1");
  require_binary(y0, "Y0");
  detail::IndicatorCache c1(y1.entries(), opts.exclude_diagonal);
  detail::IndicatorCache c0(y0.entries(), opts.exclude_diagonal);
  const auto& e1 = c1.at(0.0);
  const auto& e0 = c0.at(0.0);
  const IntervalBound f00 = dpo_from_terms(detail::combine_terms(
      e1, y1.size(), e0, y0.size(), opts.exclude_diagonal));

  CellBounds out;
  out.f1_zero = e1.mass;
  out.f0_zero = e0.mass;
  out.c00 = f00;
  auto affine = [&](double offset, double sign) {
    IntervalBound b;
    const double a = offset + sign * f00.lower;
    const double c = offset + sign * f00.upper;
    b.lower = std::min(a, c);
    b.upper = std::max(a, c);
    b.binding_lower = Binding::Derived;
    b.binding_upper = Binding::Derived;
    return clip_unit(b);
  };
  out.c01 = affine(e1.mass, -1.0);
  out.c10 = affine(e0.mass, -1.0);
  out.c11 = affine(1.0 - e1.mass - e0.mass, 1.0);
  return out;
}

IntervalBound weighted_average_bounds(std::span<const IntervalBound> bounds,
                                      std::span<const double> weights) {
  if (bounds.size() != weights.size())
    throw Error("weighted_average_bounds: bounds and weights differ in length");
  if (bounds.empty()) throw Error("weighted_average_bounds: empty input");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw Error("weighted_average_bounds: weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw Error("weighted_average_bounds: weights sum to zero");
  IntervalBound out;
  out.lower = 0.0;
  out.upper = 0.0;
  for (std::size_t k = 0; k < bounds.size(); ++k) {
    out.lower += weights[k] / total * bounds[k].lower;
    out.upper += weights[k] / total * bounds[k].upper;
  }
  out.binding_lower = Binding::Derived;
  out.binding_upper = Binding::Derived;
  return out;
}

}  // namespace specdte
