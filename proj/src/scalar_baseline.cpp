#include "specdte/scalar_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace specdte {

std::string_view to_string(Binding b) {
  switch (b) {
    case Binding::None: return "none";
    case Binding::Zero: return "zero";
    case Binding::One: return "one";
    case Binding::MassSum: return "binarySum";
    case Binding::Antisorted: return "antisorted";
    case Binding::Mass1: return "mass1";
    case Binding::Mass0: return "mass0";
    case Binding::SortedProduct: return "sortedProduct";
    case Binding::MassDifference: return "massDifference";
    case Binding::CrossProduct: return "crossProduct";
    case Binding::Derived: return "derived";
  }
  return "none";
}

IntervalBound clip_unit(IntervalBound b) {
  const double lo = std::clamp(b.lower, 0.0, 1.0);
  const double hi = std::clamp(b.upper, 0.0, 1.0);
  if (lo != b.lower || hi != b.upper) b.clipped = true;
  b.lower = lo;
  b.upper = std::max(hi, lo);
  return b;
}

OutcomeVector::OutcomeVector(std::vector<double> values, int arm)
    : values_(std::move(values)), arm_(arm) {
  if (values_.empty()) throw Error("outcome vector must be nonempty");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error("outcome vector has a non-finite value");
  sorted_ = values_;
  std::sort(sorted_.begin(), sorted_.end());
}

double OutcomeVector::cdf(double y) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), y);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

double OutcomeVector::quantile(double u) const {
  if (!(u > 0.0 && u <= 1.0)) throw Error("quantile level must lie in (0,1]");
  const auto n = static_cast<double>(sorted_.size());
  auto k = static_cast<std::size_t>(std::ceil(u * n));
  // Guard against u*n rounding just above an integer.
  if (k > 1 && static_cast<double>(k - 1) / n >= u) --k;
  k = std::clamp<std::size_t>(k, 1, sorted_.size());
  return sorted_[k - 1];
}

IntervalBound fh_bounds(double f1, double f0) {
  if (!(f1 >= 0.0 && f1 <= 1.0) || !(f0 >= 0.0 && f0 <= 1.0))
    throw Error("fh_bounds: marginal probabilities must lie in [0,1]");
  IntervalBound b;
  const double sum = f1 + f0 - 1.0;
  if (sum > 0.0) {
    b.lower = sum;
    b.binding_lower = Binding::MassSum;
  } else {
    b.lower = 0.0;
    b.binding_lower = Binding::Zero;
  }
  if (f1 <= f0) {
    b.upper = f1;
    b.binding_upper = Binding::Mass1;
  } else {
    b.upper = f0;
    b.binding_upper = Binding::Mass0;
  }
  return b;
}

IntervalBound makarov_bounds(const OutcomeVector& y1, const OutcomeVector& y0,
                             double y) {
  std::vector<double> grid(y1.sorted());
  for (double v : y0.sorted()) grid.push_back(v + y);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  grid.insert(grid.begin(), grid.front() - 1.0);
  grid.push_back(grid.back() + 1.0);
  const double delta = half_min_gap(grid);

  double sup_lower = 0.0;
  double inf_upper = 0.0;
  auto visit = [&](double t1) {
    const double diff = y1.cdf(t1) - y0.cdf(t1 - y);
    sup_lower = std::max(sup_lower, diff);
    inf_upper = std::min(inf_upper, diff);
  };
  for (double v : grid) {
    visit(v);
    visit(v - delta);
  }

  IntervalBound b;
  b.lower = sup_lower;
  b.binding_lower = sup_lower > 0.0 ? Binding::MassDifference : Binding::Zero;
  b.upper = 1.0 + inf_upper;
  b.binding_upper = inf_upper < 0.0 ? Binding::MassDifference : Binding::One;
  return clip_unit(b);
}

double qte(const OutcomeVector& y1, const OutcomeVector& y0, double u) {
  if (!(u > 0.0 && u <= 1.0)) throw Error("qte: u must lie in (0,1]");
  return y1.quantile(u) - y0.quantile(u);
}

std::vector<CateCell> binned_cate(const OutcomeMatrix& y1,
                                  const OutcomeMatrix& y0,
                                  const std::vector<int>& bins1,
                                  const std::vector<int>& bins0) {
  if (static_cast<Index>(bins1.size()) != y1.size() ||
      static_cast<Index>(bins0.size()) != y0.size())
    throw Error("binned_cate: label vector length does not match matrix size");

  const std::set<int> set1(bins1.begin(), bins1.end());
  const std::set<int> set0(bins0.begin(), bins0.end());
  for (int b : set1)
    if (!set0.count(b)) {
      std::ostringstream os;
      os << "binned_cate: bin " << b << " present in the treated arm only";
      throw Error(os.str());
    }
  for (int b : set0)
    if (!set1.count(b)) {
      std::ostringstream os;
      os << "binned_cate: bin " << b << " present in the untreated arm only";
      throw Error(os.str());
    }

  struct Acc {
    double sum = 0.0;
    double count = 0.0;
  };
  auto accumulate = [](const OutcomeMatrix& m, const std::vector<int>& bins) {
    std::map<std::pair<int, int>, Acc> cells;
    for (Index i = 0; i < m.size(); ++i)
      for (Index j = 0; j < m.size(); ++j) {
        auto& a = cells[{bins[static_cast<std::size_t>(i)],
                         bins[static_cast<std::size_t>(j)]}];
        a.sum += m(i, j);
        a.count += 1.0;
      }
    return cells;
  };
  const auto c1 = accumulate(y1, bins1);
  const auto c0 = accumulate(y0, bins0);

  std::vector<CateCell> out;
  out.reserve(c1.size());
  for (const auto& [key, a1] : c1) {
    const auto& a0 = c0.at(key);
    out.push_back({key.first, key.second, a1.sum / a1.count - a0.sum / a0.count,
                   a1.count});
  }
  return out;
}

}  // namespace specdte
