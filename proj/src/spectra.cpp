#include "specdte/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace specdte {

namespace {

void require_finite(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j))) {
        std::ostringstream os;
        os << "non-finite entry at (" << i << "," << j << ")";
        throw Error(os.str());
      }
}

Matrix checked_symmetric(const Matrix& m, double sym_tol) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "matrix is not square (" << m.rows() << "x" << m.cols() << ")";
    throw Error(os.str());
  }
  require_finite(m);
  const double asym = max_asymmetry(m);
  const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  if (asym > sym_tol * scale) {
    std::ostringstream os;
    os.precision(17);
    os << "matrix is not symmetric: max asymmetry " << asym;
    throw Error(os.str());
  }
  if (asym == 0.0) return m;
  return 0.5 * (m + m.transpose());
}

// Stable descending order of solver output, so ties keep solver order.
std::vector<Index> descending_order(const Vector& ascending) {
  std::vector<Index> idx(static_cast<std::size_t>(ascending.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    return ascending(a) > ascending(b);
  });
  return idx;
}

}  // namespace

double max_asymmetry(const Matrix& m) {
  if (m.rows() != m.cols() || m.size() == 0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

OutcomeMatrix::OutcomeMatrix(Matrix entries, int arm, double sym_tol)
    : entries_(checked_symmetric(entries, sym_tol)), arm_(arm) {
  if (entries_.rows() < 1) throw Error("outcome matrix must be at least 1x1");
}

Spectrum eig_sorted(const Matrix& m) {
  const Matrix sym = checked_symmetric(m, kSymmetryTolerance);
  const Index n = sym.rows();
  if (n < 1) throw Error("eig_sorted: empty matrix");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw Error("eig_sorted: eigensolver failed to converge");

  const auto order = descending_order(solver.eigenvalues());
  Spectrum out;
  out.scale = n;
  out.values.resize(n);
  out.vectors.resize(n, n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Index r = 0; r < n; ++r) {
    const Index src = order[static_cast<std::size_t>(r)];
    out.values(r) = solver.eigenvalues()(src) * inv_n;
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    for (Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-10) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    out.vectors.col(r) = v;
  }
  return out;
}

Spectrum eig_sorted(const OutcomeMatrix& m) { return eig_sorted(m.entries()); }

Vector eig_values(const Matrix& m) {
  const Matrix sym = checked_symmetric(m, kSymmetryTolerance);
  const Index n = sym.rows();
  if (n < 1) throw Error("eig_values: empty matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error("eig_values: eigensolver failed to converge");
  // Ascending output reversed is signed-descending.
  return solver.eigenvalues().reverse() / static_cast<double>(n);
}

IndicatorMatrix indicator(const Matrix& y, double threshold) {
  if (!std::isfinite(threshold)) throw Error("indicator: threshold must be finite");
  IndicatorMatrix out;
  out.threshold = threshold;
  out.entries = (y.array() <= threshold).cast<double>().matrix();
  return out;
}

IndicatorMatrix indicator(const OutcomeMatrix& y, double threshold) {
  return indicator(y.entries(), threshold);
}

double eig_dot(const Vector& a, const Vector& b, Pairing pairing) {
  if (a.size() != b.size()) {
    std::ostringstream os;
    os << "eig_dot: spectrum lengths differ (" << a.size() << " vs " << b.size()
       << ")";
    throw Error(os.str());
  }
  if (pairing == Pairing::Sorted) return a.dot(b);
  return a.dot(b.reverse());
}

double eig_dot(const Spectrum& a, const Spectrum& b, Pairing pairing) {
  return eig_dot(a.values, b.values, pairing);
}

Vector pad_spectrum(const Vector& values, Index n) {
  if (values.size() >= n) return values;
  // Zeros go between the positive and negative eigenvalues.
  Vector out = Vector::Zero(n);
  Index pos = 0;
  while (pos < values.size() && values(pos) > 0) ++pos;
  out.head(pos) = values.head(pos);
  const Index neg = values.size() - pos;
  out.tail(neg) = values.tail(neg);
  return out;
}

std::vector<double> distinct_values(const Matrix& m) {
  std::vector<double> v(m.data(), m.data() + m.size());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<double> threshold_grid(const Matrix& y1, const Matrix& y0) {
  std::vector<double> v(y1.data(), y1.data() + y1.size());
  v.insert(v.end(), y0.data(), y0.data() + y0.size());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (v.empty()) return {-1.0, 1.0};
  const double lo = v.front() - 1.0;
  const double hi = v.back() + 1.0;
  v.insert(v.begin(), lo);
  v.push_back(hi);
  return v;
}

std::vector<double> threshold_grid(const OutcomeMatrix& y1,
                                   const OutcomeMatrix& y0) {
  return threshold_grid(y1.entries(), y0.entries());
}

double half_min_gap(const std::vector<double>& grid) {
  double gap = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double d = grid[k] - grid[k - 1];
    if (d > 0 && (gap == 0.0 || d < gap)) gap = d;
  }
  return gap == 0.0 ? 0.5 : 0.5 * gap;
}

}  // namespace specdte
