#include "specdte/ste.hpp"

#include "specdte/assignment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace specdte {

std::string_view to_string(BasisTag tag) {
  switch (tag) {
    case BasisTag::Treated: return "treated";
    case BasisTag::Untreated: return "untreated";
    case BasisTag::Custom: return "custom";
  }
  return "custom";
}

namespace {

void require_equal_size(const OutcomeMatrix& y1, const OutcomeMatrix& y0,
                        const char* who) {
  if (y1.size() != y0.size()) {
    std::ostringstream os;
    os << who << ": arms must have equal size (" << y1.size() << " vs "
       << y0.size() << ")";
    throw Error(os.str());
  }
}

// Contiguous rank ranges [first, last) whose consecutive gaps are <= tol * scale.
std::vector<std::pair<Index, Index>> clusters(const Vector& v, double tol) {
  const double scale = v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  std::vector<std::pair<Index, Index>> out;
  Index start = 0;
  for (Index r = 1; r <= v.size(); ++r) {
    if (r == v.size() || v(r - 1) - v(r) > tol * scale) {
      out.emplace_back(start, r);
      start = r;
    }
  }
  return out;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.transpose() * m, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

SteMatrix ste_from_spectra(const Vector& sigma1, const Vector& sigma0,
                           const Matrix& basis, Index n) {
  SteMatrix out;
  const Vector diff = (sigma1 - sigma0) * static_cast<double>(n);
  out.entries = basis * diff.asDiagonal() * basis.transpose();
  out.entries = 0.5 * (out.entries + out.entries.transpose());
  return out;
}

}  // namespace

namespace detail {

bool has_small_eigengap(const Vector& values, Index n) {
  const Vector v = values * static_cast<double>(n);
  const double scale = std::max(1.0, v.size() ? v.cwiseAbs().maxCoeff() : 0.0);
  for (Index r = 1; r < v.size(); ++r)
    if (v(r - 1) - v(r) < kEigengapTolerance * scale) return true;
  return false;
}

}  // namespace detail

SteMatrix ste(const OutcomeMatrix& y1, const OutcomeMatrix& y0, const Matrix& basis) {
  require_equal_size(y1, y0, "ste");
  const Index n = y1.size();
  if (basis.rows() != n || basis.cols() != n)
    throw Error("ste: basis must be n x n");
  const double err = (basis.transpose() * basis - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(err <= 1e-8)) {
    std::ostringstream os;
    os << "ste: basis columns are not orthonormal (max deviation " << err << ")";
    throw Error(os.str());
  }
  SteMatrix out = ste_from_spectra(eig_values(y1.entries()), eig_values(y0.entries()),
                                   basis, n);
  out.basis_tag = BasisTag::Custom;
  return out;
}

SteMatrix stt(const OutcomeMatrix& y1, const OutcomeMatrix& y0) {
  require_equal_size(y1, y0, "stt");
  const Spectrum s1 = eig_sorted(y1);
  SteMatrix out = ste_from_spectra(s1.values, eig_values(y0.entries()), s1.vectors,
                                   y1.size());
  out.basis_tag = BasisTag::Treated;
  out.eigengap_warning = detail::has_small_eigengap(s1.values, y1.size());
  return out;
}

SteMatrix stu(const OutcomeMatrix& y1, const OutcomeMatrix& y0) {
  require_equal_size(y1, y0, "stu");
  const Spectrum s0 = eig_sorted(y0);
  SteMatrix out = ste_from_spectra(eig_values(y1.entries()), s0.values, s0.vectors,
                                   y0.size());
  out.basis_tag = BasisTag::Untreated;
  out.eigengap_warning = detail::has_small_eigengap(s0.values, y0.size());
  return out;
}

Matrix counterfactual_weights(const OutcomeMatrix& y1, const OutcomeMatrix& y0) {
  require_equal_size(y1, y0, "counterfactual_weights");
  return eig_sorted(y1).vectors * eig_sorted(y0).vectors.transpose();
}

Matrix matrix_lift(const std::function<double(double)>& g, const Matrix& y) {
  const Spectrum s = eig_sorted(y);
  const auto n = static_cast<double>(s.scale);
  Vector lifted(s.size());
  for (Index r = 0; r < s.size(); ++r) {
    const double x = n * s.values(r);
    const double gx = g(x);
    if (!std::isfinite(gx)) {
      std::ostringstream os;
      os.precision(17);
      os << "matrix_lift: function is undefined at eigenvalue " << x;
      throw Error(os.str());
    }
    lifted(r) = gx;
  }
  Matrix out = s.vectors * lifted.asDiagonal() * s.vectors.transpose();
  return 0.5 * (out + out.transpose());
}

OutcomeMatrix matrix_lift(const std::function<double(double)>& g,
                          const OutcomeMatrix& y) {
  return OutcomeMatrix(matrix_lift(g, y.entries()), y.arm());
}

RankInvarianceReport rank_invariance_check(const OutcomeMatrix& y1,
                                           const OutcomeMatrix& y0, double tol) {
  require_equal_size(y1, y0, "rank_invariance_check");
  const Spectrum s1 = eig_sorted(y1);
  const Spectrum s0 = eig_sorted(y0);
  const auto c0 = clusters(s0.values, tol);
  const auto c1 = clusters(s1.values, tol);

  RankInvarianceReport rep;
  rep.eigengap_warning = detail::has_small_eigengap(s0.values, y0.size());

  const double scale1 = std::max(s1.values.cwiseAbs().maxCoeff() *
                                     static_cast<double>(y1.size()),
                                 1e-300);
  std::vector<double> rayleigh;
  rayleigh.reserve(c0.size());
  for (const auto& [a, b] : c0) {
    // Y1 eigenvectors at the ranks [a, b), extended to whole Y1 clusters.
    Index lo = a;
    Index hi = b;
    for (const auto& [p, q] : c1)
      if (p < b && q > a) {
        lo = std::min(lo, p);
        hi = std::max(hi, q);
      }
    const Matrix v = s0.vectors.middleCols(a, b - a);
    const Matrix u = s1.vectors.middleCols(lo, hi - lo);
    const Matrix resid = v - u * (u.transpose() * v);
    rep.max_eigenvector_misalignment =
        std::max(rep.max_eigenvector_misalignment, std::min(1.0, spectral_norm(resid)));
    rayleigh.push_back((v.transpose() * y1.entries() * v).trace() /
                       static_cast<double>(b - a));
  }
  for (std::size_t k = 1; k < rayleigh.size(); ++k)
    rep.g_monotonicity_violation = std::max(
        rep.g_monotonicity_violation, (rayleigh[k] - rayleigh[k - 1]) / scale1);

  rep.invariant = rep.max_eigenvector_misalignment <= tol &&
                  rep.g_monotonicity_violation <= tol;
  return rep;
}

HwGap hw_gap(const OutcomeMatrix& y1, const OutcomeMatrix& y0) {
  require_equal_size(y1, y0, "hw_gap");
  const auto n = static_cast<double>(y1.size());
  HwGap g;
  g.lhs = (eig_values(y1.entries()) - eig_values(y0.entries())).squaredNorm();
  g.rhs = (y1.entries() - y0.entries()).squaredNorm() / (n * n);
  return g;
}

double weights_objective(const Matrix& y1, const Matrix& y0, const Matrix& d) {
  return (y1 - d * y0 * d.transpose()).squaredNorm();
}

namespace {

// Minimizer over [0,1] of c0 + c1 t + c2 t^2 + c3 t^3 + c4 t^4.
double minimize_quartic_unit(const std::array<double, 5>& c) {
  auto f = [&](double t) {
    return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * c[4])));
  };
  auto df = [&](double t) {
    return c[1] + t * (2 * c[2] + t * (3 * c[3] + t * 4 * c[4]));
  };
  double best_t = 0.0;
  double best_f = f(0.0);
  auto consider = [&](double t) {
    const double v = f(t);
    if (v < best_f) {
      best_f = v;
      best_t = t;
    }
  };
  consider(1.0);
  // The derivative is a cubic: at most three sign changes on a fine mesh,
  // each refined by bisection.
  constexpr int kMesh = 64;
  double prev_t = 0.0;
  double prev_d = df(0.0);
  for (int k = 1; k <= kMesh; ++k) {
    const double t = static_cast<double>(k) / kMesh;
    const double d = df(t);
    if (prev_d < 0.0 && d >= 0.0) {
      double lo = prev_t;
      double hi = t;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (df(mid) < 0.0) lo = mid;
        else hi = mid;
      }
      consider(0.5 * (lo + hi));
    }
    prev_t = t;
    prev_d = d;
  }
  return best_t;
}

}  // namespace

WeightsResult non_extrapolative_weights(const OutcomeMatrix& y1,
                                        const OutcomeMatrix& y0, int max_iter,
                                        double tol) {
  require_equal_size(y1, y0, "non_extrapolative_weights");
  if (max_iter < 1) throw Error("non_extrapolative_weights: max_iter must be >= 1");
  const Index n = y1.size();
  const Matrix& a = y1.entries();
  const Matrix& b = y0.entries();

  WeightsResult res;
  Matrix d = Matrix::Identity(n, n);
  double obj = weights_objective(a, b, d);
  res.objective_trace.push_back(obj);

  for (int it = 0; it < max_iter; ++it) {
    if (obj == 0.0) {
      res.converged = true;
      break;
    }
    const Matrix r = a - d * b * d.transpose();
    const Matrix grad = -4.0 * r * d * b;
    const auto col = solve_assignment(grad);
    Matrix p = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) p(i, col[static_cast<std::size_t>(i)]) = 1.0;

    const Matrix e = p - d;
    const Matrix dbd = b * d.transpose();
    const Matrix lin = e * dbd + (e * dbd).transpose();  // E Y0 D' + D Y0 E'
    const Matrix quad = e * b * e.transpose();
    // ||R - t L - t^2 Q||^2 expanded in t.
    const std::array<double, 5> coef = {
        r.squaredNorm(),
        -2.0 * (r.cwiseProduct(lin)).sum(),
        lin.squaredNorm() - 2.0 * (r.cwiseProduct(quad)).sum(),
        2.0 * (lin.cwiseProduct(quad)).sum(),
        quad.squaredNorm(),
    };
    const double step = minimize_quartic_unit(coef);
    ++res.iterations;
    if (step == 0.0) {
      res.objective_trace.push_back(obj);
      res.converged = true;
      break;
    }
    Matrix next = d + step * e;
    const double next_obj = weights_objective(a, b, next);
    if (next_obj > obj) {
      // Rounding in the expansion; keep the current iterate.
      res.objective_trace.push_back(obj);
      res.converged = true;
      break;
    }
    const double rel = (obj - next_obj) / std::max(obj, 1e-300);
    d = std::move(next);
    obj = next_obj;
    res.objective_trace.push_back(obj);
    if (rel < tol) {
      res.converged = true;
      break;
    }
  }
  res.weights = std::move(d);
  res.objective = obj;
  return res;
}

}  // namespace specdte
