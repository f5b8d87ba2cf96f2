#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's numerical routines.

#include "specdte/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace testing_support {

using specdte::Index;
using specdte::Matrix;
using specdte::Vector;

// Cyclic Jacobi rotations; returns raw eigenvalues sorted descending.
inline std::vector<double> jacobi_eigenvalues(Matrix a) {
  const Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30) break;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

inline Matrix binary_symmetric(Index n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) m(i, j) = m(j, i) = coin(rng) ? 1.0 : 0.0;
  return m;
}

// Symmetric with entries drawn from {0, 1, ..., levels-1}.
inline Matrix level_symmetric(Index n, int levels, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(0, levels - 1);
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) m(i, j) = m(j, i) = d(rng);
  return m;
}

inline Matrix normal_symmetric(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) m(i, j) = m(j, i) = d(rng);
  return m;
}

inline Matrix random_orthonormal(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = d(rng);
  // Gram-Schmidt, twice for stability.
  for (int pass = 0; pass < 2; ++pass)
    for (Index j = 0; j < n; ++j) {
      for (Index k = 0; k < j; ++k) g.col(j) -= g.col(k).dot(g.col(j)) * g.col(k);
      g.col(j) /= g.col(j).norm();
    }
  return g;
}

inline Matrix permute(const Matrix& m, const std::vector<int>& p) {
  const Index n = m.rows();
  Matrix out(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) out(i, j) = m(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
  return out;
}

inline std::vector<int> identity_perm(Index n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline double ecdf(const Matrix& m, double y) {
  return static_cast<double>((m.array() <= y).count()) / static_cast<double>(m.size());
}

struct MinMax {
  double min = 1e300;
  double max = -1e300;
  void add(double v) {
    min = std::min(min, v);
    max = std::max(max, v);
  }
};

// Sharp range of P(Y1 <= t1, Y0 <= t0) over relabelings, by lexicographic
// enumeration.
inline MinMax brute_joint(const Matrix& y1, const Matrix& y0, double t1, double t0) {
  const Index n = y1.rows();
  auto p = identity_perm(n);
  MinMax r;
  do {
    double hits = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (y1(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]) <= t1 && y0(i, j) <= t0) hits += 1.0;
    r.add(hits / static_cast<double>(n * n));
  } while (std::next_permutation(p.begin(), p.end()));
  return r;
}

// Sharp range of the fraction of pairs with Y1 - Y0 <= y.
inline MinMax brute_difference(const Matrix& y1, const Matrix& y0, double y) {
  const Index n = y1.rows();
  auto p = identity_perm(n);
  MinMax r;
  do {
    double hits = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (y1(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]) - y0(i, j) <= y) hits += 1.0;
    r.add(hits / static_cast<double>(n * n));
  } while (std::next_permutation(p.begin(), p.end()));
  return r;
}

inline std::vector<double> sorted_entries(const Matrix& m) {
  std::vector<double> v(m.data(), m.data() + m.size());
  std::sort(v.begin(), v.end());
  return v;
}

inline double max_sorted_gap(const Matrix& a, const Matrix& b) {
  const auto x = sorted_entries(a);
  const auto y = sorted_entries(b);
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) worst = std::max(worst, std::abs(x[k] - y[k]));
  return worst;
}

}  // namespace testing_support
