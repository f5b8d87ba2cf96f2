#include "specdte/oracle.hpp"

#include <limits>
#include <sstream>

namespace specdte {

namespace {

void guard(const Matrix& a1, const Matrix& a0, Index limit, const char* who) {
  if (a1.rows() != a0.rows() || a1.cols() != a0.cols()) {
    std::ostringstream os;
    os << who << ": inputs differ in shape";
    throw Error(os.str());
  }
  if (a1.rows() > limit || a1.cols() > limit) {
    std::ostringstream os;
    os << who << ": size " << a1.rows() << "x" << a1.cols()
       << " exceeds the enumeration limit " << limit;
    throw Error(os.str());
  }
  if (a1.size() == 0) {
    std::ostringstream os;
    os << who << ": empty input";
    throw Error(os.str());
  }
}

template <class Objective>
SharpInterval enumerate(Index n, Objective objective) {
  SharpInterval out;
  out.min = std::numeric_limits<double>::infinity();
  out.max = -std::numeric_limits<double>::infinity();
  for_each_permutation(n, [&](const Permutation& p) {
    const double v = objective(p);
    if (v < out.min) {
      out.min = v;
      out.argmin_perm = p;
    }
    if (v > out.max) {
      out.max = v;
      out.argmax_perm = p;
    }
  });
  return out;
}

}  // namespace

SharpInterval qap_sharp_dpo(const Matrix& a1, const Matrix& a0,
                            bool exclude_diagonal) {
  guard(a1, a0, kMaxOracleSize, "qap_sharp_dpo");
  if (a1.rows() != a1.cols()) throw Error("qap_sharp_dpo: inputs must be square");
  const Index n = a1.rows();
  if (exclude_diagonal && n < 2)
    throw Error("qap_sharp_dpo: exclude_diagonal requires n >= 2");
  const double denom = exclude_diagonal ? static_cast<double>(n * (n - 1))
                                        : static_cast<double>(n * n);
  return enumerate(n, [&](const Permutation& p) {
    double s = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        if (exclude_diagonal && i == j) continue;
        s += a1(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]) *
             a0(i, j);
      }
    return s / denom;
  });
}

SharpInterval brute_dte_sharp(const Matrix& y1, const Matrix& y0, double y) {
  guard(y1, y0, kMaxOracleSize, "brute_dte_sharp");
  if (y1.rows() != y1.cols()) throw Error("brute_dte_sharp: inputs must be square");
  const Index n = y1.rows();
  const double denom = static_cast<double>(n * n);
  return enumerate(n, [&](const Permutation& p) {
    Index count = 0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (y1(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]) -
                y0(i, j) <=
            y)
          ++count;
    return static_cast<double>(count) / denom;
  });
}

SharpInterval bipartite_sharp_dpo(const Matrix& a1, const Matrix& a0) {
  guard(a1, a0, kMaxBipartiteOracleSize, "bipartite_sharp_dpo");
  const Index rows = a1.rows();
  const Index cols = a1.cols();
  const double denom = static_cast<double>(rows * cols);

  std::vector<Permutation> col_perms;
  for_each_permutation(cols, [&](const Permutation& q) { col_perms.push_back(q); });

  SharpInterval out;
  out.min = std::numeric_limits<double>::infinity();
  out.max = -std::numeric_limits<double>::infinity();
  for_each_permutation(rows, [&](const Permutation& p) {
    for (const auto& q : col_perms) {
      double s = 0.0;
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
          s += a1(p[static_cast<std::size_t>(i)], q[static_cast<std::size_t>(j)]) *
               a0(i, j);
      s /= denom;
      auto joined = [&] {
        Permutation both(p);
        both.insert(both.end(), q.begin(), q.end());
        return both;
      };
      if (s < out.min) {
        out.min = s;
        out.argmin_perm = joined();
      }
      if (s > out.max) {
        out.max = s;
        out.argmax_perm = joined();
      }
    }
  });
  return out;
}

}  // namespace specdte
