#include "specdte/assignment.hpp"

#include <limits>

namespace specdte {

std::vector<Index> solve_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols()) throw Error("solve_assignment: cost must be square");
  const Index n = cost.rows();
  if (n == 0) return {};
  const double inf = std::numeric_limits<double>::infinity();

  // 1-based arrays; way[j] tracks the augmenting path, match[j] the row of column j.
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> v(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<Index> match(static_cast<std::size_t>(n + 1), 0);
  std::vector<Index> way(static_cast<std::size_t>(n + 1), 0);

  for (Index i = 1; i <= n; ++i) {
    match[0] = i;
    Index j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const Index i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[sj];
        if (cur < minv[sj]) {
          minv[sj] = cur;
          way[sj] = j0;
        }
        if (minv[sj] < delta) {
          delta = minv[sj];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) {
          u[static_cast<std::size_t>(match[sj])] += delta;
          v[sj] -= delta;
        } else {
          minv[sj] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const Index j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<Index> col(static_cast<std::size_t>(n), 0);
  for (Index j = 1; j <= n; ++j)
    col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return col;
}

}  // namespace specdte
