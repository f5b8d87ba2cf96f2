#include "specdte/bipartite.hpp"

#include <cmath>

namespace specdte {

BipartiteMatrix::BipartiteMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.size() == 0) throw Error("bipartite matrix must be nonempty");
  if (!entries_.allFinite()) throw Error("bipartite matrix has a non-finite entry");
}

OutcomeMatrix symmetrize(const BipartiteMatrix& b) {
  const Index r = b.rows();
  const Index c = b.cols();
  Matrix s = Matrix::Zero(r + c, r + c);
  s.topRightCorner(r, c) = b.entries();
  s.bottomLeftCorner(c, r) = b.entries().transpose();
  return OutcomeMatrix(std::move(s));
}

IntervalBound bipartite_cell_unmap(const IntervalBound& symmetrized, double t1,
                                   double t0, Index rows, Index cols) {
  if (rows < 1 || cols < 1) throw Error("bipartite_cell_unmap: empty dimensions");
  const auto r = static_cast<double>(rows);
  const auto c = static_cast<double>(cols);
  const double total = (r + c) * (r + c);
  const double zeros = (t1 >= 0.0 && t0 >= 0.0) ? r * r + c * c : 0.0;
  auto map = [&](double f) { return (f * total - zeros) / (2.0 * r * c); };
  IntervalBound out;
  out.lower = map(symmetrized.lower);
  out.upper = map(symmetrized.upper);
  out.binding_lower = symmetrized.binding_lower;
  out.binding_upper = symmetrized.binding_upper;
  out.clipped = symmetrized.clipped;
  return clip_unit(out);
}

}  // namespace specdte
