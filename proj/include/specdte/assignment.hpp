#pragma once

#include "specdte/spectra.hpp"

#include <vector>

namespace specdte {

/// Exact minimum-cost perfect matching on a square cost matrix (Hungarian
/// algorithm with potentials, O(n^3)). Returns col[i], the column assigned
/// to row i.
std::vector<Index> solve_assignment(const Matrix& cost);

}  // namespace specdte
