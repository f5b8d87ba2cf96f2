#pragma once

#include <string_view>

namespace specdte {

/// Which branch of a max/min produced an interval endpoint.
enum class Binding {
  None,
  Zero,
  One,
  MassSum,         // F1 + F0 - 1
  Antisorted,      // antisorted eigenvalue product
  Mass1,           // F1
  Mass0,           // F0
  SortedProduct,   // sorted eigenvalue product
  MassDifference,  // F1 - F0
  CrossProduct,    // DTE branch through the sorted product
  Derived,         // affine image of another bound
};

std::string_view to_string(Binding b);

/// Interval on a probability with the active branch at each end.
struct IntervalBound {
  double lower = 0.0;
  double upper = 1.0;
  Binding binding_lower = Binding::None;
  Binding binding_upper = Binding::None;
  /// True when clipping to [0,1] changed either endpoint.
  bool clipped = false;

  bool contains(double lo, double hi, double tol = 0.0) const {
    return lower <= lo + tol && hi <= upper + tol;
  }
};

/// Clips both endpoints to [0,1] and records whether anything moved.
IntervalBound clip_unit(IntervalBound b);

}  // namespace specdte
