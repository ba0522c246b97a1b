#pragma once

#include "epsdyad/epsilon.hpp"
#include "epsdyad/grid.hpp"

namespace epsdyad {

/// Integration domain of <f, h_Q>.
///   full_support: over the parent Q^ (where h_Q lives); default.
///   literal_cube: over Q only.
enum class HaarMode { full_support, literal_cube };

/// h_Q = |Q|^{-1/2} (chi_Q - 2^{-n} chi_{Q^}), described by its two values.
struct HaarFunction {
  DyadicCube cube;
  DyadicCube parent;
  double inside;   ///< value on Q
  double outside;  ///< value on Q^ \ Q

  /// Samples h_Q on the cells of (root, depth). The grid must resolve Q.
  GridFunction on(const DyadicCube& root, int depth) const;
};

HaarFunction haar_function(const DyadicCube& q);

/// <f, h_Q>. Requires Q^ inside f's root and Q no finer than a cell.
double haar_coefficient(const GridFunction& f, const DyadicCube& q, HaarMode mode = HaarMode::full_support);

/// T_eps f = sum eps_Q <f, h_Q> h_Q over every Q with Q^ inside the root and
/// Q no finer than a cell. The root is excluded because its parent leaves
/// the domain. With eps == 1 and full_support, T f = f - avg_root f.
GridFunction haar_multiplier(const GridFunction& f, const EpsilonCollection& eps,
                             HaarMode mode = HaarMode::full_support);

}  // namespace epsdyad
