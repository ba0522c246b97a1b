#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "epsdyad/cube.hpp"

namespace epsdyad {

/// Piecewise-constant function on the cells of a root cube.
///
/// The cells are the 2^{n*depth} subcubes of `root` at level
/// root.level() + depth, stored row-major with the first axis varying
/// slowest. Block sums for every level between the root and the cells are
/// built eagerly, so the average over any dyadic subcube costs O(1).
///
/// Relative level j (0 <= j <= depth) addresses the 2^{n*j} blocks at
/// absolute level root.level() + j, indexed the same row-major way.
class GridFunction {
public:
  GridFunction(const DyadicCube& root, int depth, std::vector<double> values);

  static GridFunction constant(const DyadicCube& root, int depth, double value);
  static GridFunction zero(const DyadicCube& root, int depth) { return constant(root, depth, 0.0); }
  static GridFunction indicator(const DyadicCube& root, int depth, const DyadicCube& q);
  /// Cell value = sampler(cell center).
  static GridFunction from_sampler(const DyadicCube& root, int depth,
                                   const std::function<double(std::span<const double>)>& sampler);

  const DyadicCube& root() const { return root_; }
  int depth() const { return depth_; }
  int dimension() const { return root_.dimension(); }
  int cell_level() const { return root_.level() + depth_; }
  std::size_t cell_count() const { return values_.size(); }
  double cell_volume() const;

  std::span<const double> values() const { return values_; }
  double value(std::size_t cell) const { return values_[cell]; }

  DyadicCube cell_cube(std::size_t cell) const;
  std::size_t cell_index(const DyadicCube& cell) const;
  /// Cell containing the point; throws when the point is outside the root.
  std::size_t cell_at(std::span<const double> point) const;

  /// True when q is inside the root and no finer than a cell.
  bool resolves(const DyadicCube& q) const;

  /// Sum of cell values inside q (not volume weighted).
  double block_sum(const DyadicCube& q) const;
  double average(const DyadicCube& q) const;
  double integral(const DyadicCube& q) const;
  double integral() const;
  double sup_abs() const;
  bool is_zero() const;

  bool same_layout(const GridFunction& other) const;

  GridFunction abs() const;
  GridFunction scaled(double factor) const;

  // Block-level access used by the operators.
  std::size_t blocks_at(int rel_level) const { return std::size_t{1} << (dimension() * rel_level); }
  std::span<const double> block_sums(int rel_level) const { return sums_[static_cast<std::size_t>(rel_level)]; }
  std::size_t block_index(const DyadicCube& q) const;
  DyadicCube block_cube(int rel_level, std::size_t index) const;
  /// Index of the parent block (relative level rel_level - 1).
  std::size_t parent_block(int rel_level, std::size_t index) const;

private:
  void build_sums();

  DyadicCube root_;
  int depth_ = 0;
  std::vector<double> values_;
  std::vector<std::vector<double>> sums_;
};

GridFunction add(const GridFunction& f, const GridFunction& g);
GridFunction subtract(const GridFunction& f, const GridFunction& g);
GridFunction pointwise_mul(const GridFunction& f, const GridFunction& g);

/// Maximum absolute cellwise difference; layouts must match.
double max_abs_difference(const GridFunction& f, const GridFunction& g);

/// Largest depth accepted for a grid, in units of n*depth.
inline constexpr int kMaxGridBits = 24;

}  // namespace epsdyad
