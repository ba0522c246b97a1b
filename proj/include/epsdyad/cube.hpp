#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace epsdyad {

inline constexpr int kMaxDimension = 4;

/// Outcome of comparing two dyadic cubes. Two dyadic cubes are either
/// disjoint, equal, or one is strictly inside the other.
enum class Relation { disjoint, equal, first_inside_second, second_inside_first };

/// Half-open dyadic cube 2^{-level} * prod_i [corner_i, corner_i + 1).
///
/// Cubes are identified by integers only; every containment test is done
/// with arithmetic shifts on the corner, never with floating geometry.
/// Negative levels (cubes larger than the unit cube) are allowed.
class DyadicCube {
public:
  DyadicCube(int level, std::span<const std::int64_t> corner);
  DyadicCube(int level, std::initializer_list<std::int64_t> corner);

  /// [0,1)^n
  static DyadicCube unit(int dimension);

  int dimension() const { return dimension_; }
  int level() const { return level_; }
  std::span<const std::int64_t> corner() const { return {corner_.data(), static_cast<std::size_t>(dimension_)}; }
  std::int64_t corner(int axis) const { return corner_[static_cast<std::size_t>(axis)]; }

  double side() const;
  double volume() const;

  DyadicCube parent() const;
  /// The unique cube at `level` containing this one. Requires level <= this->level().
  DyadicCube ancestor(int level) const;
  /// 2^n children in row-major order (first axis slowest).
  std::vector<DyadicCube> children() const;

  /// True when `other` is a subset of this cube (equality included).
  bool contains(const DyadicCube& other) const;
  bool contains_point(std::span<const double> point) const;

  std::vector<double> lower_corner() const;
  std::vector<double> center() const;

  /// "level:c1,c2,..." token
  std::string token() const;
  static DyadicCube parse(std::string_view token);

  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
  friend std::strong_ordering operator<=>(const DyadicCube& a, const DyadicCube& b);

private:
  int dimension_ = 1;
  int level_ = 0;
  std::array<std::int64_t, kMaxDimension> corner_{};
};

struct DyadicCubeHash {
  std::size_t operator()(const DyadicCube& q) const noexcept;
};

Relation relation(const DyadicCube& first, const DyadicCube& second);

/// The level-`level` cube containing `point`; boundary points belong to the
/// cube on their right (half-open convention).
DyadicCube cube_at(std::span<const double> point, int level);

/// Throws unless `level` is at least root.level() and the number of
/// cubes requested stays below 2^30.
void check_subcube_request(const DyadicCube& root, int level);

/// All cubes at `level` contained in `root`, in row-major order.
std::vector<DyadicCube> subcubes_at_level(const DyadicCube& root, int level);

/// Calls fn(cube) for every cube at `level` inside `root`, row-major,
/// without materializing the list.
template <class Fn>
void for_each_subcube(const DyadicCube& root, int level, Fn&& fn) {
  const int depth = level - root.level();
  const int n = root.dimension();
  check_subcube_request(root, level);
  const std::size_t per_axis = std::size_t{1} << depth;
  const std::size_t count = std::size_t{1} << (depth * n);
  std::array<std::int64_t, kMaxDimension> corner{};
  for (std::size_t idx = 0; idx < count; ++idx) {
    for (int i = 0; i < n; ++i) {
      const std::size_t local = (idx >> (depth * (n - 1 - i))) & (per_axis - 1);
      corner[static_cast<std::size_t>(i)] = (root.corner(i) << depth) + static_cast<std::int64_t>(local);
    }
    fn(DyadicCube(level, std::span<const std::int64_t>(corner.data(), static_cast<std::size_t>(n))));
  }
}

}  // namespace epsdyad
