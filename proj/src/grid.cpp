#include "epsdyad/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace epsdyad {

namespace {

void check_layout(const GridFunction& f, const GridFunction& g, const char* what) {
  if (!f.same_layout(g)) {
    throw std::invalid_argument(std::string(what) + ": root/depth mismatch");
  }
}

}  // namespace

GridFunction::GridFunction(const DyadicCube& root, int depth, std::vector<double> values)
    : root_(root), depth_(depth), values_(std::move(values)) {
  if (depth < 0) {
    throw std::invalid_argument("GridFunction: depth must be non-negative");
  }
  if (depth * root.dimension() > kMaxGridBits) {
    throw std::length_error("GridFunction: grid too large");
  }
  if (values_.size() != (std::size_t{1} << (depth * root.dimension()))) {
    throw std::invalid_argument("GridFunction: expected " + std::to_string(std::size_t{1} << (depth * root.dimension())) +
                                " values, got " + std::to_string(values_.size()));
  }
  for (const double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("GridFunction: non-finite cell value");
    }
  }
  build_sums();
}

GridFunction GridFunction::constant(const DyadicCube& root, int depth, double value) {
  if (depth < 0 || depth * root.dimension() > kMaxGridBits) {
    throw std::invalid_argument("GridFunction::constant: bad depth");
  }
  return GridFunction(root, depth, std::vector<double>(std::size_t{1} << (depth * root.dimension()), value));
}

GridFunction GridFunction::indicator(const DyadicCube& root, int depth, const DyadicCube& q) {
  GridFunction out = constant(root, depth, 0.0);
  for (std::size_t i = 0; i < out.cell_count(); ++i) {
    if (q.contains(out.cell_cube(i))) {
      out.values_[i] = 1.0;
    }
  }
  out.build_sums();
  return out;
}

GridFunction GridFunction::from_sampler(const DyadicCube& root, int depth,
                                        const std::function<double(std::span<const double>)>& sampler) {
  GridFunction out = constant(root, depth, 0.0);
  for (std::size_t i = 0; i < out.cell_count(); ++i) {
    const auto c = out.cell_cube(i).center();
    const double v = sampler(c);
    if (!std::isfinite(v)) {
      throw std::invalid_argument("GridFunction::from_sampler: sampler returned a non-finite value");
    }
    out.values_[i] = v;
  }
  out.build_sums();
  return out;
}

double GridFunction::cell_volume() const { return std::ldexp(1.0, -dimension() * cell_level()); }

void GridFunction::build_sums() {
  sums_.assign(static_cast<std::size_t>(depth_) + 1, {});
  sums_[static_cast<std::size_t>(depth_)] = values_;
  for (int j = depth_; j > 0; --j) {
    const auto& fine = sums_[static_cast<std::size_t>(j)];
    auto& coarse = sums_[static_cast<std::size_t>(j - 1)];
    coarse.assign(blocks_at(j - 1), 0.0);
    for (std::size_t i = 0; i < fine.size(); ++i) {
      coarse[parent_block(j, i)] += fine[i];
    }
  }
}

std::size_t GridFunction::parent_block(int rel_level, std::size_t index) const {
  const int n = dimension();
  const std::size_t mask = (std::size_t{1} << rel_level) - 1;
  std::size_t out = 0;
  for (int i = 0; i < n; ++i) {
    const std::size_t c = (index >> (rel_level * (n - 1 - i))) & mask;
    out |= (c >> 1) << ((rel_level - 1) * (n - 1 - i));
  }
  return out;
}

std::size_t GridFunction::block_index(const DyadicCube& q) const {
  if (!resolves(q)) {
    throw std::out_of_range("GridFunction: cube " + q.token() + " is outside the root or below cell resolution");
  }
  const int j = q.level() - root_.level();
  const int n = dimension();
  std::size_t out = 0;
  for (int i = 0; i < n; ++i) {
    const auto local = static_cast<std::size_t>(q.corner(i) - (root_.corner(i) << j));
    out |= local << (j * (n - 1 - i));
  }
  return out;
}

DyadicCube GridFunction::block_cube(int rel_level, std::size_t index) const {
  const int n = dimension();
  const std::size_t mask = (std::size_t{1} << rel_level) - 1;
  std::array<std::int64_t, kMaxDimension> corner{};
  for (int i = 0; i < n; ++i) {
    const std::size_t local = (index >> (rel_level * (n - 1 - i))) & mask;
    corner[static_cast<std::size_t>(i)] = (root_.corner(i) << rel_level) + static_cast<std::int64_t>(local);
  }
  return DyadicCube(root_.level() + rel_level, std::span<const std::int64_t>(corner.data(), static_cast<std::size_t>(n)));
}

DyadicCube GridFunction::cell_cube(std::size_t cell) const { return block_cube(depth_, cell); }

std::size_t GridFunction::cell_index(const DyadicCube& cell) const {
  if (cell.level() != cell_level()) {
    throw std::invalid_argument("GridFunction::cell_index: cube is not at cell level");
  }
  return block_index(cell);
}

std::size_t GridFunction::cell_at(std::span<const double> point) const {
  const DyadicCube c = cube_at(point, cell_level());
  if (!root_.contains(c)) {
    throw std::out_of_range("GridFunction::cell_at: point outside root");
  }
  return block_index(c);
}

bool GridFunction::resolves(const DyadicCube& q) const {
  return q.dimension() == dimension() && q.level() <= cell_level() && root_.contains(q);
}

double GridFunction::block_sum(const DyadicCube& q) const {
  const int j = q.level() - root_.level();
  return sums_[static_cast<std::size_t>(j)][block_index(q)];
}

double GridFunction::average(const DyadicCube& q) const {
  const int j = q.level() - root_.level();
  const double cells = std::ldexp(1.0, dimension() * (depth_ - j));
  return block_sum(q) / cells;
}

double GridFunction::integral(const DyadicCube& q) const { return block_sum(q) * cell_volume(); }

double GridFunction::integral() const { return sums_[0][0] * cell_volume(); }

double GridFunction::sup_abs() const {
  double out = 0.0;
  for (const double v : values_) {
    out = std::max(out, std::abs(v));
  }
  return out;
}

bool GridFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

bool GridFunction::same_layout(const GridFunction& other) const {
  return root_ == other.root_ && depth_ == other.depth_;
}

GridFunction GridFunction::abs() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](double v) { return std::abs(v); });
  return GridFunction(root_, depth_, std::move(out));
}

GridFunction GridFunction::scaled(double factor) const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [factor](double v) { return factor * v; });
  return GridFunction(root_, depth_, std::move(out));
}

GridFunction add(const GridFunction& f, const GridFunction& g) {
  check_layout(f, g, "add");
  std::vector<double> out(f.cell_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = f.value(i) + g.value(i);
  }
  return GridFunction(f.root(), f.depth(), std::move(out));
}

GridFunction subtract(const GridFunction& f, const GridFunction& g) {
  check_layout(f, g, "subtract");
  std::vector<double> out(f.cell_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = f.value(i) - g.value(i);
  }
  return GridFunction(f.root(), f.depth(), std::move(out));
}

GridFunction pointwise_mul(const GridFunction& f, const GridFunction& g) {
  check_layout(f, g, "pointwise_mul");
  std::vector<double> out(f.cell_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = f.value(i) * g.value(i);
  }
  return GridFunction(f.root(), f.depth(), std::move(out));
}

double max_abs_difference(const GridFunction& f, const GridFunction& g) {
  check_layout(f, g, "max_abs_difference");
  double out = 0.0;
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    out = std::max(out, std::abs(f.value(i) - g.value(i)));
  }
  return out;
}

}  // namespace epsdyad
