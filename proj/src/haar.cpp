#include "epsdyad/haar.hpp"

#include <cmath>
#include <stdexcept>

namespace epsdyad {

namespace {

void require_parent_inside(const GridFunction& f, const DyadicCube& q) {
  if (q.dimension() != f.dimension() || q.level() <= f.root().level() || !f.root().contains(q)) {
    throw std::out_of_range("haar: parent of " + q.token() + " is not inside the root");
  }
  if (q.level() > f.cell_level()) {
    throw std::out_of_range("haar: " + q.token() + " is finer than a cell");
  }
}

}  // namespace

HaarFunction haar_function(const DyadicCube& q) {
  const double norm = 1.0 / std::sqrt(q.volume());
  const double share = std::ldexp(1.0, -q.dimension());
  return {q, q.parent(), norm * (1.0 - share), -share * norm};
}

GridFunction HaarFunction::on(const DyadicCube& root, int depth) const {
  GridFunction layout = GridFunction::zero(root, depth);
  if (!layout.resolves(cube) || !root.contains(parent)) {
    throw std::out_of_range("HaarFunction::on: grid does not hold " + cube.token() + " and its parent");
  }
  std::vector<double> values(layout.cell_count(), 0.0);
  for_each_subcube(parent, layout.cell_level(), [&](const DyadicCube& cell) {
    values[layout.cell_index(cell)] = cube.contains(cell) ? inside : outside;
  });
  return GridFunction(root, depth, std::move(values));
}

double haar_coefficient(const GridFunction& f, const DyadicCube& q, HaarMode mode) {
  require_parent_inside(f, q);
  const double norm = 1.0 / std::sqrt(q.volume());
  const double share = std::ldexp(1.0, -q.dimension());
  if (mode == HaarMode::literal_cube) {
    return norm * (1.0 - share) * f.integral(q);
  }
  return norm * (f.integral(q) - share * f.integral(q.parent()));
}

GridFunction haar_multiplier(const GridFunction& f, const EpsilonCollection& eps, HaarMode mode) {
  const int depth = f.depth();
  const int n = f.dimension();
  const double share = std::ldexp(1.0, -n);
  // add[j][i]: constant added on block i of relative level j, pushed down at the end
  std::vector<std::vector<double>> add(static_cast<std::size_t>(depth) + 1);
  for (int j = 0; j <= depth; ++j) {
    add[static_cast<std::size_t>(j)].assign(f.blocks_at(j), 0.0);
  }
  const double cell_volume = f.cell_volume();
  for (int j = 1; j <= depth; ++j) {
    const auto sums = f.block_sums(j);
    const auto parent_sums = f.block_sums(j - 1);
    const double volume = std::ldexp(f.root().volume(), -n * j);
    auto& here = add[static_cast<std::size_t>(j)];
    auto& above = add[static_cast<std::size_t>(j - 1)];
    for (std::size_t i = 0; i < sums.size(); ++i) {
      const std::size_t parent = f.parent_block(j, i);
      const double integral_q = sums[i] * cell_volume;
      double coefficient_scaled;  // <f, h_Q> |Q|^{-1/2}
      if (mode == HaarMode::literal_cube) {
        coefficient_scaled = (1.0 - share) * integral_q / volume;
      } else {
        coefficient_scaled = (integral_q - share * parent_sums[parent] * cell_volume) / volume;
      }
      if (coefficient_scaled == 0.0) {
        continue;
      }
      const double w = eps.value(f.block_cube(j, i)) * coefficient_scaled;
      here[i] += w;
      above[parent] -= share * w;
    }
  }
  for (int j = 1; j <= depth; ++j) {
    auto& here = add[static_cast<std::size_t>(j)];
    const auto& above = add[static_cast<std::size_t>(j - 1)];
    for (std::size_t i = 0; i < here.size(); ++i) {
      here[i] += above[f.parent_block(j, i)];
    }
  }
  return GridFunction(f.root(), depth, std::move(add[static_cast<std::size_t>(depth)]));
}

}  // namespace epsdyad
