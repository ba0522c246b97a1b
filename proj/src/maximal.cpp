#include "epsdyad/maximal.hpp"

#include <algorithm>
#include <cmath>

namespace epsdyad {

namespace {

// Top-down sweep carrying the running maximum from each block to its children.
template <class Weight>
GridFunction weighted_maximal(const GridFunction& f, Weight&& weight) {
  const GridFunction g = f.abs();
  const int depth = g.depth();
  const int n = g.dimension();
  std::vector<double> running{weight(g.root()) * g.average(g.root())};
  for (int j = 1; j <= depth; ++j) {
    const auto sums = g.block_sums(j);
    const double cells_per_block = std::ldexp(1.0, n * (depth - j));
    std::vector<double> next(g.blocks_at(j));
    for (std::size_t i = 0; i < next.size(); ++i) {
      const double avg = sums[i] / cells_per_block;
      next[i] = std::max(running[g.parent_block(j, i)], weight(g.block_cube(j, i)) * avg);
    }
    running = std::move(next);
  }
  return GridFunction(f.root(), depth, std::move(running));
}

}  // namespace

GridFunction dyadic_maximal(const GridFunction& f) {
  return weighted_maximal(f, [](const DyadicCube&) { return 1.0; });
}

GridFunction eps_maximal(const GridFunction& f, const EpsilonCollection& eps) {
  return weighted_maximal(f, [&](const DyadicCube& q) { return eps.value(q); });
}

}  // namespace epsdyad
