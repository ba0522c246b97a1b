#include "epsdyad/cz.hpp"

#include <cmath>
#include <string>

namespace epsdyad {

CZResult cz_decompose(const GridFunction& f, const EpsilonCollection& eps, double lambda) {
  if (!std::isfinite(lambda)) {
    throw NonfiniteInput("cz_decompose: lambda must be finite");
  }
  const GridFunction g = f.abs();
  const double root_level = eps.value(g.root()) * g.average(g.root());
  if (!(lambda > root_level)) {
    throw NotLocalizable("cz_decompose: lambda = " + std::to_string(lambda) +
                         " does not exceed eps_root * avg_root|f| = " + std::to_string(root_level));
  }
  CZResult result{lambda, {}};
  std::vector<DyadicCube> stack;
  auto push_children = [&](const DyadicCube& q) {
    auto kids = q.children();
    // reversed so the depth-first order follows row-major child order
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      stack.push_back(*it);
    }
  };
  if (g.depth() > 0) {
    push_children(g.root());
  }
  while (!stack.empty()) {
    const DyadicCube q = stack.back();
    stack.pop_back();
    const double e = eps.value(q);
    const double avg = g.average(q);
    if (e * avg > lambda) {
      result.cubes.push_back({q, e, avg});
    } else if (q.level() < g.cell_level()) {
      push_children(q);
    }
  }
  return result;
}

std::vector<char> cz_cell_mask(const CZResult& result, const GridFunction& layout) {
  std::vector<char> mask(layout.cell_count(), 0);
  for (const auto& c : result.cubes) {
    for_each_subcube(c.cube, layout.cell_level(), [&](const DyadicCube& cell) { mask[layout.cell_index(cell)] = 1; });
  }
  return mask;
}

}  // namespace epsdyad
