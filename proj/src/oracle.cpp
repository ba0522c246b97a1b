#include "epsdyad/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace epsdyad::oracle {

namespace {

double naive_sum_abs(const GridFunction& f, const DyadicCube& q) {
  double s = 0.0;
  for_each_subcube(q, f.cell_level(), [&](const DyadicCube& cell) { s += std::abs(f.value(f.cell_index(cell))); });
  return s;
}

}  // namespace

double naive_average(const GridFunction& f, const DyadicCube& q) {
  double s = 0.0;
  std::size_t count = 0;
  for_each_subcube(q, f.cell_level(), [&](const DyadicCube& cell) {
    s += f.value(f.cell_index(cell));
    ++count;
  });
  return s / static_cast<double>(count);
}

std::vector<double> maximal(const GridFunction& f, const EpsilonCollection& eps) {
  std::unordered_map<DyadicCube, double, DyadicCubeHash> averages;
  auto average_abs = [&](const DyadicCube& q) {
    auto it = averages.find(q);
    if (it == averages.end()) {
      const double cells = std::ldexp(1.0, f.dimension() * (f.cell_level() - q.level()));
      it = averages.emplace(q, naive_sum_abs(f, q) / cells).first;
    }
    return it->second;
  };
  std::vector<double> out(f.cell_count(), 0.0);
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    const DyadicCube cell = f.cell_cube(i);
    double best = 0.0;
    for (int level = f.root().level(); level <= f.cell_level(); ++level) {
      const DyadicCube q = cell.ancestor(level);
      best = std::max(best, eps.value(q) * average_abs(q));
    }
    out[i] = best;
  }
  return out;
}

std::vector<double> dyadic_maximal(const GridFunction& f) { return maximal(f, EpsilonCollection::constant(1.0)); }

std::vector<char> superlevel_set(const GridFunction& f, const EpsilonCollection& eps, double lambda) {
  const auto m = maximal(f, eps);
  std::vector<char> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    out[i] = m[i] > lambda ? 1 : 0;
  }
  return out;
}

std::vector<double> haar_multiplier(const GridFunction& f, const EpsilonCollection& eps, HaarMode mode) {
  std::vector<double> out(f.cell_count(), 0.0);
  const double cell_volume = f.cell_volume();
  for (int level = f.root().level() + 1; level <= f.cell_level(); ++level) {
    for_each_subcube(f.root(), level, [&](const DyadicCube& q) {
      const HaarFunction h = haar_function(q);
      double coefficient = 0.0;
      for_each_subcube(h.parent, f.cell_level(), [&](const DyadicCube& cell) {
        const bool inside = q.contains(cell);
        if (mode == HaarMode::literal_cube && !inside) {
          return;
        }
        coefficient += f.value(f.cell_index(cell)) * (inside ? h.inside : h.outside) * cell_volume;
      });
      const double w = eps.value(q) * coefficient;
      for_each_subcube(h.parent, f.cell_level(), [&](const DyadicCube& cell) {
        out[f.cell_index(cell)] += w * (q.contains(cell) ? h.inside : h.outside);
      });
    });
  }
  return out;
}

std::vector<double> sparse_operator(const GridFunction& f, const SparseCollection& s, const EpsilonCollection& eps) {
  std::vector<double> out(f.cell_count(), 0.0);
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    const DyadicCube cell = f.cell_cube(i);
    for (const auto& q : s.cubes()) {
      if (q.contains(cell)) {
        out[i] += eps.value(q) * naive_average(f, q);
      }
    }
  }
  return out;
}

}  // namespace epsdyad::oracle
