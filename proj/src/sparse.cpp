#include "epsdyad/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace epsdyad {

SparseCollection::SparseCollection(const DyadicCube& root, std::vector<DyadicCube> cubes)
    : root_(root), cubes_(std::move(cubes)) {
  std::sort(cubes_.begin(), cubes_.end());
  for (std::size_t i = 0; i < cubes_.size(); ++i) {
    if (cubes_[i].dimension() != root_.dimension() || !root_.contains(cubes_[i])) {
      throw std::invalid_argument("SparseCollection: " + cubes_[i].token() + " is not inside the root");
    }
    if (i > 0 && cubes_[i] == cubes_[i - 1]) {
      throw std::invalid_argument("SparseCollection: duplicate cube " + cubes_[i].token());
    }
  }
  std::unordered_map<DyadicCube, std::size_t, DyadicCubeHash> index;
  for (std::size_t i = 0; i < cubes_.size(); ++i) {
    index.emplace(cubes_[i], i);
  }
  const int top = cubes_.empty() ? 0 : cubes_.front().level();
  enclosing_.assign(cubes_.size(), std::nullopt);
  children_.assign(cubes_.size(), {});
  for (std::size_t i = 0; i < cubes_.size(); ++i) {
    for (int level = cubes_[i].level() - 1; level >= top; --level) {
      if (const auto it = index.find(cubes_[i].ancestor(level)); it != index.end()) {
        enclosing_[i] = it->second;
        children_[it->second].push_back(i);
        break;
      }
    }
  }
}

SparseCheck verify_sparse(const SparseCollection& s) {
  SparseCheck out{true, true, true, 0.0, std::nullopt};
  const auto cubes = s.cubes();
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    const auto kids = s.maximal_children(i);
    if (kids.empty()) {
      continue;
    }
    const DyadicCube& q = cubes[i];
    const int n = q.dimension();
    const std::uint64_t base = std::uint64_t{1} << n;

    // eta(Q) members must be pairwise disjoint; then E_Q = Q minus their union
    // and the E_Q of nested members cannot meet.
    std::vector<DyadicCube> sorted;
    for (const auto k : kids) {
      sorted.push_back(cubes[k]);
    }
    // dyadic cubes nest or are disjoint, so a clash shows up as a member whose
    // ancestor is also a member
    std::unordered_set<DyadicCube, DyadicCubeHash> members(sorted.begin(), sorted.end());
    for (const auto& p : sorted) {
      for (int level = p.level() - 1; level > q.level() && out.remainders_disjoint; --level) {
        if (members.count(p.ancestor(level)) != 0) {
          out.remainders_disjoint = false;
        }
      }
    }

    // sum of |P| / |Q| as a base-2^n expansion: count[d] cubes at relative depth d
    std::map<int, std::uint64_t> count;
    double ratio = 0.0;
    for (const auto& p : sorted) {
      const int d = p.level() - q.level();
      ++count[d];
      ratio += std::ldexp(1.0, -n * d);
    }
    std::uint64_t carry = 0;
    bool remainder = false;
    int d = count.rbegin()->first;
    for (; d > 1; --d) {
      const auto it = count.find(d);
      std::uint64_t total = carry + (it == count.end() ? 0 : it->second);
      if (total % base != 0) {
        remainder = true;
      }
      carry = total / base;
      if (carry == 0 && count.begin()->first > d - 1) {
        break;  // nothing left to carry to the coarser depths
      }
    }
    const auto first = count.find(1);
    const std::uint64_t at_children = carry + (first == count.end() ? 0 : first->second);
    // the sum is at_children / 2^n plus a positive remainder if any digit was nonzero
    const std::uint64_t half = base / 2;
    const bool fits = at_children < half || (at_children == half && !remainder);
    if (ratio > out.max_ratio || (!fits && out.packing)) {
      out.max_ratio = std::max(out.max_ratio, ratio);
      out.worst = q;
    }
    if (!fits) {
      out.packing = false;
    }
  }
  out.holds = out.packing && out.remainders_disjoint;
  return out;
}

double default_stopping_ratio(int dimension) { return std::ldexp(1.0, dimension + 1); }

SparseCollection build_sparse_stopping(const GridFunction& f, double ratio) {
  const int n = f.dimension();
  if (!(ratio >= default_stopping_ratio(n)) || !std::isfinite(ratio)) {
    throw std::invalid_argument("build_sparse_stopping: ratio must be at least 2^(n+1)");
  }
  if (f.is_zero()) {
    throw std::invalid_argument("build_sparse_stopping: f is identically zero");
  }
  const GridFunction g = f.abs();
  std::vector<DyadicCube> selected{g.root()};
  std::vector<DyadicCube> pending{g.root()};
  while (!pending.empty()) {
    const DyadicCube q = pending.back();
    pending.pop_back();
    const double threshold = ratio * g.average(q);
    std::vector<DyadicCube> stack;
    auto push_children = [&](const DyadicCube& c) {
      if (c.level() < g.cell_level()) {
        for (const auto& kid : c.children()) {
          stack.push_back(kid);
        }
      }
    };
    push_children(q);
    while (!stack.empty()) {
      const DyadicCube p = stack.back();
      stack.pop_back();
      if (g.average(p) > threshold) {
        selected.push_back(p);
        pending.push_back(p);
      } else {
        push_children(p);
      }
    }
  }
  return SparseCollection(g.root(), std::move(selected));
}

namespace {

template <class Keep>
GridFunction sparse_sum(const GridFunction& f, const SparseCollection& s, const EpsilonCollection& eps, Keep&& keep) {
  if (!(s.root() == f.root()) && !f.root().contains(s.root())) {
    throw std::invalid_argument("sparse operator: collection is not inside the function's root");
  }
  const int depth = f.depth();
  std::vector<std::vector<double>> add(static_cast<std::size_t>(depth) + 1);
  for (int j = 0; j <= depth; ++j) {
    add[static_cast<std::size_t>(j)].assign(f.blocks_at(j), 0.0);
  }
  for (const auto& q : s.cubes()) {
    if (!f.resolves(q)) {
      throw std::invalid_argument("sparse operator: " + q.token() + " is below cell resolution");
    }
    if (!keep(q)) {
      continue;
    }
    const int j = q.level() - f.root().level();
    add[static_cast<std::size_t>(j)][f.block_index(q)] += eps.value(q) * f.average(q);
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

bool in_band(const DyadicCube& q, int N) { return q.level() >= -N && q.level() <= N; }

void require_nonnegative(int N) {
  if (N < 0) {
    throw std::invalid_argument("truncated sparse operator: N must be non-negative");
  }
}

}  // namespace

GridFunction sparse_operator(const GridFunction& f, const SparseCollection& s, const EpsilonCollection& eps) {
  return sparse_sum(f, s, eps, [](const DyadicCube&) { return true; });
}

GridFunction truncated_sparse(const GridFunction& f, const SparseCollection& s, const EpsilonCollection& eps,
                              int N) {
  require_nonnegative(N);
  return sparse_sum(f, s, eps, [N](const DyadicCube& q) { return in_band(q, N); });
}

GridFunction sparse_tail(const GridFunction& f, const SparseCollection& s, const EpsilonCollection& eps, int N) {
  require_nonnegative(N);
  return sparse_sum(f, s, eps, [N](const DyadicCube& q) { return !in_band(q, N); });
}

}  // namespace epsdyad
