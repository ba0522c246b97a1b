#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "epsdyad/epsilon.hpp"
#include "epsdyad/grid.hpp"

namespace epsdyad {

/// Finite family of distinct dyadic cubes inside a root, with the derived
/// tree: eta(Q) is the set of maximal cubes of the family strictly inside Q.
class SparseCollection {
public:
  SparseCollection(const DyadicCube& root, std::vector<DyadicCube> cubes);

  const DyadicCube& root() const { return root_; }
  std::span<const DyadicCube> cubes() const { return cubes_; }
  std::size_t size() const { return cubes_.size(); }

  /// Indices of eta(cubes()[i]).
  std::span<const std::size_t> maximal_children(std::size_t i) const { return children_[i]; }
  /// Index of the smallest family cube strictly containing cubes()[i].
  std::optional<std::size_t> enclosing(std::size_t i) const { return enclosing_[i]; }

private:
  DyadicCube root_;
  std::vector<DyadicCube> cubes_;  // sorted by level, then corner
  std::vector<std::optional<std::size_t>> enclosing_;
  std::vector<std::vector<std::size_t>> children_;
};

struct SparseCheck {
  bool holds;              ///< packing and disjointness both hold
  bool packing;            ///< sum over eta(Q) of |P| <= |Q|/2 for every Q
  bool remainders_disjoint;
  double max_ratio;        ///< max over Q of sum_{eta(Q)} |P| / |Q|
  std::optional<DyadicCube> worst;
};

/// Exact check: volumes are dyadic, so the packing sums are carried out in
/// integers level by level and compared without rounding.
SparseCheck verify_sparse(const SparseCollection& s);

/// Stopping cubes of |f|: the root, then recursively the maximal P inside a
/// stopping cube Q with avg_P |f| > ratio * avg_Q |f|, down to cell level.
/// Requires ratio >= 2^{n+1} and f not identically zero.
SparseCollection build_sparse_stopping(const GridFunction& f, double ratio);

/// Smallest admissible stopping ratio, 2^{n+1}.
double default_stopping_ratio(int dimension);

/// S_eps f = sum over Q in S of eps_Q avg_Q f chi_Q.
GridFunction sparse_operator(const GridFunction& f, const SparseCollection& s, const EpsilonCollection& eps);

/// S_eps restricted to cubes with 2^-N <= side <= 2^N.
GridFunction truncated_sparse(const GridFunction& f, const SparseCollection& s, const EpsilonCollection& eps,
                              int N);

/// S_eps - S_{eps,N}, summed directly over the excluded cubes.
GridFunction sparse_tail(const GridFunction& f, const SparseCollection& s, const EpsilonCollection& eps, int N);

}  // namespace epsdyad
