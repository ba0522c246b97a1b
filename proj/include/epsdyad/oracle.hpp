#pragma once

// Slow reference implementations used to cross-check the fast operators.
// They share no code with the operators beyond the cube and grid types and
// sum cell values directly instead of using the cached block sums.

#include <vector>

#include "epsdyad/epsilon.hpp"
#include "epsdyad/grid.hpp"
#include "epsdyad/haar.hpp"
#include "epsdyad/sparse.hpp"

namespace epsdyad::oracle {

/// Average of f over q by summing its cells.
double naive_average(const GridFunction& f, const DyadicCube& q);

/// max over every (cell, ancestor) pair, ancestors enumerated explicitly.
std::vector<double> maximal(const GridFunction& f, const EpsilonCollection& eps);
std::vector<double> dyadic_maximal(const GridFunction& f);

/// Cells where the oracle maximal function exceeds lambda.
std::vector<char> superlevel_set(const GridFunction& f, const EpsilonCollection& eps, double lambda);

/// T_eps f summed term by term: each coefficient by cell quadrature, each
/// h_Q added cell by cell.
std::vector<double> haar_multiplier(const GridFunction& f, const EpsilonCollection& eps, HaarMode mode);

/// Double loop over cells and collection cubes.
std::vector<double> sparse_operator(const GridFunction& f, const SparseCollection& s, const EpsilonCollection& eps);

}  // namespace epsdyad::oracle
