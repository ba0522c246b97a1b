#pragma once

#include <stdexcept>
#include <vector>

#include "epsdyad/epsilon.hpp"
#include "epsdyad/grid.hpp"

namespace epsdyad {

/// lambda does not exceed eps_root * avg_root |f|, so the root itself would
/// be selected and the local decomposition is not available.
class NotLocalizable : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class NonfiniteInput : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

struct CZCube {
  DyadicCube cube;
  double eps;
  double average;  ///< average of |f| over the cube
};

/// Maximal disjoint cubes with lambda < eps_Q avg_Q |f| <= 2^n lambda.
struct CZResult {
  double lambda;
  std::vector<CZCube> cubes;
};

/// Local Calderon-Zygmund decomposition of |f| at height lambda.
///
/// Descends from the root and stops at the first cube with
/// eps_Q avg_Q |f| > lambda, down to cell level. The union of the selected
/// cubes is {x in root : M_eps f(x) > lambda}. Requires
/// lambda > eps_root avg_root |f|.
CZResult cz_decompose(const GridFunction& f, const EpsilonCollection& eps, double lambda);

/// 1 on cells covered by the decomposition, 0 elsewhere.
std::vector<char> cz_cell_mask(const CZResult& result, const GridFunction& layout);

}  // namespace epsdyad
