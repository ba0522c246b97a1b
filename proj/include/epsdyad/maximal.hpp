#pragma once

#include "epsdyad/epsilon.hpp"
#include "epsdyad/grid.hpp"

namespace epsdyad {

/// M^d f at every cell: max over dyadic Q with cell subset Q subset root of
/// the average of |f| over Q.
GridFunction dyadic_maximal(const GridFunction& f);

/// M_eps f at every cell: max over the same cubes of eps_Q times the average
/// of |f| over Q. With eps == 1 this is dyadic_maximal exactly.
GridFunction eps_maximal(const GridFunction& f, const EpsilonCollection& eps);

}  // namespace epsdyad
