#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "epsdyad/epsilon.hpp"
#include "epsdyad/exponent.hpp"
#include "epsdyad/grid.hpp"
#include "epsdyad/haar.hpp"
#include "epsdyad/lebesgue.hpp"

namespace epsdyad {

using Operator = std::function<GridFunction(const GridFunction&)>;

struct DominationResult {
  double ratio;              ///< max over supp f of |T_eps f| / S_eps|f|
  std::size_t failures;      ///< cells with S_eps|f| = 0 but T_eps f != 0
  std::size_t sparse_size;   ///< number of stopping cubes
};

/// Compares T_eps f with S_eps |f|, S the stopping collection of |f| at
/// ratio 2^{n+1}.
DominationResult domination_ratio(const GridFunction& f, const EpsilonCollection& eps,
                                  HaarMode mode = HaarMode::full_support);

struct OpnormEstimate {
  double max_ratio;
  std::vector<double> ratios;  ///< per bank function, bank order
};

/// norm(op f, p) / norm(f, p) over the bank. Throws on an empty bank or a
/// zero function.
OpnormEstimate opnorm_estimate(const Operator& op, const ExponentFunction& p, std::span<const GridFunction> bank,
                               double tol = kDefaultNormTolerance);

struct CompactnessProbe {
  /// e_N for N = 0..depth, N indexing the estimates.
  std::vector<double> estimates;
  /// decay profile of eps on the root reaches at most half its first value
  bool decay_hypothesis;
  /// every e_N with N < depth stays within 1% of e_0 (and e_0 > 0)
  bool stalled;
  bool nonincreasing;
};

/// e_N = max over the bank of norm((S_eps - S_{eps,N}) |f|, p) / norm(f, p),
/// S the stopping collection of |f|. All bank functions share one layout.
CompactnessProbe compactness_probe(const EpsilonCollection& eps, const ExponentFunction& p,
                                   std::span<const GridFunction> bank, double tol = kDefaultNormTolerance);

/// Relative drop below which two probe values count as equal for stalling.
inline constexpr double kStallTolerance = 0.01;

}  // namespace epsdyad
