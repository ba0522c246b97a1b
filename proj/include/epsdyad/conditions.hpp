#pragma once

#include <optional>
#include <span>
#include <vector>

#include "epsdyad/cube.hpp"
#include "epsdyad/epsilon.hpp"
#include "epsdyad/exponent.hpp"

namespace epsdyad {

struct ConditionRecord {
  DyadicCube cube;
  double p_minus;
  double p_plus;
  double eps;
  double value;
};

/// Per-cube values of a cube condition together with their supremum.
struct ConditionReport {
  std::vector<ConditionRecord> records;
  double supremum = 0.0;
  std::optional<DyadicCube> witness;
};

/// |Q|^{p_-(Q) - p_+(Q)} per cube.
ConditionReport check_diening(const ExponentFunction& p, std::span<const DyadicCube> cubes);

/// (|Q| / eps_Q)^{p_-(Q) - p_+(Q)} per cube.
ConditionReport check_eps_diening(const ExponentFunction& p, const EpsilonCollection& eps,
                                  std::span<const DyadicCube> cubes);

/// max over sample points x in Q of (|Q| / eps_Q)^{p_-(Q) - p(x)}.
///
/// Samples sit at the centers of a uniform subdivision of Q into
/// ceil(samples^{1/n}) pieces per axis.
ConditionReport check_eps_diening_pointwise(const ExponentFunction& p, const EpsilonCollection& eps,
                                            std::span<const DyadicCube> cubes, int samples_per_cube);

/// Diagnostic fit of the decay condition |p(x) - p_inf| <= C_inf / log(e + |x|).
///
/// Finite samples cannot certify the condition; the report carries the
/// sampled radius and whether the running maximum is still growing in the
/// outermost shell of samples.
struct DecayFit {
  double c_inf;
  double p_inf;
  std::optional<double> p_inf_positive;  ///< fit from samples with x > 0 (1-D only)
  std::optional<double> p_inf_negative;  ///< fit from samples with x < 0 (1-D only)
  double max_radius;
  bool growing_at_boundary;
};

/// 1-D samples. When `p_inf_guess` is empty, p_inf is the median of p over
/// the 10% of samples with largest |x|.
DecayFit check_lh_infty(const ExponentFunction& p, std::span<const double> sample_points,
                        std::optional<double> p_inf_guess = std::nullopt);

/// Per-cube transfer of the eps-Diening bound to the conjugate exponent.
struct ConjugateTransfer {
  ConditionReport conjugate_report;
  double kappa;  ///< p_+^2 / ((p')_-)^2
};

ConjugateTransfer check_conjugate_transfer(const ExponentFunction& p, const EpsilonCollection& eps,
                                           std::span<const DyadicCube> cubes);

}  // namespace epsdyad
