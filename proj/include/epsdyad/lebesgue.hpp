#pragma once

#include <span>

#include "epsdyad/exponent.hpp"
#include "epsdyad/grid.hpp"

namespace epsdyad {

inline constexpr double kDefaultNormTolerance = 1e-10;
inline constexpr double kDefaultInequalitySlack = 1e-9;

/// rho(f) = sum over cells of |f|^{p(center)} * |cell|.
double modular(const GridFunction& f, const ExponentFunction& p);

/// Luxemburg norm inf{lambda > 0 : rho(f / lambda) <= 1}.
///
/// Bisection on lambda: lambda -> rho(f/lambda) is continuous and strictly
/// decreasing when p_+ < infinity. The returned value is the upper end of
/// the final bracket, whose relative width is at most `tol`, so
/// rho(f / result) <= 1 always holds.
double norm(const GridFunction& f, const ExponentFunction& p, double tol = kDefaultNormTolerance);

struct HolderCheck {
  double pairing;  ///< integral of |f g|
  double bound;    ///< 2 ||f||_p ||g||_{p'}
  bool holds;      ///< pairing <= bound + slack
};

HolderCheck holder_pairing(const GridFunction& f, const GridFunction& g, const ExponentFunction& p,
                           double tol = kDefaultNormTolerance, double slack = kDefaultInequalitySlack);

/// max over the bank of integral(f g / ||g||_{p'}); zero functions in the
/// bank are skipped. Lower estimate of the associate norm of f.
double associate_norm_lower_bound(const GridFunction& f, const ExponentFunction& p, std::span<const GridFunction> bank,
                                  double tol = kDefaultNormTolerance);

}  // namespace epsdyad
