#include "epsdyad/lebesgue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace epsdyad {

namespace {

double scaled_modular(std::span<const double> values, std::span<const double> exponents, double cell_volume,
                      double lambda) {
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) {
      sum += std::pow(std::abs(values[i]) / lambda, exponents[i]);
    }
  }
  return sum * cell_volume;
}

void check_compatible(const GridFunction& f, const ExponentFunction& p) {
  if (const auto dim = p.dimension(); dim && *dim != f.dimension()) {
    throw std::invalid_argument("exponent and function live in different dimensions");
  }
}

}  // namespace

double modular(const GridFunction& f, const ExponentFunction& p) {
  check_compatible(f, p);
  const auto exps = cell_exponents(f, p);
  return scaled_modular(f.values(), exps, f.cell_volume(), 1.0);
}

double norm(const GridFunction& f, const ExponentFunction& p, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("norm: tolerance must be positive");
  }
  check_compatible(f, p);
  if (f.is_zero()) {
    return 0.0;
  }
  const auto exps = cell_exponents(f, p);
  const double vol = f.cell_volume();
  const auto rho = [&](double lambda) { return scaled_modular(f.values(), exps, vol, lambda); };

  const double root_volume = f.root().volume();
  double hi = std::max(1.0, f.sup_abs()) * std::pow(root_volume, 1.0 / p.p_minus());
  while (rho(hi) > 1.0) {
    hi *= 2.0;
  }
  double lo = hi * std::ldexp(1.0, -60);
  while (rho(lo) <= 1.0) {
    hi = lo;
    lo *= std::ldexp(1.0, -60);
    if (lo == 0.0) {
      throw std::runtime_error("norm: failed to bracket the Luxemburg norm");
    }
  }
  // invariant: rho(lo) > 1 >= rho(hi)
  while (hi - lo > tol * hi) {
    const double mid = hi / lo > 4.0 ? std::sqrt(lo) * std::sqrt(hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (rho(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

HolderCheck holder_pairing(const GridFunction& f, const GridFunction& g, const ExponentFunction& p, double tol,
                           double slack) {
  if (!f.same_layout(g)) {
    throw std::invalid_argument("holder_pairing: functions live on different grids");
  }
  const double pairing = pointwise_mul(f, g).abs().integral();
  const double bound = 2.0 * norm(f, p, tol) * norm(g, p.conjugate(), tol);
  return {pairing, bound, pairing <= bound + slack};
}

double associate_norm_lower_bound(const GridFunction& f, const ExponentFunction& p, std::span<const GridFunction> bank,
                                  double tol) {
  if (bank.empty()) {
    throw std::invalid_argument("associate_norm_lower_bound: empty bank");
  }
  const ExponentFunction conj = p.conjugate();
  double best = 0.0;
  for (const auto& g : bank) {
    if (!f.same_layout(g)) {
      throw std::invalid_argument("associate_norm_lower_bound: bank function on a different grid");
    }
    const double g_norm = norm(g, conj, tol);
    if (g_norm == 0.0) {
      continue;
    }
    best = std::max(best, pointwise_mul(f, g).integral() / g_norm);
  }
  return best;
}

}  // namespace epsdyad
