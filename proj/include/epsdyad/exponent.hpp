#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "epsdyad/cube.hpp"
#include "epsdyad/grid.hpp"

namespace epsdyad {

/// p(x) = p everywhere.
struct ConstantExponent {
  double p;
};

/// One-dimensional exponent that is 2 for x <= 0, 3 for x >= 1 and
/// 2 + (log2(2/x))^{-a} in between. It is continuous and nondecreasing,
/// but not log-Holder continuous at the origin.
struct OriginExponent {
  double a;
};

/// Exponent given by the cell values of a grid; treated as the exact
/// exponent (no interpolation). Undefined outside the grid root.
struct GridExponent {
  GridFunction values;
};

/// One-dimensional step exponent: values[0] on (-inf, breaks[0]),
/// values[i] on [breaks[i-1], breaks[i]), values.back() on [breaks.back(), inf).
struct StepExponent {
  std::vector<double> breaks;
  std::vector<double> values;
};

struct ExponentRange {
  double minus;
  double plus;
};

/// Conjugate exponent p/(p-1).
double conjugate_value(double p);

/// Exponent function p(.) with 1 < p_- <= p_+ < infinity.
///
/// A `conjugated` flag turns the descriptor into its pointwise conjugate,
/// so conjugating twice gives back the original descriptor exactly.
class ExponentFunction {
public:
  using Descriptor = std::variant<ConstantExponent, OriginExponent, GridExponent, StepExponent>;

  explicit ExponentFunction(Descriptor descriptor, bool conjugated = false);

  static ExponentFunction constant(double p) { return ExponentFunction(ConstantExponent{p}); }
  static ExponentFunction origin(double a) { return ExponentFunction(OriginExponent{a}); }
  static ExponentFunction grid(GridFunction values) { return ExponentFunction(GridExponent{std::move(values)}); }
  static ExponentFunction step(std::vector<double> breaks, std::vector<double> values) {
    return ExponentFunction(StepExponent{std::move(breaks), std::move(values)});
  }

  const Descriptor& descriptor() const { return descriptor_; }
  bool conjugated() const { return conjugated_; }
  bool is_constant() const;
  /// Dimension the descriptor is tied to, if any (1 for the 1-D kinds).
  std::optional<int> dimension() const;

  double at(std::span<const double> x) const;
  double at(double x) const;

  /// (p_-(Q), p_+(Q)): exact endpoint values for monotone closed forms,
  /// cell-exact min/max for grid descriptors.
  ExponentRange range(const DyadicCube& q) const;

  double p_minus() const { return global_.minus; }
  double p_plus() const { return global_.plus; }

  ExponentFunction conjugate() const;

private:
  ExponentRange base_range(const DyadicCube& q) const;
  double base_at(std::span<const double> x) const;

  Descriptor descriptor_;
  bool conjugated_ = false;
  ExponentRange global_{};
};

/// Exponent value at every cell center of `layout`.
std::vector<double> cell_exponents(const GridFunction& layout, const ExponentFunction& p);

}  // namespace epsdyad
