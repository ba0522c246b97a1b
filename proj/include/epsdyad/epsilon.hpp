#pragma once

#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "epsdyad/cube.hpp"

namespace epsdyad {

class EpsilonCollection;

/// eps_Q = c for every cube.
struct ConstantRule {
  double c;
};

/// eps_Q = scale * min(1, l(Q))^beta with beta >= 0.
struct SidePowerRule {
  double beta;
  double scale = 1.0;
};

/// eps_Q = values[level - first_level], clamped to the ends of the table.
/// May be increasing in depth; validate_domination reports that.
struct LevelTableRule {
  int first_level;
  std::vector<double> values;
};

/// One-dimensional collection concentrated at the origin: with
/// Q_k = [0, 2^-k) and Q'_k = [2^-k-1, 2^-k), the base values are
/// eps(Q_k) = 2^-k C^{(k+1)^a}, eps(Q'_k) = eps(Q_k), and C elsewhere.
/// The reported value is the minimum of the base values along the ancestor
/// chain, which makes the collection satisfy P subset Q => eps_P <= eps_Q.
struct OriginRule {
  double C;
  double a;
};

/// Explicit per-cube values with a fallback collection for other cubes.
struct TableRule {
  std::unordered_map<DyadicCube, double, DyadicCubeHash> entries;
  std::shared_ptr<const EpsilonCollection> fallback;
};

/// Bounded, strictly positive collection {eps_Q} indexed by dyadic cubes.
/// Values are the rule's values raised to `exponent()` (see power()).
class EpsilonCollection {
public:
  using Rule = std::variant<ConstantRule, SidePowerRule, LevelTableRule, OriginRule, TableRule>;

  explicit EpsilonCollection(Rule rule, double exponent = 1.0);

  static EpsilonCollection constant(double c) { return EpsilonCollection(ConstantRule{c}); }
  static EpsilonCollection sqrt_side() { return EpsilonCollection(SidePowerRule{0.5, 1.0}); }
  static EpsilonCollection side_power(double beta, double scale = 1.0) {
    return EpsilonCollection(SidePowerRule{beta, scale});
  }
  static EpsilonCollection level_table(int first_level, std::vector<double> values) {
    return EpsilonCollection(LevelTableRule{first_level, std::move(values)});
  }
  static EpsilonCollection origin(double C, double a) { return EpsilonCollection(OriginRule{C, a}); }

  double value(const DyadicCube& q) const;
  double operator()(const DyadicCube& q) const { return value(q); }

  /// sup over all cubes of eps_Q
  double sup_bound() const { return sup_bound_; }

  /// eps^alpha for alpha in (0, 1].
  EpsilonCollection power(double alpha) const;

  const Rule& rule() const { return rule_; }
  double exponent() const { return exponent_; }
  /// True when the value depends only on the cube's level.
  bool level_only() const;

private:
  double base_value(const DyadicCube& q) const;

  Rule rule_;
  double exponent_ = 1.0;
  double sup_bound_ = 0.0;
  // prefix minima of the origin rule's base values along [0, 2^-k)
  std::shared_ptr<const std::vector<double>> origin_prefix_;
};

/// Deepest level supported by the origin rule.
inline constexpr int kOriginRuleMaxLevel = 1000;

struct DominationCheck {
  bool holds;
  /// (P, Q) with P strictly inside Q and eps_P > eps_Q, on failure.
  std::optional<std::pair<DyadicCube, DyadicCube>> witness;
};

/// Checks eps_P <= eps_Q for every nested pair of the finite family.
DominationCheck validate_domination(const EpsilonCollection& eps, std::span<const DyadicCube> family);

/// s_N = max{eps_Q : Q subset root, l(Q) < 2^-N l(root)} for N = 0..n_max.
///
/// The supremum is taken over cubes down to relative level n_max + 1 (a
/// finite horizon); the sequence is nonincreasing by construction.
std::vector<double> decay_profile(const EpsilonCollection& eps, const DyadicCube& root, int n_max);

}  // namespace epsdyad
