#include "epsdyad/epsilon.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace epsdyad {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("EpsilonCollection: ") + what + " must be positive and finite");
  }
}

std::shared_ptr<const std::vector<double>> origin_prefix_minima(const OriginRule& r) {
  auto out = std::make_shared<std::vector<double>>(static_cast<std::size_t>(kOriginRuleMaxLevel) + 1);
  double running = r.C;
  for (int k = 0; k <= kOriginRuleMaxLevel; ++k) {
    const double base = std::ldexp(std::pow(r.C, std::pow(static_cast<double>(k + 1), r.a)), -k);
    running = std::min(running, base);
    (*out)[static_cast<std::size_t>(k)] = running;
  }
  return out;
}

}  // namespace

EpsilonCollection::EpsilonCollection(Rule rule, double exponent) : rule_(std::move(rule)), exponent_(exponent) {
  if (!(exponent_ > 0.0 && exponent_ <= 1.0)) {
    throw std::invalid_argument("EpsilonCollection: exponent must lie in (0, 1]");
  }
  const double base_sup = std::visit(
      overloaded{
          [](const ConstantRule& r) {
            require_positive(r.c, "constant");
            return r.c;
          },
          [](const SidePowerRule& r) {
            require_positive(r.scale, "scale");
            if (!(r.beta >= 0.0) || !std::isfinite(r.beta)) {
              throw std::invalid_argument("EpsilonCollection: side power must be non-negative");
            }
            return r.scale;
          },
          [](const LevelTableRule& r) {
            if (r.values.empty()) {
              throw std::invalid_argument("EpsilonCollection: empty level table");
            }
            for (const double v : r.values) {
              require_positive(v, "level table value");
            }
            return *std::max_element(r.values.begin(), r.values.end());
          },
          [this](const OriginRule& r) {
            if (!(r.C >= 1.0) || !std::isfinite(r.C)) {
              throw std::invalid_argument("EpsilonCollection: origin rule needs C >= 1");
            }
            if (!(r.a > 0.0 && r.a < 1.0)) {
              throw std::invalid_argument("EpsilonCollection: origin rule needs 0 < a < 1");
            }
            origin_prefix_ = origin_prefix_minima(r);
            return r.C;
          },
          [](const TableRule& r) {
            if (!r.fallback) {
              throw std::invalid_argument("EpsilonCollection: table rule needs a fallback collection");
            }
            double sup = r.fallback->sup_bound();
            for (const auto& [cube, v] : r.entries) {
              require_positive(v, "table entry");
              sup = std::max(sup, v);
            }
            return sup;
          },
      },
      rule_);
  sup_bound_ = exponent_ == 1.0 ? base_sup : std::pow(base_sup, exponent_);
}

double EpsilonCollection::base_value(const DyadicCube& q) const {
  return std::visit(
      overloaded{
          [](const ConstantRule& r) { return r.c; },
          [&](const SidePowerRule& r) {
            if (q.level() <= 0) {
              return r.scale;
            }
            return r.scale * std::pow(q.side(), r.beta);
          },
          [&](const LevelTableRule& r) {
            const long idx = std::clamp<long>(static_cast<long>(q.level()) - r.first_level, 0,
                                              static_cast<long>(r.values.size()) - 1);
            return r.values[static_cast<std::size_t>(idx)];
          },
          [&](const OriginRule& r) {
            if (q.dimension() != 1) {
              throw std::invalid_argument("EpsilonCollection: origin rule is one-dimensional");
            }
            const int k = q.level();
            const std::int64_t m = q.corner(0);
            if (k < 0 || m < 0 || (k < 62 && m >= (std::int64_t{1} << k))) {
              return r.C;  // cube not inside [0, 1)
            }
            if (k > kOriginRuleMaxLevel) {
              throw std::out_of_range("EpsilonCollection: origin rule supports levels up to " +
                                      std::to_string(kOriginRuleMaxLevel));
            }
            const auto& prefix = *origin_prefix_;
            if (m == 0) {
              return prefix[static_cast<std::size_t>(k)];
            }
            // The chain meets [2^-j, 2^-j+1) (the sibling of Q_j) at level j; above it sit Q_{j-1}, ..., Q_0.
            const int j = k - (std::bit_width(static_cast<std::uint64_t>(m)) - 1);
            return prefix[static_cast<std::size_t>(j - 1)];
          },
          [&](const TableRule& r) {
            if (const auto it = r.entries.find(q); it != r.entries.end()) {
              return it->second;
            }
            return r.fallback->value(q);
          },
      },
      rule_);
}

double EpsilonCollection::value(const DyadicCube& q) const {
  const double v = base_value(q);
  return exponent_ == 1.0 ? v : std::pow(v, exponent_);
}

EpsilonCollection EpsilonCollection::power(double alpha) const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("EpsilonCollection::power: alpha must lie in (0, 1]");
  }
  return EpsilonCollection(rule_, exponent_ * alpha);
}

bool EpsilonCollection::level_only() const {
  return std::holds_alternative<ConstantRule>(rule_) || std::holds_alternative<SidePowerRule>(rule_) ||
         std::holds_alternative<LevelTableRule>(rule_);
}

DominationCheck validate_domination(const EpsilonCollection& eps, std::span<const DyadicCube> family) {
  std::vector<DyadicCube> sorted(family.begin(), family.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.empty()) {
    return {true, std::nullopt};
  }
  const int coarsest = std::min_element(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
                         return a.level() < b.level();
                       })->level();
  // Comparing each cube with its nearest ancestor in the family is enough:
  // the inequality is transitive along the chain.
  for (const auto& p : sorted) {
    if (p.dimension() != sorted.front().dimension()) {
      throw std::invalid_argument("validate_domination: mixed dimensions in family");
    }
    for (int level = p.level() - 1; level >= coarsest; --level) {
      const DyadicCube q = p.ancestor(level);
      if (std::binary_search(sorted.begin(), sorted.end(), q)) {
        if (eps.value(p) > eps.value(q)) {
          return {false, std::make_pair(p, q)};
        }
        break;
      }
    }
  }
  return {true, std::nullopt};
}

std::vector<double> decay_profile(const EpsilonCollection& eps, const DyadicCube& root, int n_max) {
  if (n_max < 1) {
    throw std::invalid_argument("decay_profile: n_max must be at least 1");
  }
  const int horizon = n_max + 1;
  std::vector<double> level_max(static_cast<std::size_t>(horizon) + 1, 0.0);
  for (int j = 1; j <= horizon; ++j) {
    const int level = root.level() + j;
    double best = 0.0;
    if (eps.level_only()) {
      std::vector<std::int64_t> corner(root.corner().begin(), root.corner().end());
      for (auto& m : corner) {
        m <<= j;
      }
      best = eps.value(DyadicCube(level, corner));
    } else {
      for_each_subcube(root, level, [&](const DyadicCube& q) { best = std::max(best, eps.value(q)); });
    }
    level_max[static_cast<std::size_t>(j)] = best;
  }
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  double running = 0.0;
  for (int j = horizon; j >= 1; --j) {
    running = std::max(running, level_max[static_cast<std::size_t>(j)]);
    if (j - 1 <= n_max) {
      out[static_cast<std::size_t>(j - 1)] = running;
    }
  }
  return out;
}

}  // namespace epsdyad
