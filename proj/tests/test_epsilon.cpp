#include <gtest/gtest.h>

#include <cmath>

#include "epsdyad/epsilon.hpp"
#include "epsdyad/rng.hpp"

using namespace epsdyad;

namespace {

// literal base values of the origin construction, no repair
double origin_base(double C, double a, const DyadicCube& q) {
  const int k = q.level();
  const auto m = q.corner(0);
  if (k >= 0 && m == 0) return std::exp2(-k) * std::pow(C, std::pow(k + 1.0, a));
  if (k >= 1 && m == 1) return std::exp2(-(k - 1)) * std::pow(C, std::pow(static_cast<double>(k), a));
  return C;
}

// min over the ancestor chain up to level 0, written without prefix tables
double origin_repaired(double C, double a, const DyadicCube& q) {
  double v = origin_base(C, a, q);
  for (int level = q.level() - 1; level >= 0; --level) {
    v = std::min(v, origin_base(C, a, q.ancestor(level)));
  }
  return v;
}

}  // namespace

TEST(Epsilon, OriginValues) {
  EXPECT_EQ(EpsilonCollection::origin(1.0, 0.5).value(DyadicCube(0, {0})), 1.0);
  const auto eps = EpsilonCollection::origin(1.2, 0.5);
  const double q2 = 0.25 * std::pow(1.2, std::sqrt(3.0));
  EXPECT_NEAR(eps.value(DyadicCube(2, {0})), q2, 1e-15);
  EXPECT_NEAR(q2, 0.3428, 1e-4);
  EXPECT_EQ(eps.value(DyadicCube(3, {1})), eps.value(DyadicCube(2, {0})));
  EXPECT_EQ(eps.value(DyadicCube(0, {1})), 1.2);
  EXPECT_EQ(eps.value(DyadicCube(-2, {0})), 1.2);
  EXPECT_EQ(eps.value(DyadicCube(4, {-1})), 1.2);
  EXPECT_EQ(eps.sup_bound(), 1.2);
  EXPECT_THROW(EpsilonCollection::origin(0.9, 0.5), std::invalid_argument);
  EXPECT_THROW(EpsilonCollection::origin(1.2, 1.0), std::invalid_argument);
  EXPECT_THROW(eps.value(DyadicCube(1, {0, 0})), std::invalid_argument);
}

TEST(Epsilon, OriginRepairMatchesAncestorScan) {
  for (const double C : {1.0, 1.2, 3.0, 40.0}) {
    for (const double a : {0.2, 0.5, 0.9}) {
      const auto eps = EpsilonCollection::origin(C, a);
      for (int level = 0; level <= 12; ++level) {
        for (const auto& q : subcubes_at_level(DyadicCube::unit(1), level)) {
          const double ref = origin_repaired(C, a, q);
          ASSERT_NEAR(eps.value(q), ref, 1e-14 * ref) << q.token() << " C=" << C << " a=" << a;
        }
      }
    }
  }
}

TEST(Epsilon, OriginRepairLeavesEqualityInstanceWhenDecreasing) {
  // with C = 1.2, a = 1/2 the base values along [0, 2^-n) already decrease
  const auto eps = EpsilonCollection::origin(1.2, 0.5);
  for (int n = 0; n <= 40; ++n) {
    const double base = std::exp2(-n) * std::pow(1.2, std::sqrt(n + 1.0));
    EXPECT_NEAR(eps.value(DyadicCube(n, {0})), base, 1e-15 * std::max(1.0, base));
  }
}

TEST(Epsilon, ConstantAndSidePower) {
  const auto c = EpsilonCollection::constant(0.7);
  EXPECT_EQ(c.value(DyadicCube(9, {3})), 0.7);
  const auto s = EpsilonCollection::sqrt_side();
  EXPECT_EQ(s.value(DyadicCube(4, {3})), 0.25);
  EXPECT_EQ(s.value(DyadicCube(-3, {0})), 1.0);
  EXPECT_EQ(s.sup_bound(), 1.0);
  EXPECT_THROW(EpsilonCollection::constant(0.0), std::invalid_argument);
  EXPECT_THROW(EpsilonCollection::side_power(-1.0), std::invalid_argument);
}

TEST(Epsilon, Power) {
  const auto four = EpsilonCollection::constant(4.0);
  EXPECT_EQ(four.power(0.5).value(DyadicCube(0, {0})), 2.0);
  EXPECT_EQ(four.power(1.0).value(DyadicCube(3, {1})), 4.0);
  const auto eps = EpsilonCollection::origin(1.2, 0.5);
  EXPECT_NEAR(eps.power(0.5).value(DyadicCube(2, {0})), std::sqrt(0.25 * std::pow(1.2, std::sqrt(3.0))), 1e-15);
  EXPECT_NEAR(eps.power(0.5).value(DyadicCube(2, {0})), 0.5855, 1e-4);
  EXPECT_THROW(eps.power(0.0), std::invalid_argument);
  EXPECT_THROW(eps.power(1.5), std::invalid_argument);

  Lcg rng(3);
  for (int i = 0; i < 500; ++i) {
    const int level = static_cast<int>(rng.below(30));
    const DyadicCube q(level, {static_cast<std::int64_t>(rng.below(std::uint64_t{1} << level))});
    const double a = rng.uniform(0.05, 1.0);
    const double b = rng.uniform(0.05, 1.0);
    EXPECT_NEAR(eps.power(a).power(b).value(q), eps.power(a * b).value(q), 1e-12);
  }
}

TEST(Epsilon, SupBoundDominatesRandomCubes) {
  const EpsilonCollection collections[] = {
      EpsilonCollection::origin(1.7, 0.3), EpsilonCollection::sqrt_side(), EpsilonCollection::side_power(0.1, 3.0),
      EpsilonCollection::level_table(0, {1.0, 0.6, 0.9, 0.3}), EpsilonCollection::origin(1.2, 0.5).power(0.4)};
  Lcg rng(99);
  for (const auto& eps : collections) {
    for (int i = 0; i < 10000; ++i) {
      const int level = static_cast<int>(rng.below(40)) - 5;
      const DyadicCube q(level, {static_cast<std::int64_t>(rng.below(1u << 20)) - (1 << 19)});
      ASSERT_LE(eps.value(q), eps.sup_bound());
      ASSERT_GT(eps.value(q), 0.0);
    }
  }
}

TEST(Epsilon, TableWithFallback) {
  TableRule t;
  t.entries.emplace(DyadicCube(2, {1}), 0.125);
  t.fallback = std::make_shared<const EpsilonCollection>(EpsilonCollection::constant(0.5));
  const EpsilonCollection eps(t);
  EXPECT_EQ(eps.value(DyadicCube(2, {1})), 0.125);
  EXPECT_EQ(eps.value(DyadicCube(2, {2})), 0.5);
  EXPECT_EQ(eps.sup_bound(), 0.5);
  EXPECT_THROW(EpsilonCollection(TableRule{}), std::invalid_argument);
}

TEST(Domination, ConstantHolds) {
  const auto family = subcubes_at_level(DyadicCube::unit(2), 3);
  std::vector<DyadicCube> all(family);
  for (int l = 0; l < 3; ++l) {
    const auto more = subcubes_at_level(DyadicCube::unit(2), l);
    all.insert(all.end(), more.begin(), more.end());
  }
  EXPECT_TRUE(validate_domination(EpsilonCollection::constant(2.0), all).holds);
}

TEST(Domination, IncreasingLevelTableFails) {
  const auto eps = EpsilonCollection::level_table(0, {0.5, 0.6, 0.7});
  const std::vector<DyadicCube> family{DyadicCube(0, {0}), DyadicCube(1, {1}), DyadicCube(2, {3})};
  const auto r = validate_domination(eps, family);
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.witness);
  EXPECT_TRUE(r.witness->second.contains(r.witness->first));
  EXPECT_GT(eps.value(r.witness->first), eps.value(r.witness->second));
}

TEST(Domination, OriginRepairHoldsExhaustively) {
  // every cube of levels 0..20 meeting [0,1) is a cube inside [0,1)
  std::vector<DyadicCube> family;
  for (int level = 0; level <= 20; ++level) {
    for_each_subcube(DyadicCube::unit(1), level, [&](const DyadicCube& q) { family.push_back(q); });
  }
  for (const double C : {1.2, 5.0}) {
    EXPECT_TRUE(validate_domination(EpsilonCollection::origin(C, 0.5), family).holds) << C;
  }
}

TEST(Domination, LiteralOriginAssignmentWouldFail) {
  // descendants of Q'_n get base value C > eps(Q'_n); the repaired values do not
  const auto eps = EpsilonCollection::origin(1.2, 0.5);
  const DyadicCube qp(3, {1});
  const DyadicCube inside(6, {9});
  ASSERT_TRUE(qp.contains(inside));
  EXPECT_GT(origin_base(1.2, 0.5, inside), eps.value(qp));
  EXPECT_LE(eps.value(inside), eps.value(qp));
}

TEST(DecayProfile, Examples) {
  const auto root = DyadicCube::unit(1);
  for (const double s : decay_profile(EpsilonCollection::constant(0.3), root, 10)) EXPECT_EQ(s, 0.3);
  const auto sq = decay_profile(EpsilonCollection::sqrt_side(), root, 10);
  for (int N = 0; N <= 10; ++N) EXPECT_NEAR(sq[static_cast<std::size_t>(N)], std::exp2(-(N + 1) / 2.0), 1e-15);
  for (const double s : decay_profile(EpsilonCollection::origin(1.2, 0.5), root, 12)) EXPECT_EQ(s, 1.2);
  EXPECT_THROW(decay_profile(EpsilonCollection::sqrt_side(), root, 0), std::invalid_argument);
}

TEST(DecayProfile, NonincreasingForEveryRule) {
  const EpsilonCollection collections[] = {EpsilonCollection::origin(1.7, 0.3), EpsilonCollection::sqrt_side(),
                                           EpsilonCollection::level_table(0, {1.0, 0.6, 0.9, 0.3, 0.8}),
                                           EpsilonCollection::constant(2.0)};
  for (const auto& eps : collections) {
    const auto s = decay_profile(eps, DyadicCube::unit(1), 12);
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LE(s[i], s[i - 1]);
  }
}
