#include <gtest/gtest.h>

#include <cmath>

#include "epsdyad/bank.hpp"
#include "epsdyad/cz.hpp"
#include "epsdyad/maximal.hpp"
#include "epsdyad/oracle.hpp"

using namespace epsdyad;

namespace {

const DyadicCube kUnit = DyadicCube::unit(1);

GridFunction random_grid(const DyadicCube& root, int depth, Lcg& rng) {
  std::vector<double> v(std::size_t{1} << (root.dimension() * depth));
  for (auto& x : v) x = rng.uniform(-1.0, 1.0) * (rng.below(4) == 0 ? 8.0 : 1.0);
  return GridFunction(root, depth, std::move(v));
}

EpsilonCollection random_level_table(Lcg& rng, int levels) {
  std::vector<double> t;
  double v = rng.uniform(0.5, 2.0);
  for (int i = 0; i <= levels; ++i) {
    t.push_back(v);
    v *= rng.uniform(0.5, 1.0);
  }
  return EpsilonCollection::level_table(0, t);
}

}  // namespace

TEST(DyadicMaximal, ConstantIsFixed) {
  const auto f = GridFunction::constant(DyadicCube::unit(2), 4, 3.0);
  const auto m = dyadic_maximal(f);
  for (const double v : m.values()) EXPECT_EQ(v, 3.0);
}

TEST(DyadicMaximal, HalfIndicator) {
  const auto f = GridFunction::indicator(kUnit, 3, DyadicCube(1, {0}));
  const auto m = dyadic_maximal(f);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(m.value(i), 1.0);
  for (std::size_t i = 4; i < 8; ++i) EXPECT_EQ(m.value(i), 0.5);
  const auto ref = oracle::dyadic_maximal(f);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(m.value(i), ref[i]);
}

TEST(DyadicMaximal, MatchesBruteForce) {
  Lcg rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const bool two_d = trial % 2 == 1;
    const auto f = random_grid(DyadicCube::unit(two_d ? 2 : 1), two_d ? 4 : 8, rng);
    const auto m = dyadic_maximal(f);
    const auto ref = oracle::dyadic_maximal(f);
    for (std::size_t i = 0; i < ref.size(); ++i) ASSERT_NEAR(m.value(i), ref[i], 1e-13 * std::max(1.0, ref[i]));
  }
}

TEST(EpsMaximal, UnitEpsIsDyadicMaximalExactly) {
  Lcg rng(1);
  const auto f = random_grid(kUnit, 9, rng);
  const auto a = dyadic_maximal(f);
  const auto b = eps_maximal(f, EpsilonCollection::constant(1.0));
  for (std::size_t i = 0; i < f.cell_count(); ++i) EXPECT_EQ(a.value(i), b.value(i));
}

TEST(EpsMaximal, MatchesBruteForceAndSupBound) {
  Lcg rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_grid(kUnit, 8, rng);
    const EpsilonCollection choices[] = {random_level_table(rng, 8), EpsilonCollection::origin(1.2, 0.5),
                                         EpsilonCollection::sqrt_side()};
    for (const auto& eps : choices) {
      const auto m = eps_maximal(f, eps);
      const auto ref = oracle::maximal(f, eps);
      const auto md = dyadic_maximal(f);
      for (std::size_t i = 0; i < ref.size(); ++i) {
        ASSERT_NEAR(m.value(i), ref[i], 1e-13 * std::max(1.0, ref[i]));
        ASSERT_LE(m.value(i), eps.sup_bound() * md.value(i) * (1 + 1e-15));
      }
    }
  }
}

TEST(EpsMaximal, MonotoneInEps) {
  Lcg rng(3);
  const auto f = random_grid(DyadicCube::unit(2), 4, rng);
  const auto small = EpsilonCollection::level_table(0, {0.9, 0.5, 0.4, 0.2, 0.1});
  const auto large = EpsilonCollection::level_table(0, {1.0, 0.7, 0.4, 0.3, 0.1});
  const auto a = eps_maximal(f, small);
  const auto b = eps_maximal(f, large);
  for (std::size_t i = 0; i < f.cell_count(); ++i) EXPECT_LE(a.value(i), b.value(i));
}

TEST(CZ, HalfIndicatorSelectsLeftHalf) {
  const auto f = GridFunction::indicator(kUnit, 3, DyadicCube(1, {0}));
  const auto r = cz_decompose(f, EpsilonCollection::constant(1.0), 0.6);
  ASSERT_EQ(r.cubes.size(), 1U);
  EXPECT_EQ(r.cubes[0].cube, DyadicCube(1, {0}));
  EXPECT_EQ(r.cubes[0].average, 1.0);
  EXPECT_LT(0.6, r.cubes[0].eps * r.cubes[0].average);
  EXPECT_LE(r.cubes[0].eps * r.cubes[0].average, 2 * 0.6);
}

TEST(CZ, LargeLambdaGivesEmptyCollection) {
  Lcg rng(5);
  const auto f = random_grid(kUnit, 6, rng);
  const auto eps = EpsilonCollection::origin(1.2, 0.5);
  EXPECT_TRUE(cz_decompose(f, eps, eps.sup_bound() * f.sup_abs()).cubes.empty());
}

TEST(CZ, Errors) {
  const auto f = GridFunction::constant(kUnit, 3, 1.0);
  EXPECT_THROW(cz_decompose(f, EpsilonCollection::constant(1.0), 1.0), NotLocalizable);
  EXPECT_THROW(cz_decompose(f, EpsilonCollection::constant(1.0), 0.5), NotLocalizable);
  EXPECT_THROW(cz_decompose(f, EpsilonCollection::constant(1.0), INFINITY), NonfiniteInput);
  EXPECT_THROW(cz_decompose(f, EpsilonCollection::constant(1.0), NAN), NonfiniteInput);
}

// 200 pinned instances: invariants plus cell-exact agreement with {M_eps f > lambda}
TEST(CZ, PinnedInstancesMatchSuperlevelSet) {
  Lcg rng(42);
  for (int i = 0; i < 200; ++i) {
    const bool two_d = i % 2 == 1;
    const DyadicCube root = DyadicCube::unit(two_d ? 2 : 1);
    const auto f = random_grid(root, two_d ? 4 : 8, rng);
    const EpsilonCollection eps = (i % 3 == 0) ? EpsilonCollection::sqrt_side()
                                  : (i % 3 == 1 || two_d) ? random_level_table(rng, 8)
                                                          : EpsilonCollection::origin(1.2, 0.5);
    const double lo = eps.value(root) * f.abs().average(root);
    const auto m = oracle::maximal(f, eps);
    const double hi = *std::max_element(m.begin(), m.end());
    if (!(hi > lo)) continue;  // the root already attains the maximum
    const double lambda = lo + rng.uniform(0.05, 0.95) * (hi - lo);
    const auto r = cz_decompose(f, eps, lambda);

    const double upper = std::ldexp(lambda, root.dimension());
    for (std::size_t a = 0; a < r.cubes.size(); ++a) {
      const auto& c = r.cubes[a];
      const double v = c.eps * c.average;
      EXPECT_GT(v, lambda * (1 - 1e-12));
      EXPECT_LE(v, upper * (1 + 1e-12));
      EXPECT_NEAR(c.average, oracle::naive_average(f.abs(), c.cube), 1e-12 * std::max(1.0, c.average));
      if (c.cube.level() > root.level()) {
        const DyadicCube parent = c.cube.parent();
        EXPECT_LE(eps.value(parent) * oracle::naive_average(f.abs(), parent), lambda);
      }
      for (std::size_t b = a + 1; b < r.cubes.size(); ++b) {
        ASSERT_EQ(relation(c.cube, r.cubes[b].cube), Relation::disjoint);
      }
    }
    ASSERT_EQ(cz_cell_mask(r, f), oracle::superlevel_set(f, eps, lambda)) << "instance " << i;
  }
}
