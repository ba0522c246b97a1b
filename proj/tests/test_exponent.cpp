#include <gtest/gtest.h>

#include <cmath>

#include "epsdyad/bank.hpp"
#include "epsdyad/conditions.hpp"
#include "epsdyad/lebesgue.hpp"

using namespace epsdyad;

namespace {

const DyadicCube kUnit = DyadicCube::unit(1);

// the origin exponent written out independently
double origin_p(double a, double x) {
  if (x <= 0) return 2.0;
  if (x >= 1) return 3.0;
  return 2.0 + 1.0 / std::pow(std::log2(2.0 / x), a);
}

std::vector<GridFunction> pinned_bank(int count, std::uint64_t seed, int depth = 8) {
  return make_bank({BankKind::random_cells, count, seed}, kUnit, depth);
}

}  // namespace

TEST(ExponentRange, OriginExponentOnNestedIntervals) {
  const auto p = ExponentFunction::origin(0.5);
  const auto r3 = p.range(DyadicCube(3, {0}));
  EXPECT_NEAR(r3.plus - r3.minus, 0.5, 1e-15);
  for (int n = 0; n <= 40; ++n) {
    const auto r = p.range(DyadicCube(n, {0}));
    EXPECT_EQ(r.minus, 2.0);
    EXPECT_NEAR(r.minus - r.plus, -std::pow(n + 1.0, -0.5), 1e-14);
    const auto rp = p.range(DyadicCube(n + 1, {1}));
    EXPECT_NEAR(rp.minus - rp.plus, std::pow(n + 2.0, -0.5) - std::pow(n + 1.0, -0.5), 1e-14);
  }
}

TEST(ExponentRange, ConstantAndGridAndStep) {
  EXPECT_EQ(ExponentFunction::constant(2.0).range(DyadicCube(5, {3})).minus, 2.0);
  EXPECT_EQ(ExponentFunction::constant(2.0).range(DyadicCube(5, {3})).plus, 2.0);

  const GridFunction values(kUnit, 2, {2.0, 3.0, 1.5, 4.0});
  const auto g = ExponentFunction::grid(values);
  EXPECT_EQ(g.range(DyadicCube(1, {0})).minus, 2.0);
  EXPECT_EQ(g.range(DyadicCube(1, {0})).plus, 3.0);
  EXPECT_EQ(g.range(kUnit).minus, 1.5);
  EXPECT_EQ(g.range(kUnit).plus, 4.0);
  EXPECT_THROW(g.range(DyadicCube(3, {0})), std::out_of_range);

  const auto s = ExponentFunction::step({0.5}, {2.0, 4.0});
  EXPECT_EQ(s.at(0.25), 2.0);
  EXPECT_EQ(s.at(0.5), 4.0);
  EXPECT_EQ(s.range(DyadicCube(1, {0})).plus, 2.0);
  EXPECT_EQ(s.range(kUnit).plus, 4.0);
}

TEST(ExponentFunction, RejectsOutOfRangeExponents) {
  EXPECT_THROW(ExponentFunction::constant(1.0), std::invalid_argument);
  EXPECT_THROW(ExponentFunction::constant(INFINITY), std::invalid_argument);
  EXPECT_THROW(ExponentFunction::origin(1.0), std::invalid_argument);
  EXPECT_THROW(ExponentFunction::step({0.5}, {2.0}), std::invalid_argument);
}

TEST(ExponentFunction, Conjugates) {
  EXPECT_EQ(ExponentFunction::constant(2.0).conjugate().at(0.3), 2.0);
  EXPECT_EQ(ExponentFunction::constant(3.0).conjugate().at(0.3), 1.5);
  const auto p = ExponentFunction::origin(0.5);
  const auto q = p.conjugate();
  // p tends to 2 at the origin only logarithmically
  EXPECT_NEAR(q.at(1e-300), p.at(1e-300) / (p.at(1e-300) - 1.0), 1e-15);
  EXPECT_GT(q.at(1e-300), q.at(1e-3));
  EXPECT_LT(q.at(1e-300), 2.0);
  EXPECT_EQ(q.at(0.0), 2.0);
  EXPECT_EQ(q.at(1.0), 1.5);
  EXPECT_EQ(q.p_minus(), 1.5);
  EXPECT_EQ(q.p_plus(), 2.0);
  for (int n = 0; n < 20; ++n) {
    const DyadicCube c(n + 1, {1});
    EXPECT_DOUBLE_EQ(q.range(c).minus, conjugate_value(p.range(c).plus));
    EXPECT_DOUBLE_EQ(q.range(c).plus, conjugate_value(p.range(c).minus));
  }
  const auto back = q.conjugate();
  for (double x = -0.5; x < 1.5; x += 0.01) {
    EXPECT_NEAR(back.at(x), p.at(x), 1e-12);
  }
}

TEST(Modular, ClosedForms) {
  const auto two = ExponentFunction::constant(2.0);
  EXPECT_DOUBLE_EQ(modular(GridFunction::constant(kUnit, 3, 2.0), two), 4.0);
  EXPECT_DOUBLE_EQ(modular(GridFunction::indicator(kUnit, 3, DyadicCube(1, {0})), two), 0.5);
}

TEST(Modular, OriginExponentMatchesPerCellLoop) {
  const auto p = ExponentFunction::origin(0.5);
  for (const auto& f : pinned_bank(20, 17)) {
    double ref = 0.0;
    for (std::size_t i = 0; i < f.cell_count(); ++i) {
      const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(f.cell_count());
      ref += std::pow(std::abs(f.value(i)), origin_p(0.5, x)) * f.cell_volume();
    }
    EXPECT_NEAR(modular(f, p), ref, 1e-13 * ref);
  }
}

TEST(Norm, ClosedForms) {
  const auto two = ExponentFunction::constant(2.0);
  EXPECT_NEAR(norm(GridFunction::constant(kUnit, 4, 1.0), two), 1.0, 1e-10);
  EXPECT_NEAR(norm(GridFunction::indicator(kUnit, 4, DyadicCube(1, {0})), two), std::sqrt(0.5), 1e-10);
  EXPECT_EQ(norm(GridFunction::zero(kUnit, 4), two), 0.0);
  EXPECT_THROW(norm(GridFunction::constant(kUnit, 1, 1.0), two, 0.0), std::invalid_argument);
}

TEST(Norm, TwoPieceExponentSolvesQuadratic) {
  // rho(2/lambda) = t/2 + t^2/2 with t = (2/lambda)^2; rho = 1 at t = 1
  const auto f = GridFunction::constant(kUnit, 3, 2.0);
  EXPECT_NEAR(norm(f, ExponentFunction::step({0.5}, {2.0, 4.0})), 2.0, 2e-10);
  const GridFunction pv(kUnit, 1, {2.0, 4.0});
  EXPECT_NEAR(norm(f, ExponentFunction::grid(pv)), 2.0, 2e-10);
}

TEST(Norm, ConstantExponentMatchesClosedForm) {
  for (const double p : {1.2, 1.5, 2.0, 3.0, 7.5}) {
    for (const auto& f : pinned_bank(20, 3)) {
      double s = 0.0;
      for (const double v : f.values()) s += std::pow(std::abs(v), p) * f.cell_volume();
      const double ref = std::pow(s, 1.0 / p);
      EXPECT_NEAR(norm(f, ExponentFunction::constant(p)), ref, 1e-8 * ref);
    }
  }
}

TEST(Norm, BisectionResidualAndModularInequality) {
  const auto p = ExponentFunction::origin(0.5);
  for (const auto& f : pinned_bank(50, 23)) {
    const double lambda = norm(f, p);
    EXPECT_LE(std::abs(modular(f.scaled(1.0 / lambda), p) - 1.0), 10 * kDefaultNormTolerance);
    for (const double target : {0.9, 0.5, 0.1}) {
      const auto g = f.scaled(target / lambda);
      const double n = norm(g, p);
      ASSERT_LE(n, 1.0);
      EXPECT_LE(modular(g, p), n + kDefaultInequalitySlack);
    }
  }
}

TEST(Norm, Homogeneity) {
  const auto p = ExponentFunction::origin(0.5);
  for (const auto& f : pinned_bank(30, 29)) {
    const double base = norm(f, p);
    for (const double c : {-3.0, 0.5, 7.0}) {
      EXPECT_NEAR(norm(f.scaled(c), p), std::abs(c) * base, 2 * kDefaultNormTolerance * std::abs(c) * base);
    }
  }
}

TEST(Holder, Examples) {
  const auto two = ExponentFunction::constant(2.0);
  const auto one = GridFunction::constant(kUnit, 3, 1.0);
  const auto zero = GridFunction::zero(kUnit, 3);
  const auto h0 = holder_pairing(one, zero, two);
  EXPECT_EQ(h0.pairing, 0.0);
  EXPECT_TRUE(h0.holds);
  const auto h1 = holder_pairing(one, one, two);
  EXPECT_DOUBLE_EQ(h1.pairing, 1.0);
  EXPECT_NEAR(h1.bound, 2.0, 1e-9);
  EXPECT_TRUE(h1.holds);
}

TEST(Holder, PinnedPairsUnderOriginExponent) {
  const auto p = ExponentFunction::origin(0.5);
  const auto fs = pinned_bank(500, 31);
  const auto gs = pinned_bank(500, 37);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    EXPECT_TRUE(holder_pairing(fs[i], gs[i], p).holds) << i;
  }
}

TEST(AssociateNorm, CauchySchwarzEqualityCase) {
  const auto two = ExponentFunction::constant(2.0);
  const auto f = pinned_bank(1, 41).front();
  const double fn = norm(f, two);
  const std::vector<GridFunction> bank{f.scaled(1.0 / fn), pinned_bank(1, 43).front()};
  EXPECT_NEAR(associate_norm_lower_bound(f, two, bank), fn, 1e-9);
  EXPECT_EQ(associate_norm_lower_bound(GridFunction::zero(kUnit, 8), two, bank), 0.0);
  EXPECT_THROW(associate_norm_lower_bound(f, two, std::vector<GridFunction>{}), std::invalid_argument);
}

TEST(AssociateNorm, BoundedByHolder) {
  const auto p = ExponentFunction::origin(0.5);
  const auto bank = pinned_bank(40, 47);
  for (const auto& f : pinned_bank(10, 53)) {
    const double r = associate_norm_lower_bound(f, p, bank);
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 2.0 * norm(f, p) + kDefaultInequalitySlack);
  }
}

TEST(Conditions, DieningConstantAndOrigin) {
  std::vector<DyadicCube> cubes;
  for (int n = 0; n <= 40; ++n) cubes.push_back(DyadicCube(n, {0}));
  const auto flat = check_diening(ExponentFunction::constant(2.5), cubes);
  for (const auto& r : flat.records) EXPECT_EQ(r.value, 1.0);

  const auto rep = check_diening(ExponentFunction::origin(0.5), cubes);
  for (int n = 0; n <= 40; ++n) {
    EXPECT_NEAR(rep.records[static_cast<std::size_t>(n)].value, std::exp2(n / std::sqrt(n + 1.0)),
                1e-12 * std::exp2(n / std::sqrt(n + 1.0)));
  }
  EXPECT_NEAR(rep.supremum, 75.9485, 1e-3);
  EXPECT_EQ(*rep.witness, DyadicCube(40, {0}));
  EXPECT_GT(rep.records[12].value, 10.0);
  EXPECT_LT(rep.records[11].value, 10.0);
}

TEST(Conditions, EpsDieningWithUnitEpsIsDiening) {
  const auto p = ExponentFunction::origin(0.3);
  const auto cubes = subcubes_at_level(kUnit, 6);
  const auto a = check_diening(p, cubes);
  const auto b = check_eps_diening(p, EpsilonCollection::constant(1.0), cubes);
  for (std::size_t i = 0; i < cubes.size(); ++i) EXPECT_EQ(a.records[i].value, b.records[i].value);
}

TEST(Conditions, OriginExampleClosedForms) {
  const double C = 1.2;
  const double a = 0.5;
  const auto p = ExponentFunction::origin(a);
  const auto eps = EpsilonCollection::origin(C, a);
  std::vector<DyadicCube> q, qp;
  for (int n = 0; n <= 40; ++n) {
    q.push_back(DyadicCube(n, {0}));
    qp.push_back(DyadicCube(n + 1, {1}));
  }
  for (const auto& r : check_eps_diening(p, eps, q).records) EXPECT_NEAR(r.value, C, 1e-9);
  const auto rep = check_eps_diening(p, eps, qp);
  double prev = INFINITY;
  for (int n = 0; n <= 40; ++n) {
    const double e = std::exp2(-n) * std::pow(C, std::sqrt(n + 1.0));
    const double closed = std::pow(std::exp2(n + 1) * e, std::pow(n + 1.0, -a) - std::pow(n + 2.0, -a));
    const double v = rep.records[static_cast<std::size_t>(n)].value;
    EXPECT_NEAR(v, closed, 1e-9 * closed);
    EXPECT_LE(v, prev);
    prev = v;
  }
  // (2C)^(1 - 2^-a) = 2.4^0.29289... = 1.29229...
  EXPECT_NEAR(rep.supremum, std::pow(2.4, 1.0 - std::pow(2.0, -0.5)), 1e-12);
  EXPECT_NEAR(rep.supremum, 1.2923, 1e-4);
  EXPECT_EQ(*rep.witness, DyadicCube(1, {1}));
}

TEST(Conditions, PointwiseFormBelowOneWhenBaseExceedsOne) {
  const auto p = ExponentFunction::origin(0.5);
  // eps tiny so |Q|/eps > 1 and the exponent p_- - p(x) <= 0
  const auto eps = EpsilonCollection::constant(1e-6);
  const auto rep = check_eps_diening_pointwise(p, eps, subcubes_at_level(kUnit, 5), 16);
  for (const auto& r : rep.records) EXPECT_LE(r.value, 1.0);
  const auto flat = check_eps_diening_pointwise(ExponentFunction::constant(2.0), EpsilonCollection::origin(1.2, 0.5),
                                                subcubes_at_level(kUnit, 4), 16);
  for (const auto& r : flat.records) EXPECT_EQ(r.value, 1.0);
}

TEST(Conditions, PointwiseFormApproachesRangeForm) {
  const auto p = ExponentFunction::origin(0.5);
  const auto eps = EpsilonCollection::origin(1.2, 0.5);
  std::vector<DyadicCube> cubes;
  for (int n = 0; n <= 20; ++n) {
    cubes.push_back(DyadicCube(n, {0}));
    cubes.push_back(DyadicCube(n + 1, {1}));
  }
  const auto range_form = check_eps_diening(p, eps, cubes);
  const auto sampled = check_eps_diening_pointwise(p, eps, cubes, 1 << 10);
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    EXPECT_LE(sampled.records[i].value, range_form.records[i].value * (1 + 1e-12));
    EXPECT_LE(range_form.records[i].value - sampled.records[i].value, 1e-3) << cubes[i].token();
  }
}

TEST(Conditions, DecayAtInfinity) {
  std::vector<double> xs;
  for (int k = -20; k <= 20; ++k) {
    xs.push_back(std::ldexp(1.0, k));
    xs.push_back(-std::ldexp(1.0, k));
  }
  EXPECT_EQ(check_lh_infty(ExponentFunction::constant(2.0), xs, 2.0).c_inf, 0.0);

  const auto p = ExponentFunction::origin(0.5);
  const auto fit = check_lh_infty(p, xs);
  ASSERT_TRUE(fit.p_inf_positive && fit.p_inf_negative);
  EXPECT_EQ(*fit.p_inf_positive, 3.0);
  EXPECT_EQ(*fit.p_inf_negative, 2.0);

  // with p_inf = 3 only x < 1 contributes: finite on any bounded sample set
  std::vector<double> positive;
  for (int k = -20; k <= 20; ++k) positive.push_back(std::ldexp(1.0, k));
  const auto right = check_lh_infty(p, positive, 3.0);
  EXPECT_TRUE(std::isfinite(right.c_inf));
  EXPECT_FALSE(right.growing_at_boundary);

  // mis-specified limit: C_inf keeps growing with the sampled range
  double prev = 0.0;
  for (int k = 1; k <= 20; ++k) {
    std::vector<double> pts;
    for (int j = 0; j <= k; ++j) pts.push_back(std::ldexp(1.0, j));
    const auto bad = check_lh_infty(p, pts, 2.5);
    EXPECT_GT(bad.c_inf, prev);
    EXPECT_TRUE(bad.growing_at_boundary);
    prev = bad.c_inf;
  }
}

TEST(Conditions, ConjugateTransferIsFinite) {
  const auto p = ExponentFunction::origin(0.5);
  const auto eps = EpsilonCollection::origin(1.2, 0.5);
  std::vector<DyadicCube> cubes;
  for (int n = 0; n <= 40; ++n) {
    cubes.push_back(DyadicCube(n, {0}));
    cubes.push_back(DyadicCube(n + 1, {1}));
  }
  const auto t = check_conjugate_transfer(p, eps, cubes);
  EXPECT_TRUE(std::isfinite(t.conjugate_report.supremum));
  // kappa = p_+^2 / ((p')_-)^2 = 9 / 2.25
  EXPECT_DOUBLE_EQ(t.kappa, 4.0);
  const double c = check_eps_diening(p, eps, cubes).supremum;
  EXPECT_LE(t.conjugate_report.supremum, std::pow(c, t.kappa));
}
