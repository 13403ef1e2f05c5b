#include "aokb/errors.hpp"
#include "aokb/filtration.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace aokb;

namespace {

RankOneModule z_twist(const LogScalar& a) { return RankOneModule::scalar(make_field("Q"), a); }

FiltrationInstance scalar_chain(const NormedModule& m, std::initializer_list<LogScalar> degrees) {
  FiltrationInstance inst{m, {}};
  for (const auto& a : degrees) inst.chain.push_back(RankOneModule::scalar(m.field(), a));
  return inst;
}

}  // namespace

TEST(Profile, ZWithAbsoluteValue) {
  const NormedModule z = NormedModule::uniform_box(make_field("Q"), {Rational(1)});
  const FiltrationProfile p = profile(scalar_chain(z, {LogScalar(), LogScalar::rational(1)}));
  ASSERT_EQ(p.ranks.size(), 2u);
  EXPECT_EQ(p.ranks[0], 1u);
  EXPECT_EQ(p.ranks[1], 0u);
  EXPECT_EQ(p.lower, LogScalar());
  EXPECT_EQ(p.h0, LogScalar::log_of(Integer(3)));
  // upper = h0(M(-1)) + r_0 * 1 = 0 + 1
  EXPECT_EQ(p.upper, LogScalar::rational(1));
  EXPECT_EQ(p.error_scale, LogScalar::rational(1));
}

TEST(Profile, EmptyChainSum) {
  const NormedModule m = NormedModule::uniform_box(make_field("Q"), {Rational(1), Rational(1)});
  const FiltrationProfile p = profile(scalar_chain(m, {LogScalar()}));
  EXPECT_EQ(p.lower, LogScalar());
  EXPECT_EQ(p.upper, p.h0);
  const KeyBoundsReport r = verify_key_bounds(p, Rational(0));
  EXPECT_TRUE(r.lower_holds);
  EXPECT_TRUE(r.upper_holds);
  ASSERT_TRUE(r.minimal_c);
  EXPECT_EQ(r.minimal_c->upper(), 0.0);
}

TEST(Profile, RadiusTenSquare) {
  const NormedModule m = NormedModule::uniform_box(make_field("Q"), {Rational(10), Rational(10)});
  const FiltrationProfile p = profile(
      scalar_chain(m, {LogScalar(), LogScalar::log_of(Integer(2)), LogScalar::log_of(Integer(5))}));
  EXPECT_EQ(p.ranks, (std::vector<std::size_t>{2, 2, 2}));
  EXPECT_EQ(p.lower, LogScalar::log_of(Integer(25)));
  EXPECT_EQ(p.h0, LogScalar::log_of(Integer(441)));
  EXPECT_EQ(p.h0_last, LogScalar::log_of(Integer(25)));
  EXPECT_EQ(p.upper, LogScalar::log_of(Integer(625)));
  // 2 log 2 + 2
  EXPECT_EQ(p.error_scale, LogScalar::log_of(Integer(4)) + LogScalar::rational(2));
  const KeyBoundsReport r = verify_key_bounds(p, Rational(1));
  EXPECT_TRUE(r.lower_holds);
  EXPECT_TRUE(r.upper_holds);
  EXPECT_NEAR(r.lower_margin.mid(), std::log(441.0 / 25) + 2 * std::log(2.0) + 2, 1e-12);
}

TEST(Profile, RejectsDecreasingDegrees) {
  const NormedModule m = NormedModule::uniform_box(make_field("Q"), {Rational(3)});
  EXPECT_THROW(profile(scalar_chain(m, {LogScalar(), LogScalar::rational(2), LogScalar::rational(1)})),
               InvalidInstance);
  EXPECT_THROW(profile(scalar_chain(m, {LogScalar::rational(1)})), InvalidInstance);
  EXPECT_THROW(profile(FiltrationInstance{m, {}}), InvalidInstance);
}

TEST(Profile, GaussianPrimeChain) {
  const NumberField f = make_field("Q(sqrt(-1))");
  const PrimeData p2 = residue_data(f, 2);
  const NormedModule m = NormedModule::uniform_box(f, {Rational(9, 2), Rational(3)});
  FiltrationInstance inst{m, {}};
  for (long i = 0; i <= 3; ++i) inst.chain.push_back(RankOneModule::prime_power(p2, -i));
  const FiltrationProfile p = profile(inst);
  for (long i = 0; i <= 3; ++i) EXPECT_EQ(p.alpha[static_cast<std::size_t>(i)], LogScalar::log_of(Integer(2)).times(i));
  // Oracle: M (x) wp^i has the short vectors of M divisible by (1+i)^i, i.e.
  // the box scan of the module with multiplier (1+i)^i.
  for (long i = 0; i <= 3; ++i) {
    const NormedModule t = tensor_rank_one(m, RankOneModule::prime_power(p2, i));
    const auto scan = oracle::naive_short_vectors(t, 2'000'000);
    ASSERT_TRUE(scan);
    EXPECT_EQ(p.ranks[static_cast<std::size_t>(i)], oracle::k_rank(-1, 2, 2, *scan)) << i;
  }
  const KeyBoundsReport r = verify_key_bounds(p, Rational(0));
  ASSERT_TRUE(r.minimal_c);
  EXPECT_LT(r.minimal_c->upper(), 5.0);
  const KeyBoundsReport with_c = verify_key_bounds(p, Rational(5));
  EXPECT_TRUE(with_c.lower_holds && with_c.upper_holds);
}

TEST(Profile, ScalarChainMatchesTwist) {
  // Over Q, M (x) Z(a)^dual and M(-a) have the same short vectors.
  const NormedModule m = NormedModule::uniform_box(make_field("Q"), {Rational(7, 2), Rational(11, 3), Rational(1, 2)});
  for (const char* a : {"0", "1/3", "log(2)", "log(3)-1/5", "2"}) {
    const LogScalar alpha = LogScalar::parse(a);
    const auto lhs = h0_hat_set(tensor_rank_one(m, dual_rank_one(z_twist(alpha)))).elements();
    const auto rhs = h0_hat_set(twist(m, -alpha)).elements();
    EXPECT_EQ(lhs, rhs) << a;
  }
}

class RandomProfiles : public ::testing::TestWithParam<const char*> {};

TEST_P(RandomProfiles, RanksAgreeWithOracle) {
  const NumberField f = make_field(GetParam());
  int compared = 0;
  for (int id = 0; id < 40; ++id) {
    const FiltrationInstance inst = random_instance(f, 7, id);
    const FiltrationProfile p = profile(inst);
    EXPECT_TRUE(p.ranks_monotone);
    EXPECT_EQ(p.undecided, 0);
    for (std::size_t i = 0; i < inst.chain.size(); ++i) {
      const NormedModule t = tensor_rank_one(inst.module, dual_rank_one(inst.chain[i]));
      const auto scan = oracle::naive_short_vectors(t, 40'000);
      if (!scan) continue;
      ++compared;
      EXPECT_EQ(p.ranks[i], oracle::k_rank(f.radicand(), f.degree(), t.rank(), *scan)) << id << " " << i;
      if (i == 0) EXPECT_EQ(p.h0, LogScalar::log_of(Integer(static_cast<long>(scan->size()))));
    }
    // The minimal constant makes both inequalities hold, and nothing smaller does.
    const KeyBoundsReport r = verify_key_bounds(p, Rational(0));
    ASSERT_TRUE(r.minimal_c);
    Rational c(static_cast<long>(std::ceil(r.minimal_c->upper() * 1000)) , 1000);
    const KeyBoundsReport at = verify_key_bounds(p, c);
    EXPECT_TRUE(at.lower_holds && at.upper_holds);
    if (r.minimal_c->lower() > 0.01) {
      Rational below(static_cast<long>(std::floor(r.minimal_c->lower() * 1000)) - 1, 1000);
      const KeyBoundsReport b = verify_key_bounds(p, below);
      EXPECT_FALSE(b.lower_holds && b.upper_holds);
    }
  }
  EXPECT_GT(compared, 40);
}

INSTANTIATE_TEST_SUITE_P(Fields, RandomProfiles, ::testing::Values("Q", "Q(sqrt(-1))", "Q(sqrt(2))"));

TEST(FiberDecomposition, UnitBoxOverTwo) {
  const NumberField q = make_field("Q");
  const NormedModule m = NormedModule::uniform_box(q, {Rational(1), Rational(1)});
  EXPECT_EQ(fiber_decomposition(m, residue_data(q, 2)), (std::vector<std::size_t>{2, 0}));
  EXPECT_EQ(fiber_decomposition(m, residue_data(q, 2), 3), (std::vector<std::size_t>{2, 0, 0, 0}));
  const EqTwoReport r = eq_two_gap(m, residue_data(q, 2));
  EXPECT_EQ(r.rank_sum, 2u);
  EXPECT_EQ(r.gap, LogScalar::log_of(Rational(9, 4)));
  EXPECT_NEAR(r.gap.approx(), 0.811, 1e-3);
}

TEST(FiberDecomposition, RadiusThreeOverThree) {
  const NumberField q = make_field("Q");
  const NormedModule m = NormedModule::uniform_box(q, {Rational(3), Rational(3)});
  EXPECT_EQ(fiber_decomposition(m, residue_data(q, 3)), (std::vector<std::size_t>{2, 2, 0}));
  EXPECT_THROW(fiber_decomposition(m, residue_data(q, 3), 1), ImaxTooSmall);
}

TEST(FiberDecomposition, AllZero) {
  const NumberField q = make_field("Q");
  const NormedModule m = NormedModule::uniform_box(q, {Rational(1, 2), Rational(1, 3)});
  EXPECT_EQ(fiber_decomposition(m, residue_data(q, 5)), (std::vector<std::size_t>{0}));
  const EqTwoReport r = eq_two_gap(m, residue_data(q, 5));
  EXPECT_TRUE(r.gap.is_zero());
  EXPECT_EQ(r.normalized.upper(), 0.0);
}

TEST(FiberDecomposition, HugeRadiusIsReported) {
  // Reaching i = 64 needs a radius beyond 2^64; the enumeration refuses first.
  const NumberField q = make_field("Q");
  const NormedModule m = NormedModule::uniform_box(q, {Rational(1)}, LogScalar::rational(50));
  EXPECT_THROW(fiber_decomposition(m, residue_data(q, 2)), BudgetExceeded);
}

TEST(FiberDecomposition, RanksNonIncreasingAndSearchAgrees) {
  for (const char* desc : {"Q", "Q(sqrt(-1))", "Q(sqrt(2))"}) {
    const NumberField f = make_field(desc);
    for (int id = 0; id < 20; ++id) {
      const FiltrationInstance inst = random_instance(f, 11, id, Rational(4));
      for (long p : {2L, 3L}) {
        const PrimeData pd = residue_data(f, p);
        const auto ranks = fiber_decomposition(inst.module, pd);
        for (std::size_t i = 1; i < ranks.size(); ++i) EXPECT_LE(ranks[i], ranks[i - 1]);
        // The located index is the first vanishing one.
        for (std::size_t i = 0; i + 1 < ranks.size(); ++i) EXPECT_GT(ranks[i], 0u);
        const auto longer = fiber_decomposition(inst.module, pd, static_cast<int>(ranks.size()) + 2);
        EXPECT_TRUE(std::equal(ranks.begin(), ranks.end(), longer.begin()));
      }
    }
  }
}

TEST(EqTwo, BoxSweepIsFinite) {
  // O(m) with unit coefficient weights scaled to radius 4, p = 2.
  const NumberField q = make_field("Q");
  for (int m = 1; m <= 8; ++m) {
    const NormedModule mod = NormedModule::uniform_box(q, std::vector<Rational>(static_cast<std::size_t>(m + 1), Rational(4)));
    const EqTwoReport r = eq_two_gap(mod, residue_data(q, 2));
    // 9 points per coordinate; multiples of 2 and 4 survive, 8 does not.
    const std::size_t h = static_cast<std::size_t>(m + 1);
    EXPECT_EQ(r.ranks, (std::vector<std::size_t>{h, h, h, 0}));
    EXPECT_EQ(r.gap, LogScalar::log_of(Rational(9, 8)).times(m + 1));
    EXPECT_LT(r.normalized.upper(), 1.0);
  }
}

TEST(Suite, DeterministicAcrossWorkers) {
  SuiteOptions o;
  o.field = "Q(sqrt(2))";
  o.instances = 30;
  o.seed = 3;
  o.enumeration.workers = 1;
  const SuiteResult a = run_suite(o);
  o.enumeration.workers = 4;
  const SuiteResult b = run_suite(o);
  EXPECT_EQ(suite_csv(a), suite_csv(b));
  EXPECT_EQ(suite_summary(a).dump(), suite_summary(b).dump());
  EXPECT_EQ(a.failures, 0);
  EXPECT_GE(a.max_minimal_c, a.median_minimal_c);
  EXPECT_EQ(suite_csv(a).substr(0, 42), "id,field,kappa,n,r0,h0,lower,upper,minimal");
}

TEST(Suite, InstancesDependOnlyOnSeedAndId) {
  const NumberField f = make_field("Q(sqrt(-1))");
  const FiltrationInstance a = random_instance(f, 5, 17);
  const FiltrationInstance b = random_instance(f, 5, 17);
  EXPECT_EQ(a.module, b.module);
  EXPECT_EQ(a.chain.size(), b.chain.size());
  EXPECT_FALSE(random_instance(f, 6, 17).module == a.module && random_instance(f, 5, 18).module == a.module);
  for (const auto& w : a.module.box_norms()[0].weights) {
    EXPECT_GE(w, Rational(49, 1000));
    EXPECT_LE(w, Rational(20086, 1000));
  }
}

TEST(Suite, FittedConstantCoversEveryRow) {
  for (const char* field : {"Q", "Q(sqrt(2))", "Q(sqrt(-1))"}) {
    SuiteOptions o;
    o.field = field;
    o.instances = 60;
    const SuiteResult r = run_suite(o);
    EXPECT_EQ(r.violations, 0) << field;
    EXPECT_GE(r.fitted_c.get_d(), r.max_minimal_c) << field;
    EXPECT_LE(r.fitted_c.get_d() - r.max_minimal_c, 1.01e-6) << field;
  }
}
