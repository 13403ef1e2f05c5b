#include "aokb/errors.hpp"
#include "aokb/number_ring.hpp"

#include <gtest/gtest.h>

#include <optional>

using namespace aokb;

TEST(MakeField, Rationals) {
  const NumberField q = make_field("Q");
  EXPECT_EQ(q.degree(), 1);
  EXPECT_EQ(q.discriminant(), 1);
  ASSERT_EQ(q.integral_basis().size(), 1u);
  EXPECT_EQ(q.integral_basis()[0], QuadNumber(1));
  EXPECT_EQ(q.embedding_count(), 1);
}

TEST(MakeField, GaussianIntegers) {
  const NumberField f = make_field("Q(sqrt(-1))");
  EXPECT_EQ(f.degree(), 2);
  EXPECT_EQ(f.discriminant(), -4);
  EXPECT_EQ(f.omega(), QuadNumber(0, 1));
  EXPECT_EQ(f.embedding_count(), 2);
  EXPECT_EQ(f.embeddings()[0].conjugate, 1);
}

TEST(MakeField, RealQuadratic) {
  const NumberField f = make_field("Q(sqrt(2))");
  EXPECT_EQ(f.discriminant(), 8);
  EXPECT_EQ(f.omega(), QuadNumber(0, 1));
  const NumberField g = make_field("Q( sqrt( 5 ) )");
  EXPECT_EQ(g.discriminant(), 5);
  EXPECT_EQ(g.omega(), QuadNumber(Rational(1, 2), Rational(1, 2)));
}

TEST(MakeField, RejectsBadRadicands) {
  EXPECT_THROW(make_field("Q(sqrt(0))"), InvalidField);
  EXPECT_THROW(make_field("Q(sqrt(1))"), InvalidField);
  EXPECT_THROW(make_field("Q(sqrt(8))"), InvalidField);
  EXPECT_THROW(make_field("Q(sqrt(-4))"), InvalidField);
  EXPECT_THROW(make_field("R"), InvalidField);
  EXPECT_THROW(make_field("Q(sqrt(x))"), InvalidField);
}

class FieldSweep : public ::testing::TestWithParam<long> {};

TEST_P(FieldSweep, DeterminantSquaredIsDiscriminant) {
  const NumberField f = NumberField::quadratic(GetParam());
  EXPECT_EQ(f.embedding_determinant_squared(), Rational(f.discriminant()));
}

TEST_P(FieldSweep, OmegaSatisfiesItsPolynomial) {
  const NumberField f = NumberField::quadratic(GetParam());
  const QuadNumber w = f.omega();
  // w^2 - t w + n = 0
  QuadNumber lhs = f.sub(f.mul(w, w), f.mul(QuadNumber(Rational(f.omega_trace())), w));
  lhs = f.add(lhs, QuadNumber(Rational(f.omega_norm())));
  EXPECT_TRUE(lhs.is_zero());
  const auto c = f.times_omega(3, -2);
  std::int64_t xs[2] = {3, -2};
  EXPECT_EQ(f.from_coords(c), f.mul(f.from_coords(xs), w));
}

TEST_P(FieldSweep, CoordinatesRoundTrip) {
  const NumberField f = NumberField::quadratic(GetParam());
  for (std::int64_t a = -3; a <= 3; ++a) {
    for (std::int64_t b = -3; b <= 3; ++b) {
      std::int64_t xs[2] = {a, b};
      auto c = f.to_coords(f.from_coords(xs));
      ASSERT_TRUE(c);
      EXPECT_EQ((*c)[0], a);
      EXPECT_EQ((*c)[1], b);
    }
  }
  EXPECT_FALSE(f.to_coords(QuadNumber(Rational(1, 3))));
}

TEST_P(FieldSweep, AbsLeMatchesIntervals) {
  const NumberField f = NumberField::quadratic(GetParam());
  for (std::int64_t a = -4; a <= 4; ++a) {
    for (std::int64_t b = -4; b <= 4; ++b) {
      std::int64_t xs[2] = {a, b};
      const QuadNumber x = f.from_coords(xs);
      for (int s = 0; s < 2; ++s) {
        const Interval v = f.abs_embed(x, s);
        for (int T = 0; T <= 6; ++T) {
          const bool exact = f.abs_le(x, s, Rational(T));
          if (v.upper() < T) EXPECT_TRUE(exact);
          if (v.lower() > T) EXPECT_FALSE(exact);
        }
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Radicands, FieldSweep, ::testing::Values(-1, -2, -3, -5, -7, 2, 3, 5, 6, 13));

TEST(Constants, Minkowski) {
  EXPECT_NEAR(minkowski_constant(make_field("Q")).mid(), 0.693147, 1e-6);
  EXPECT_NEAR(minkowski_constant(make_field("Q(sqrt(-1))")).mid(), 1.039721, 1e-6);
  EXPECT_NEAR(minkowski_constant(make_field("Q(sqrt(2))")).mid(), 1.213008, 1e-6);
  EXPECT_LT(minkowski_constant(make_field("Q(sqrt(2))")).width(), 1e-12);
}

TEST(Constants, Delta) {
  EXPECT_EQ(delta_constant(make_field("Q")).mid(), 0.0);
  EXPECT_NEAR(delta_constant(make_field("Q(sqrt(-1))")).mid(), 0.0, 1e-30);
  EXPECT_NEAR(delta_constant(make_field("Q(sqrt(2))")).mid(), 0.346574, 1e-6);
  EXPECT_LT(delta_constant(make_field("Q(sqrt(2))")).width(), 1e-12);
  EXPECT_GE(delta_constant(make_field("Q(sqrt(-7))")).lower(), 0.0);
}

TEST(ResidueData, Norms) {
  EXPECT_EQ(residue_data(make_field("Q"), 5).norm, 5);
  EXPECT_EQ(residue_data(make_field("Q(sqrt(-1))"), 5, 0).norm, 5);
  EXPECT_EQ(residue_data(make_field("Q(sqrt(-1))"), 5, 1).norm, 5);
  EXPECT_EQ(residue_data(make_field("Q(sqrt(-1))"), 3).norm, 9);
  EXPECT_EQ(residue_data(make_field("Q(sqrt(-1))"), 2).splitting, Splitting::Ramified);
  EXPECT_EQ(residue_data(make_field("Q(sqrt(-1))"), 2).norm, 2);
}

TEST(ResidueData, GeneratorsHaveTheRightNorm) {
  for (const char* desc : {"Q(sqrt(-1))", "Q(sqrt(2))", "Q(sqrt(-2))"}) {
    const NumberField f = make_field(desc);
    for (long p : {2L, 3L, 5L, 7L, 17L}) {
      for (int which = 0; which < 2; ++which) {
        std::optional<PrimeData> found;
        try {
          found = residue_data(f, p, which);
        } catch (const NoSuchPrime&) {
          continue;
        }
        const PrimeData& pd = *found;
        ASSERT_TRUE(pd.generator) << desc << " p=" << p;
        EXPECT_EQ(abs(f.norm(*pd.generator)), Rational(pd.norm));
        EXPECT_TRUE(pd.contains(*pd.generator));
        EXPECT_TRUE(pd.contains(QuadNumber(Rational(p))));
        EXPECT_FALSE(pd.contains(QuadNumber(1)));
      }
    }
  }
}

TEST(ResidueData, Selectors) {
  EXPECT_THROW(residue_data(make_field("Q"), 5, 1), NoSuchPrime);
  EXPECT_THROW(residue_data(make_field("Q(sqrt(-1))"), 3, 1), NoSuchPrime);
  EXPECT_THROW(residue_data(make_field("Q(sqrt(-1))"), 5, 2), NoSuchPrime);
  EXPECT_THROW(residue_data(make_field("Q"), 4), NoSuchPrime);
  // Two primes above a split prime are distinct.
  const NumberField f = make_field("Q(sqrt(-1))");
  EXPECT_NE(residue_data(f, 5, 0).root, residue_data(f, 5, 1).root);
}
