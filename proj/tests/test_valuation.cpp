#include "aokb/errors.hpp"
#include "aokb/filtration.hpp"
#include "aokb/valuation.hpp"

#include <gtest/gtest.h>

#include <random>
#include <thread>

using namespace aokb;

namespace {

std::vector<Rational> weights(std::initializer_list<long> w) {
  std::vector<Rational> out;
  for (long x : w) out.emplace_back(x);
  return out;
}

/// Straight-line valuation: divide by p while every coefficient is divisible,
/// then the first Taylor coefficient at a that is nonzero mod p.
ValuationVector straight_line_nu(const Vec& s, long p, std::optional<long> a) {
  std::vector<Integer> c;
  for (auto x : s) c.emplace_back(static_cast<long>(x));
  std::int64_t nu1 = 0;
  for (;;) {
    bool divisible = true;
    for (const auto& x : c) divisible = divisible && mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(p));
    if (!divisible) break;
    for (auto& x : c) x /= p;
    ++nu1;
  }
  if (!a) {
    std::reverse(c.begin(), c.end());
    a = 0;
  }
  const std::size_t n = c.size();
  for (std::size_t t = 0; t < n; ++t) {
    Integer taylor = 0;
    for (std::size_t j = t; j < n; ++j) {
      Integer binom, apow;
      mpz_bin_uiui(binom.get_mpz_t(), j, t);
      mpz_ui_pow_ui(apow.get_mpz_t(), static_cast<unsigned long>(*a), j - t);
      taylor += binom * apow * c[j];
    }
    if (!mpz_divisible_ui_p(taylor.get_mpz_t(), static_cast<unsigned long>(p))) return {nu1, static_cast<std::int64_t>(t)};
  }
  throw std::logic_error("zero section");
}

Vec multiply(const Vec& a, const Vec& b) {
  Vec c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

}  // namespace

TEST(Nu, Examples) {
  EXPECT_EQ(nu(Vec{1}, FlagData::make(7, 3)), (ValuationVector{0, 0}));
  EXPECT_EQ(nu(Vec{1, 0}, FlagData::make(2, std::nullopt)), (ValuationVector{0, 1}));
  EXPECT_EQ(nu(Vec{0, 2}, FlagData::make(2, 0)), (ValuationVector{1, 1}));
  EXPECT_EQ(nu(Vec{-1, 0, 1}, FlagData::make(5, 1)), (ValuationVector{0, 1}));
  EXPECT_EQ(nu(Vec{1, -2, 1}, FlagData::make(5, 1)), (ValuationVector{0, 2}));
  // At infinity: m minus the degree of the reduction; 5x^2 + 1 reduces to 1.
  EXPECT_EQ(nu(Vec{1, 0, 5}, FlagData::make(5, std::nullopt)), (ValuationVector{0, 2}));
  EXPECT_THROW(nu(Vec{0, 0}, FlagData::make(2, 0)), UndefinedValuation);
  EXPECT_THROW(FlagData::make(4, 0), ConfigError);
  EXPECT_EQ(FlagData::make(5, -1).point, 4);
}

TEST(Nu, MatchesStraightLine) {
  std::mt19937_64 rng(5);
  for (long p : {2L, 3L, 5L, 7L}) {
    for (int trial = 0; trial < 400; ++trial) {
      const int m = static_cast<int>(rng() % 7);
      Vec s(static_cast<std::size_t>(m + 1));
      const std::int64_t scale = trial % 3 == 0 ? p * p : 1;
      for (auto& x : s) x = (static_cast<std::int64_t>(rng() % 41) - 20) * scale;
      if (std::all_of(s.begin(), s.end(), [](auto x) { return x == 0; })) continue;
      for (std::optional<long> a : {std::optional<long>(), std::optional<long>(0), std::optional<long>(1),
                                    std::optional<long>(p - 1)}) {
        EXPECT_EQ(nu(s, FlagData::make(p, a)), straight_line_nu(s, p, a));
      }
    }
  }
}

TEST(Nu, AdditiveOnProducts) {
  std::mt19937_64 rng(6);
  for (long p : {2L, 3L, 5L}) {
    for (int trial = 0; trial < 300; ++trial) {
      Vec s(1 + rng() % 4), t(1 + rng() % 4);
      for (auto& x : s) x = static_cast<std::int64_t>(rng() % 25) - 12;
      for (auto& x : t) x = static_cast<std::int64_t>(rng() % 25) - 12;
      if (std::all_of(s.begin(), s.end(), [](auto x) { return x == 0; })) continue;
      if (std::all_of(t.begin(), t.end(), [](auto x) { return x == 0; })) continue;
      for (std::optional<long> a : {std::optional<long>(), std::optional<long>(1)}) {
        const FlagData f = FlagData::make(p, a);
        const ValuationVector vs = nu(s, f), vt = nu(t, f), vst = nu(multiply(s, t), f);
        EXPECT_EQ(vst.nu1, vs.nu1 + vt.nu1);
        EXPECT_EQ(vst.nu2, vs.nu2 + vt.nu2);
      }
    }
  }
}

TEST(NuGeneric, Examples) {
  EXPECT_EQ(nu_generic(Vec{1}, GenericFlag{Rational(0)}), 0);
  EXPECT_EQ(nu_generic(Vec{1, -2, 1}, GenericFlag{Rational(1)}), 2);
  EXPECT_EQ(nu_generic(Vec{4, 2}, GenericFlag{Rational(-2)}), 1);
  EXPECT_EQ(nu_generic(Vec{-1, 2}, GenericFlag{Rational(1, 2)}), 1);
  // (2x - 1)^2 (x + 3) = 4x^3 + 8x^2 - 11x + 3
  EXPECT_EQ(nu_generic(Vec{3, -11, 8, 4}, GenericFlag{Rational(1, 2)}), 2);
  EXPECT_EQ(nu_generic(Vec{3, -11, 8, 4}, GenericFlag{Rational(-3)}), 1);
  EXPECT_EQ(nu_generic(Vec{3, -11, 8, 4}, GenericFlag{Rational(1, 3)}), 0);
  EXPECT_EQ(nu_generic(Vec{1, 1, 0, 0}, GenericFlag{}), 2);
  EXPECT_THROW(nu_generic(Vec{0}, GenericFlag{}), UndefinedValuation);
  EXPECT_EQ(GenericFlag::from_json(nlohmann::json::parse(R"({"z0": "1/2"})")).z0, Rational(1, 2));
  EXPECT_FALSE(GenericFlag::from_json(nlohmann::json::parse(R"({"z0": "inf"})")).z0);
}

TEST(ValuationImage, Examples) {
  for (ImagePath path : {ImagePath::Auto, ImagePath::Literal}) {
    EXPECT_EQ(valuation_image(SurfaceBundle::box(weights({1, 1})), FlagData::make(2, 0), 1, path),
              (std::vector<ValuationVector>{{0, 0}, {0, 1}}));
    EXPECT_TRUE(valuation_image(SurfaceBundle::box({Rational(1, 2), Rational(1, 3)}), FlagData::make(2, 0), 1, path).empty());
    EXPECT_EQ(valuation_image(SurfaceBundle::box(weights({3, 3})), FlagData::make(3, 0), 1, path),
              (std::vector<ValuationVector>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
  }
}

TEST(ValuationImage, FastPathMatchesScan) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = static_cast<int>(rng() % 4);
    std::vector<Rational> w;
    for (int j = 0; j <= m; ++j) w.emplace_back(static_cast<long>(rng() % 16), static_cast<long>(1 + rng() % 4));
    for (auto& x : w) if (x == 0) x = Rational(1, 2);
    const SurfaceBundle b = SurfaceBundle::box(w);
    for (long p : {2L, 3L, 5L}) {
      for (std::optional<long> a : {std::optional<long>(), std::optional<long>(0), std::optional<long>(1),
                                    std::optional<long>(2)}) {
        const FlagData f = FlagData::make(p, a);
        for (int k = 1; k <= 2; ++k) {
          if (LogScalar::log_of(Integer(200'000)) < box_h0_closed_form(b.power(k).box_weights())) continue;
          EXPECT_EQ(valuation_image(b, f, k, ImagePath::Auto), valuation_image(b, f, k, ImagePath::Literal))
              << trial << " " << f.describe() << " k=" << k;
        }
      }
    }
  }
}

TEST(ValuationImage, Bounds) {
  const SurfaceBundle b = SurfaceBundle::box(weights({2, 5, 1}));
  for (int k = 1; k <= 3; ++k) {
    for (const auto& v : valuation_image(b, FlagData::make(2, 1), k)) {
      EXPECT_GE(v.nu2, 0);
      EXPECT_LE(v.nu2, 2 * k);
      EXPECT_GE(v.nu1, 0);
    }
  }
}

TEST(ValuationImage, ConcurrentCallsAgree) {
  clear_valuation_cache();
  const SurfaceBundle b = SurfaceBundle::box(weights({5, 7, 5, 3}));
  const FlagData f = FlagData::make(3, 1);
  std::vector<std::vector<ValuationVector>> got(8);
  std::vector<std::thread> ts;
  for (std::size_t t = 0; t < got.size(); ++t) ts.emplace_back([&, t] { got[t] = valuation_image(b, f, 1, ImagePath::Literal); });
  for (auto& t : ts) t.join();
  for (const auto& g : got) EXPECT_EQ(g, got[0]);
  EXPECT_FALSE(got[0].empty());
}

TEST(ValuationImage, FubiniStudyUsesTheScan) {
  const SurfaceBundle b = SurfaceBundle::fubini_study(2, LogScalar());
  // Short sections at lambda = 0 include 1, x^2, 2x, 1 + x^2 (exact ties).
  const auto img = valuation_image(b, FlagData::make(2, 0), 1);
  EXPECT_EQ(img, (std::vector<ValuationVector>{{0, 0}, {0, 1}, {0, 2}, {1, 1}}));
}

TEST(FiberReduction, Examples) {
  const SurfaceBundle unit = SurfaceBundle::box(weights({1, 1}));
  for (ImagePath path : {ImagePath::Auto, ImagePath::Literal}) {
    FiberReductionReport r = fiber_reduction(unit, FlagData::make(2, 0), 1, 0, path);
    EXPECT_EQ(r.distinct_orders, 2u);
    EXPECT_EQ(r.fp_dimension, 2u);
    EXPECT_EQ(r.z_rank, 2u);
    r = fiber_reduction(unit, FlagData::make(2, 0), 1, 3, path);
    EXPECT_EQ(r.distinct_orders, 0u);
    EXPECT_EQ(r.fp_dimension, 0u);
    EXPECT_TRUE(r.lm_equal && r.injective);
    r = fiber_reduction(SurfaceBundle::box(weights({3, 3})), FlagData::make(3, 0), 1, 1, path);
    EXPECT_EQ(r.distinct_orders, 2u);
    EXPECT_EQ(r.fp_dimension, 2u);
    r = fiber_reduction(SurfaceBundle::box(weights({4, 4, 4})), FlagData::make(2, 0), 1, 1, path);
    EXPECT_TRUE(r.injective);
    EXPECT_EQ(r.z_rank, 3u);
  }
  EXPECT_TRUE(lm_identity_check(unit, FlagData::make(2, 1), 1, 0).lm_equal);
  EXPECT_TRUE(reduction_injection_check(unit, FlagData::make(2, 1), 1, 0).injective);
}

TEST(FiberReduction, ThinResidueSetsBreakTheCount) {
  // Over F_5 the reductions of {-1,0,1}^3 miss (x-1)^2 = x^2 - 2x + 1, so only
  // two orders at 1 occur while the span has dimension 3.
  const SurfaceBundle b = SurfaceBundle::box(weights({1, 1, 1}));
  for (ImagePath path : {ImagePath::Auto, ImagePath::Literal}) {
    const FiberReductionReport r = fiber_reduction(b, FlagData::make(5, 1), 1, 0, path);
    EXPECT_EQ(r.distinct_orders, 2u);
    EXPECT_EQ(r.fp_dimension, 3u);
    EXPECT_FALSE(r.lm_equal);
  }
}

TEST(FiberReduction, FastPathMatchesScan) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = static_cast<int>(rng() % 4);
    std::vector<Rational> w;
    for (int j = 0; j <= m; ++j) w.emplace_back(static_cast<long>(1 + rng() % 40), static_cast<long>(1 + rng() % 3));
    const SurfaceBundle b = SurfaceBundle::box(w);
    for (long p : {2L, 3L, 5L}) {
      const FlagData f = FlagData::make(p, static_cast<long>(rng() % static_cast<std::uint64_t>(p)));
      for (int i = 0; i <= 2; ++i) {
        const auto x = fiber_reduction(b, f, 1, i, ImagePath::Auto);
        const auto y = fiber_reduction(b, f, 1, i, ImagePath::Literal);
        EXPECT_EQ(x.distinct_orders, y.distinct_orders);
        EXPECT_EQ(x.fp_dimension, y.fp_dimension);
        EXPECT_EQ(x.z_rank, y.z_rank);
        EXPECT_TRUE(y.injective);
      }
    }
  }
}

TEST(EqOne, ValuationCountEqualsRankSum) {
  // Exact whenever every residue set is a subspace: p in {2, 3}, or the
  // monomial points 0 and infinity.
  const NumberField q = make_field("Q");
  for (int m = 0; m <= 6; ++m) {
    const SurfaceBundle b = SurfaceBundle::box(std::vector<Rational>(static_cast<std::size_t>(m + 1), Rational(1)));
    for (long p : {2L, 3L, 5L}) {
      const auto ranks = fiber_decomposition(sections_lattice(b), residue_data(q, p));
      std::size_t sum = 0;
      for (auto r : ranks) sum += r;
      for (std::optional<long> a : {std::optional<long>(0), std::optional<long>(1), std::optional<long>()}) {
        if (p == 5 && a == 1 && m >= 2) continue;
        EXPECT_EQ(valuation_image(b, FlagData::make(p, a), 1, ImagePath::Literal).size(), sum)
            << "m=" << m << " p=" << p;
      }
    }
  }
}
