#pragma once

// Lattice-point filtrations of a normed module by a chain of rank-one
// modules, the fiber decomposition along a prime and the randomized suite.

#include "aokb/normed_module.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace aokb {

/// M together with L_0, ..., L_n, L_0 trivial and deg L_0 <= ... <= deg L_n.
struct FiltrationInstance {
  NormedModule module;
  std::vector<RankOneModule> chain;

  /// deg_hat(L_i); throws InvalidInstance unless 0 = a_0 <= a_1 <= ... <= a_n.
  std::vector<LogScalar> degrees() const;
};

struct FiltrationProfile {
  std::vector<LogScalar> alpha;
  /// r_i = rank over O_K of the span of H0(M (x) L_i^dual).
  std::vector<std::size_t> ranks;
  LogScalar h0;       // h0(M)
  LogScalar h0_last;  // h0(M (x) L_n^dual)
  LogScalar lower;    // sum_{i>=1} r_i (a_i - a_{i-1})
  LogScalar upper;    // h0_last + sum_{i>=1} r_{i-1} (a_i - a_{i-1})
  /// r_0 log r_0 + r_0, with r_0 log r_0 := 0 for r_0 <= 1.
  LogScalar error_scale;
  bool ranks_monotone = true;
  /// Vectors left undecided by the enumerations (always 0 for box modules).
  Integer undecided = 0;
};

FiltrationProfile profile(const FiltrationInstance& inst, const EnumerationOptions& opts = {});

struct KeyBoundsReport {
  Rational c;
  LogScalar lower_gap;  // h0 - lower
  LogScalar upper_gap;  // upper - h0
  /// gap + c * error_scale
  Interval lower_margin;
  Interval upper_margin;
  bool lower_holds = false;
  bool upper_holds = false;
  /// Smallest c >= 0 for which both hold; empty when none exists
  /// (only possible when error_scale = 0).
  std::optional<Interval> minimal_c;
};

KeyBoundsReport verify_key_bounds(const FiltrationProfile& p, const Rational& c);
KeyBoundsReport verify_key_bounds(const FiltrationInstance& inst, const Rational& c,
                                  const EnumerationOptions& opts = {});

/// Ranks of the O_K-spans of H0(M (x) wp^i) for i = 0..i_max, the last one 0.
/// Without i_max the smallest i with H0(M (x) wp^i) = {0} is located by a
/// doubling search capped at 64. Throws ImaxTooSmall when the tail is not 0.
std::vector<std::size_t> fiber_decomposition(const NormedModule& m, const PrimeData& prime,
                                             std::optional<int> i_max = std::nullopt,
                                             const EnumerationOptions& opts = {});

struct EqTwoReport {
  LogScalar h0;
  std::size_t rank_sum = 0;
  LogScalar gap;  // |h0 - rank_sum log N(wp)|
  int generic_rank = 0;
  /// gap / (h log h) with h the generic rank; log h replaced by 1 for h <= 2.
  Interval normalized;
  std::vector<std::size_t> ranks;
};

EqTwoReport eq_two_gap(const NormedModule& m, const PrimeData& prime, std::optional<int> i_max = std::nullopt,
                       const EnumerationOptions& opts = {});

// ---------------------------------------------------------------------------
// Randomized suite

struct SuiteOptions {
  std::string field = "Q";
  int instances = 200;
  std::uint64_t seed = 1;
  /// Every weight is multiplied by this before enumeration.
  Rational radius_factor{1};
  EnumerationOptions enumeration;
};

struct SuiteRow {
  int id = 0;
  std::string field;
  int kappa = 0;
  int n = 0;
  std::size_t r0 = 0;
  LogScalar h0;
  LogScalar lower;
  LogScalar upper;
  std::optional<Interval> minimal_c;
  LogScalar error_scale;
};

struct SuiteResult {
  std::vector<SuiteRow> rows;
  /// Over rows with a finite minimal c.
  double max_minimal_c = 0;
  double median_minimal_c = 0;
  /// Rows without a finite minimal c.
  int failures = 0;
  /// Smallest multiple of 10^-6 above every minimal c.
  Rational fitted_c{0};
  /// Rows where either inequality fails at fitted_c (decided exactly).
  int violations = 0;
};

/// Box module of rank 1..4 with weights log-uniform in [e^-3, e^3] (rounded to
/// multiples of 1/1000) and a chain of 0..6 scalar twists whose degree
/// increments are multiples of 1/20 in [0, 3/2]. Depends only on (seed, id).
FiltrationInstance random_instance(const NumberField& field, std::uint64_t seed, int id,
                                   const Rational& radius_factor = Rational(1));

SuiteResult run_suite(const SuiteOptions& opts);
std::string suite_csv(const SuiteResult& r);
nlohmann::json suite_summary(const SuiteResult& r);

}  // namespace aokb
