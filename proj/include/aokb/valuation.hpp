#pragma once

// Flag valuations on sections of O(m) over the projective line over Z.

#include "aokb/surface_model.hpp"

#include <json.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace aokb {

/// Y_1 = fiber over p, Y_2 = the point a of the projective line over F_p
/// (std::nullopt is the point at infinity).
struct FlagData {
  long p = 2;
  std::optional<long> point;

  /// Checks p prime and reduces the point to [0, p).
  static FlagData make(long p, std::optional<long> point);
  /// {"p": 2, "point": "0" | "inf"}
  static FlagData from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  std::string describe() const;
  bool operator==(const FlagData&) const = default;
};

/// A rational point of the projective line over Q; std::nullopt is infinity.
struct GenericFlag {
  std::optional<Rational> z0;

  /// {"z0": "1/2" | "inf"}
  static GenericFlag from_json(const nlohmann::json& j);
};

struct ValuationVector {
  std::int64_t nu1 = 0;
  std::int64_t nu2 = 0;
  auto operator<=>(const ValuationVector&) const = default;
};

/// nu_1 = p-adic valuation of the content of s; nu_2 = order at the point of
/// the reduction of s / p^nu_1 (at infinity: m minus its degree). The level m
/// is s.size() - 1. Throws UndefinedValuation for s = 0.
ValuationVector nu(std::span<const std::int64_t> s, const FlagData& f);

/// Order of vanishing of s at z0 over Q (at infinity: m minus deg s).
std::int64_t nu_generic(std::span<const std::int64_t> s, const GenericFlag& g);

/// Order at `point` of a polynomial over F_p; coefficients already reduced,
/// not all zero.
std::int64_t order_mod_p(std::vector<std::int64_t> c, long p, const std::optional<long>& point);

enum class ImagePath {
  Auto,     // closed forms for box bundles, the scan otherwise
  Literal,  // valuation of every short section
};

/// v(kL): distinct nu-values of the nonzero short sections of kL, sorted.
/// Cached by (bundle, flag, k, path); safe to call from several threads.
std::vector<ValuationVector> valuation_image(const SurfaceBundle& b, const FlagData& f, int k,
                                             ImagePath path = ImagePath::Auto,
                                             const EnumerationOptions& opts = {});
void clear_valuation_cache();

struct FiberReductionReport {
  int i = 0;
  /// Number of distinct orders at the point among nonzero reductions.
  std::size_t distinct_orders = 0;
  /// F_p-dimension of the span of the reductions.
  std::size_t fp_dimension = 0;
  /// Z-rank of the span of H0(kL (x) p^i).
  std::size_t z_rank = 0;
  bool lm_equal = false;
  bool injective = false;
};

/// Both sides of the dimension identity for H0(kL (x) p^i) restricted to Y_1,
/// and the comparison with the Z-rank before reduction.
FiberReductionReport fiber_reduction(const SurfaceBundle& b, const FlagData& f, int k, int i,
                                     ImagePath path = ImagePath::Auto, const EnumerationOptions& opts = {});
FiberReductionReport lm_identity_check(const SurfaceBundle& b, const FlagData& f, int k, int i,
                                       const EnumerationOptions& opts = {});
FiberReductionReport reduction_injection_check(const SurfaceBundle& b, const FlagData& f, int k, int i,
                                               const EnumerationOptions& opts = {});

}  // namespace aokb
