#pragma once

// O(m) on the projective line over Z with two norm families.

#include "aokb/normed_module.hpp"

#include <json.hpp>

#include <optional>
#include <variant>
#include <vector>

namespace aokb {

/// ||s|| = max_k |a_k| / b_k.
struct BoxWeights {
  std::vector<Rational> b;
  bool operator==(const BoxWeights&) const = default;
};

/// ||s|| = e^lambda sup_z |s(z)| / (1+|z|^2)^{m/2}.
struct FSScaled {
  LogScalar lambda;
  bool operator==(const FSScaled&) const = default;
};

/// Sections are integer polynomials a_0 + a_1 x + ... + a_m x^m.
class SurfaceBundle {
 public:
  static SurfaceBundle box(std::vector<Rational> weights);
  static SurfaceBundle fubini_study(int level, const LogScalar& lambda);

  int level() const { return level_; }
  bool is_box() const { return std::holds_alternative<BoxWeights>(family_); }
  const BoxWeights& box_weights() const { return std::get<BoxWeights>(family_); }
  const FSScaled& fs() const { return std::get<FSScaled>(family_); }

  /// The bundle kL at level k*m. Box weights: k-fold sum-convolution
  /// b^(k)_n = sum_{i+j=n} b^(k-1)_i b_j, so products of short sections stay
  /// short. FS: lambda scales by k.
  SurfaceBundle power(int k) const;

  /// {"level": m, "family": {"box": ["1", ...]} | {"fs": {"lambda": "-1"}}}
  nlohmann::json to_json() const;
  static SurfaceBundle from_json(const nlohmann::json& j);

  bool operator==(const SurfaceBundle&) const = default;

 private:
  SurfaceBundle(int level, std::variant<BoxWeights, FSScaled> family) : level_(level), family_(std::move(family)) {}
  int level_ = 0;
  std::variant<BoxWeights, FSScaled> family_;
};

/// Rank m+1 normed module over Z.
NormedModule sections_lattice(const SurfaceBundle& b);

/// h0 of kL.
LogScalar h0_hat_power(const SurfaceBundle& b, int k, const EnumerationOptions& opts = {});

/// sum_k log(2 floor(b_k) + 1), the box count in closed form.
LogScalar box_h0_closed_form(const BoxWeights& w);

struct VolumePoint {
  int k = 0;
  LogScalar h0;
  double normalized = 0;  // 2 h0 / k^2
  Integer undecided = 0;
};

struct VolumeEstimate {
  std::vector<VolumePoint> points;
  /// Richardson extrapolation assuming v_k = V + c/k + O(1/k^2); the last
  /// value when fewer than two points exist.
  double extrapolated = 0;
  /// v_k non-decreasing along the sequence.
  bool monotone = true;
  /// max |v_k - v_{k-1}| over the second half of the sequence.
  double oscillation = 0;
  bool big = false;
  /// Stopped early on the enumeration budget.
  bool partial = false;
  int failed_k = 0;
};

VolumeEstimate volume_estimate(const SurfaceBundle& b, int k_max, const EnumerationOptions& opts = {});
nlohmann::json to_json(const VolumeEstimate& v);

}  // namespace aokb
