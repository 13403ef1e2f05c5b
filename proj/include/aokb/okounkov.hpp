#pragma once

// Okounkov bodies of O(m) on the projective line over Z, their volumes and the
// incidence (graph) construction over the generic fiber.

#include "aokb/valuation.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace aokb {

struct RationalPoint {
  Rational x;
  Rational y;
  auto operator<=>(const RationalPoint& o) const {
    if (auto c = cmp(x, o.x); c != 0) return c <=> 0;
    return cmp(y, o.y) <=> 0;
  }
  bool operator==(const RationalPoint& o) const { return x == o.x && y == o.y; }
};

/// Counterclockwise vertices, strictly convex, starting at the
/// lexicographically smallest vertex.
/// Degenerate hulls (fewer than three vertices or all collinear) keep their
/// extreme points and have area 0.
struct RationalPolygon {
  std::vector<RationalPoint> vertices;
  Rational area;
  bool degenerate = true;

  /// Point in the closed polygon (exact). Degenerate polygons test membership
  /// in the segment or point they span.
  bool contains(const RationalPoint& p) const;
  /// Every vertex of `inner` lies in this polygon.
  bool contains(const RationalPolygon& inner) const;
};

/// (b - a) x (c - a).
Rational cross(const RationalPoint& a, const RationalPoint& b, const RationalPoint& c);

/// Andrew's monotone chain on exact rationals.
RationalPolygon convex_hull(std::vector<RationalPoint> points);

/// Union over k = 1..k_max of v(kL) scaled by 1/k in both coordinates, sorted
/// and deduplicated. Levels run in parallel.
std::vector<RationalPoint> lambda_points(const SurfaceBundle& b, const FlagData& f, int k_max,
                                         const EnumerationOptions& opts = {});

/// Real output: certified enclosure plus a double for arithmetic on reports.
struct RealValue {
  Interval enclosure;
  double value = 0;
  static RealValue of(const Interval& i);
  nlohmann::json to_json() const;
};

struct CountingRow {
  int k = 0;
  std::size_t image_size = 0;
  RealValue count_term;  // #v(kL) / k^2 * log p
  RealValue h0_term;     // h0(kL) / k^2
  RealValue gap;         // |count_term - h0_term|
};

struct CountingLimitReport {
  std::vector<CountingRow> rows;
  /// Least-squares slope of gap against k (0 with fewer than two rows).
  double slope = 0;
  bool partial = false;
  int failed_k = 0;
};

CountingLimitReport counting_limit_report(const SurfaceBundle& b, const FlagData& f, int k_max,
                                          const EnumerationOptions& opts = {});

struct MainIdentityReport {
  int k_max = 0;
  RationalPolygon hull;
  std::size_t lambda_size = 0;
  RealValue hull_term;   // area(hull) * log p
  RealValue count_term;  // #v(k_max L) / k_max^2 * log p
  RealValue volume_term; // h0(k_max L) / k_max^2, i.e. vol/2 at level k_max
  /// |a - b| / |b|, b named second; 0 when both are 0.
  double hull_vs_count = 0;
  double hull_vs_volume = 0;
  double count_vs_volume = 0;
  bool degenerate = false;
  bool big = false;
};

MainIdentityReport main_identity_report(const SurfaceBundle& b, const FlagData& f, int k_max,
                                        const EnumerationOptions& opts = {});

/// |a - b| / |b|; 0 if both vanish, +inf if only b does.
double relative_difference(double a, double b);

enum class IncidenceSide { Archimedean, Finite };

struct IncidenceProfile {
  IncidenceSide side = IncidenceSide::Archimedean;
  int k = 0;
  int grid = 0;
  /// Twist grid t_j = j * step, j = 0..grid.
  Rational step;
  /// Per grid point, the segment Delta(t_j) = [lo, hi] (scaled by 1/k), or
  /// nothing once it is empty.
  std::vector<std::optional<std::pair<Rational, Rational>>> segments;
  /// x = j/k over the level-k segment at t = 0, and G(x) on the grid.
  std::vector<RationalPoint> graph;
  RationalPolygon body;
  /// Area error from the twist grid: step * length of the base segment.
  Rational refinement_bound;
  /// Delta(t') inside Delta(t) for t <= t' along the grid.
  bool decreasing = true;
  bool empty = true;
};

/// Twists L(-t) = (L, e^t ||.||) on the archimedean side, L (x) p^ceil(kt) on
/// the finite side; segments from the orders at the generic point z0 of the
/// short sections of the twisted level-k bundle.
IncidenceProfile bc_incidence(const SurfaceBundle& b, const GenericFlag& g, const FlagData& f, int k, int grid,
                              IncidenceSide side, const EnumerationOptions& opts = {});

struct BcVolumeReport {
  RealValue body_area;    // area of the graph body
  RealValue volume_term;  // h0(kL) / k^2
  RealValue scaled_area;  // area * log p on the finite side, area otherwise
  double relative = 0;    // scaled_area vs volume_term
  Rational refinement_bound;
};

BcVolumeReport bc_volume_report(const IncidenceProfile& profile, const SurfaceBundle& b, const FlagData& f,
                                const EnumerationOptions& opts = {});

nlohmann::json to_json(const RationalPolygon& p);
nlohmann::json to_json(const CountingLimitReport& r);
nlohmann::json to_json(const MainIdentityReport& r);
nlohmann::json to_json(const IncidenceProfile& p);
nlohmann::json to_json(const BcVolumeReport& r);

/// Plain SVG: the polygon, the points and labelled axes.
std::string hull_svg(const RationalPolygon& hull, const std::vector<RationalPoint>& points,
                     const std::string& x_label = "nu_1 / k", const std::string& y_label = "nu_2 / k");

}  // namespace aokb
