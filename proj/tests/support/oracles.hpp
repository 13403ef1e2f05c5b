#pragma once

// Reference implementations used only by tests. They share no code paths
// with the library beyond the data types.

#include "aokb/normed_module.hpp"
#include "aokb/okounkov.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace oracle {

using aokb::Vec;

/// Half-widths of the coordinate box that contains every short vector.
std::vector<std::int64_t> box_half_widths(const aokb::NormedModule& m);

/// Full scan of the coordinate box with an independent norm evaluation.
/// std::nullopt when the box has more than max_volume points.
std::optional<std::vector<Vec>> naive_short_vectors(const aokb::NormedModule& m, std::uint64_t max_volume);

/// |a + b sqrt(d)| <= T for real d > 0 by repeated squaring (exact).
bool real_quadratic_abs_le(const aokb::Rational& a, const aokb::Rational& b, long d, const aokb::Rational& T);

/// Dimension over K of the span of `vs` (vectors of integral-basis
/// coordinates, `rank` components each), by elimination over K.
std::size_t k_rank(long d, int degree, int rank, const std::vector<Vec>& vs);

/// Gift wrapping with orientation tests only: counterclockwise, strictly
/// convex, from the smallest point. Fewer than three distinct points come
/// back as they are.
std::vector<aokb::RationalPoint> jarvis(std::vector<aokb::RationalPoint> pts);

/// Shoelace area of a counterclockwise polygon.
aokb::Rational shoelace(const std::vector<aokb::RationalPoint>& v);

}  // namespace oracle
