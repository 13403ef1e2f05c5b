#pragma once

// Sup-norm certification and short-section enumeration for the Fubini-Study
// metric on O(m) over the projective line.

#include "aokb/normed_module.hpp"

#include <span>
#include <vector>

namespace aokb::fs {

/// Integer bounds B_j with |a_j| <= B_j for every s with e^lambda * sup |s|/(1+|z|^2)^{m/2} <= 1.
///
/// From Cauchy's estimate on the circle |z| = r with r^2 = j/(m-j):
///   |a_j| <= e^{-lambda} m^{m/2} / (j^{j/2} (m-j)^{(m-j)/2}),   0^0 = 1.
std::vector<std::int64_t> coefficient_bounds(int level, const LogScalar& lambda);

/// Certified decision of e^lambda * sup_z |s(z)| / (1+|z|^2)^{m/2} <= 1.
///
/// Monomials are decided exactly from sup = |a_j| sqrt(j^j (m-j)^(m-j) / m^m).
/// Other sections: sample points give certified violations, then branch and
/// bound over the closed unit disc for s and for z^m s(1/z) (together they
/// cover the whole line), with cell-wise Lipschitz bounds and a rounding slack.
/// Unknown when cells keep straddling the threshold at the depth limit.
Tri sup_le(std::span<const std::int64_t> coeffs, const LogScalar& lambda);

/// Interval enclosing sup_z |s(z)| / (1+|z|^2)^{m/2}, from the same branch and bound
/// run to a relative resolution of about 1e-9.
Interval sup_norm(std::span<const std::int64_t> coeffs, mpfr_prec_t prec = 64);

/// All short sections, lexicographic; parallel over a_0 with an ordered merge.
/// The budget counts coefficient visits plus branch and bound cells.
ShortVectorSet enumerate(int level, const LogScalar& lambda, const EnumerationOptions& opts);

}  // namespace aokb::fs
