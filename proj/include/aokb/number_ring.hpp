#pragma once

// Q and quadratic fields Q(sqrt d): integral bases, embeddings, field
// constants and primes above a rational prime.

#include "aokb/real.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aokb {

/// Element a + b*sqrt(d) of the ambient field; for K = Q, b is always 0.
struct QuadNumber {
  Rational a;
  Rational b;

  QuadNumber() = default;
  QuadNumber(Rational a_, Rational b_ = 0) : a(std::move(a_)), b(std::move(b_)) {}
  bool is_zero() const { return a == 0 && b == 0; }
  bool operator==(const QuadNumber&) const = default;
};

/// Real and imaginary parts of sigma(x), as certified intervals.
struct ComplexInterval {
  Interval re;
  Interval im;
};

struct Embedding {
  int index;
  bool real;
  int conjugate;  // index of the conjugate embedding (itself when real)
  int sqrt_sign;  // sigma(sqrt d) = sqrt_sign * sqrt(d) (principal root)
};

/// A number field of degree 1 or 2 with a fixed integral basis (1) or (1, omega).
class NumberField {
 public:
  static NumberField rationals();
  /// d squarefree, d not in {0, 1}.
  static NumberField quadratic(long d);

  int degree() const { return degree_; }
  /// Radicand; 1 for Q.
  long radicand() const { return d_; }
  const Integer& discriminant() const { return disc_; }
  bool is_rational() const { return degree_ == 1; }
  bool is_imaginary() const { return d_ < 0; }
  std::string descriptor() const;

  const std::vector<Embedding>& embeddings() const { return embeddings_; }
  int embedding_count() const { return static_cast<int>(embeddings_.size()); }

  /// Integral basis as field elements: {1} or {1, omega}.
  const std::vector<QuadNumber>& integral_basis() const { return basis_; }
  const QuadNumber& omega() const { return basis_.back(); }
  /// omega^2 = trace * omega - norm.
  const Integer& omega_trace() const { return omega_trace_; }
  const Integer& omega_norm() const { return omega_norm_; }

  QuadNumber add(const QuadNumber& x, const QuadNumber& y) const;
  QuadNumber sub(const QuadNumber& x, const QuadNumber& y) const;
  QuadNumber mul(const QuadNumber& x, const QuadNumber& y) const;
  QuadNumber inverse(const QuadNumber& x) const;
  QuadNumber conj(const QuadNumber& x) const;
  QuadNumber power(const QuadNumber& x, long n) const;
  Rational norm(const QuadNumber& x) const;
  Rational trace(const QuadNumber& x) const;

  /// Element with integral-basis coordinates (x1) or (x1, x2).
  QuadNumber from_coords(std::span<const std::int64_t> coords) const;
  /// Coordinates of x; std::nullopt when x is not in O_K.
  std::optional<std::vector<Integer>> to_coords(const QuadNumber& x) const;
  /// Integral-basis coordinates of omega * (x1 + x2 omega).
  std::array<std::int64_t, 2> times_omega(std::int64_t x1, std::int64_t x2) const;

  ComplexInterval embed(const QuadNumber& x, int sigma, mpfr_prec_t prec = kDefaultPrecision) const;
  Interval abs_embed(const QuadNumber& x, int sigma, mpfr_prec_t prec = kDefaultPrecision) const;
  /// x or conj(x), whichever y satisfies |tau(y)| = |sigma(x)|.
  QuadNumber transport_abs(const QuadNumber& x, int sigma, int tau) const;

  /// |sigma(x)| <= T, exact for rational T >= 0.
  bool abs_le(const QuadNumber& x, int sigma, const Rational& threshold) const;
  /// |sigma(x)| <= q * e^r; Unknown only at the precision cap.
  Tri abs_le_scaled(const QuadNumber& x, int sigma, const Rational& q, const Rational& r) const;

  /// Exact sign of a + b*sqrt(d) as a real number (real fields and Q only).
  int real_sign(const Rational& a, const Rational& b) const;

  /// det(sigma_j(a_i))^2 computed inside K; equals the discriminant.
  Rational embedding_determinant_squared() const;

  bool operator==(const NumberField& o) const { return d_ == o.d_ && degree_ == o.degree_; }

 private:
  NumberField() = default;
  int degree_ = 1;
  long d_ = 1;
  Integer disc_ = 1;
  Integer omega_trace_ = 0;
  Integer omega_norm_ = 0;
  std::vector<QuadNumber> basis_;
  std::vector<Embedding> embeddings_;
};

/// Parses "Q" or "Q(sqrt(d))".
NumberField make_field(std::string_view descriptor);

/// c = log 2 + (1/2 kappa) log |D_K|.
Interval minkowski_constant(const NumberField& field, mpfr_prec_t prec = kDefaultPrecision);

/// delta = max over basis elements a_i and embeddings sigma of log |a_i|_sigma.
Interval delta_constant(const NumberField& field, mpfr_prec_t prec = kDefaultPrecision);

/// The basis element and embedding attaining delta.
std::pair<QuadNumber, int> delta_witness(const NumberField& field);

enum class Splitting { Split, Inert, Ramified };

/// A prime ideal above a rational prime p.
///
/// For split and ramified primes the ideal is (p, omega - root) and the
/// residue map O_K -> F_p sends omega to `root`; inert primes are (p) with
/// residue field F_{p^2}.
struct PrimeData {
  NumberField field;
  long p = 0;
  Splitting splitting = Splitting::Split;
  long root = 0;
  Integer norm;  // N_wp
  /// A generator when one was found; all primes of Q, Q(i), Q(sqrt 2) have one.
  std::optional<QuadNumber> generator;

  bool contains(const QuadNumber& x) const;
  std::string describe() const;
};

bool is_prime(long n);

/// `which` selects among primes above p (0 = first, 1 = second); only split
/// primes have a second choice.
PrimeData residue_data(const NumberField& field, long p, int which = 0);

}  // namespace aokb
