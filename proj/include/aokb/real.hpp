#pragma once

// Exact rationals, certified MPFR intervals and exact log-linear reals.

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace aokb {

using Integer = mpz_class;
using Rational = mpq_class;

/// Three-valued outcome of a certified comparison.
enum class Tri { False, True, Unknown };

inline constexpr mpfr_prec_t kDefaultPrecision = 128;
inline constexpr mpfr_prec_t kMaxPrecision = 4096;

/// Parses "3", "-7/4", "2.5", "1e-3", "-0.125e2" into an exact rational.
Rational parse_rational(std::string_view text);

/// "num/den" (or "num" when den == 1).
std::string rational_string(const Rational& q);

Integer floor_rational(const Rational& q);

/// Closed interval [lo, hi] with MPFR endpoints rounded outward.
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec = kDefaultPrecision);
  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  static Interval from_rational(const Rational& q, mpfr_prec_t prec = kDefaultPrecision);
  static Interval from_integer(const Integer& n, mpfr_prec_t prec = kDefaultPrecision);
  static Interval hull(const Interval& a, const Interval& b);

  mpfr_prec_t precision() const { return prec_; }

  Interval operator+(const Interval& o) const;
  Interval operator-(const Interval& o) const;
  Interval operator*(const Interval& o) const;
  /// Requires o strictly positive or strictly negative.
  Interval operator/(const Interval& o) const;
  Interval operator-() const;

  friend Interval log(const Interval& x);  // requires x > 0
  friend Interval exp(const Interval& x);
  friend Interval sqrt(const Interval& x);  // clamps negative lower end to 0
  friend Interval abs(const Interval& x);
  friend Interval max(const Interval& a, const Interval& b);

  double lower() const;  // rounded down
  double upper() const;  // rounded up
  double mid() const;
  double radius() const;  // upper bound on half-width
  double width() const;   // upper bound on hi - lo

  bool positive() const;  // lo > 0
  bool negative() const;  // hi < 0
  bool contains_zero() const;

  /// Floor of every point in the interval, when it is the same integer.
  bool floor_if_unique(Integer& out) const;
  Integer floor_lower() const;
  Integer floor_upper() const;

  /// Midpoint with `digits` significant digits; deterministic formatting.
  std::string decimal(int digits = 17) const;

  const __mpfr_struct* lo() const { return lo_; }
  const __mpfr_struct* hi() const { return hi_; }

 private:
  mpfr_prec_t prec_;
  mpfr_t lo_;
  mpfr_t hi_;
};

/// a <= b certified: True iff hi(a) <= lo(b), False iff lo(a) > hi(b).
Tri certified_le(const Interval& a, const Interval& b);
Tri certified_lt(const Interval& a, const Interval& b);

/// Evaluates `f` at increasing precision until `decide` stops returning
/// Unknown or kMaxPrecision is reached.
Tri refine(const std::function<Tri(mpfr_prec_t)>& decide,
           mpfr_prec_t start = kDefaultPrecision, mpfr_prec_t stop = kMaxPrecision);

/// Exact real number log(q) + r with q > 0 and r rational.
///
/// Counts (log #S), arithmetic degrees of principal rank-one modules, twist
/// parameters and integer combinations of these all stay in this form, so
/// sums and integer multiples are exact. Two values are equal iff both parts
/// agree: log(q1/q2) = r2 - r1 with r2 != r1 would make e^(r2-r1) rational.
/// Order is therefore always decidable by interval refinement.
class LogScalar {
 public:
  LogScalar() : q_(1), r_(0) {}
  static LogScalar rational(const Rational& r) { return LogScalar(Rational(1), r); }
  static LogScalar log_of(const Rational& q);  // requires q > 0
  static LogScalar log_of(const Integer& n) { return log_of(Rational(n)); }
  /// Accepts sums of terms "r", "log(q)", "k*log(q)", e.g. "log(10)", "-log(2)+0.5".
  static LogScalar parse(std::string_view text);

  const Rational& log_argument() const { return q_; }
  const Rational& rational_part() const { return r_; }
  bool is_zero() const { return q_ == 1 && r_ == 0; }
  bool is_rational() const { return q_ == 1; }

  LogScalar operator+(const LogScalar& o) const;
  LogScalar operator-(const LogScalar& o) const;
  LogScalar operator-() const;
  LogScalar times(long n) const;
  LogScalar& operator+=(const LogScalar& o) { return *this = *this + o; }
  LogScalar& operator-=(const LogScalar& o) { return *this = *this - o; }

  bool operator==(const LogScalar& o) const { return q_ == o.q_ && r_ == o.r_; }

  Interval interval(mpfr_prec_t prec = kDefaultPrecision) const;
  /// Interval for e^(this) = q * e^r.
  Interval exp_interval(mpfr_prec_t prec = kDefaultPrecision) const;
  double approx() const;

  /// Exact sign (-1, 0, 1); refinement cannot fail for a nonzero value but is
  /// capped at kMaxPrecision, after which Unknown maps to an exception.
  int sign() const;

  /// Canonical text, e.g. "log(10)+1/2", "0", "-log(2)".
  std::string to_string() const;

 private:
  LogScalar(Rational q, Rational r) : q_(std::move(q)), r_(std::move(r)) {}
  Rational q_;
  Rational r_;
};

int compare(const LogScalar& a, const LogScalar& b);
inline bool operator<(const LogScalar& a, const LogScalar& b) { return compare(a, b) < 0; }
inline bool operator<=(const LogScalar& a, const LogScalar& b) { return compare(a, b) <= 0; }

inline std::ostream& operator<<(std::ostream& os, const LogScalar& x) { return os << x.to_string(); }

/// Decides |x| <= q * e^r for rational x; Unknown only at the precision cap.
Tri abs_le_scaled(const Rational& x, const Rational& q, const Rational& r);

}  // namespace aokb
