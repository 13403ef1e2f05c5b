#include "aokb/real.hpp"

#include "aokb/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <vector>

namespace aokb {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

Rational pow10(long e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(Integer(1), p) : Rational(p);
}

void set_rational(mpfr_ptr dst, const Rational& q, mpfr_rnd_t rnd) { mpfr_set_q(dst, q.get_mpq_t(), rnd); }

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw ConfigError("empty rational literal");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Integer num, den;
    if (num.set_str(trim(s.substr(0, slash)), 10) != 0 || den.set_str(trim(s.substr(slash + 1)), 10) != 0 || den == 0) {
      throw ConfigError("malformed rational '" + s + "'");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long frac = 0;
  bool seen_point = false, seen_digit = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      seen_digit = true;
      if (seen_point) ++frac;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  long exponent = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    try {
      std::size_t used = 0;
      exponent = std::stol(s.substr(i + 1), &used);
      i += 1 + used;
    } catch (const std::exception&) {
      throw ConfigError("malformed exponent in '" + s + "'");
    }
  }
  if (!seen_digit || i != s.size()) throw ConfigError("malformed number '" + s + "'");
  Rational q{Integer(digits, 10)};
  q *= pow10(exponent - frac);
  if (neg) q = -q;
  q.canonicalize();
  return q;
}

std::string rational_string(const Rational& value) {
  Rational q = value;
  q.canonicalize();
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Integer floor_rational(const Rational& q) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

// ---------------------------------------------------------------- Interval

Interval::Interval(mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& other) : prec_(other.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : Interval(other.prec_) {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
  if (this != &other) {
    prec_ = other.prec_;
    mpfr_set_prec(lo_, prec_);
    mpfr_set_prec(hi_, prec_);
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  std::swap(prec_, other.prec_);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::from_rational(const Rational& q, mpfr_prec_t prec) {
  Interval out(prec);
  set_rational(out.lo_, q, MPFR_RNDD);
  set_rational(out.hi_, q, MPFR_RNDU);
  return out;
}

Interval Interval::from_integer(const Integer& n, mpfr_prec_t prec) {
  Interval out(prec);
  mpfr_set_z(out.lo_, n.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(out.hi_, n.get_mpz_t(), MPFR_RNDU);
  return out;
}

Interval Interval::hull(const Interval& a, const Interval& b) {
  Interval out(std::max(a.prec_, b.prec_));
  mpfr_min(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return out;
}

Interval Interval::operator+(const Interval& o) const {
  Interval out(std::max(prec_, o.prec_));
  mpfr_add(out.lo_, lo_, o.lo_, MPFR_RNDD);
  mpfr_add(out.hi_, hi_, o.hi_, MPFR_RNDU);
  return out;
}

Interval Interval::operator-(const Interval& o) const {
  Interval out(std::max(prec_, o.prec_));
  mpfr_sub(out.lo_, lo_, o.hi_, MPFR_RNDD);
  mpfr_sub(out.hi_, hi_, o.lo_, MPFR_RNDU);
  return out;
}

Interval Interval::operator-() const {
  Interval out(prec_);
  mpfr_neg(out.lo_, hi_, MPFR_RNDD);
  mpfr_neg(out.hi_, lo_, MPFR_RNDU);
  return out;
}

Interval Interval::operator*(const Interval& o) const {
  const mpfr_prec_t p = std::max(prec_, o.prec_);
  Interval out(p);
  mpfr_t t;
  mpfr_init2(t, p);
  const __mpfr_struct* a[2] = {lo_, hi_};
  const __mpfr_struct* b[2] = {o.lo_, o.hi_};
  bool first = true;
  for (auto* x : a) {
    for (auto* y : b) {
      mpfr_mul(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, out.lo_)) mpfr_set(out.lo_, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, out.hi_)) mpfr_set(out.hi_, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  return out;
}

Interval Interval::operator/(const Interval& o) const {
  if (o.contains_zero()) throw Error("interval division by an interval containing zero");
  const mpfr_prec_t p = std::max(prec_, o.prec_);
  Interval inv(p);
  mpfr_ui_div(inv.lo_, 1, o.hi_, MPFR_RNDD);
  mpfr_ui_div(inv.hi_, 1, o.lo_, MPFR_RNDU);
  return *this * inv;
}

Interval log(const Interval& x) {
  if (!x.positive()) throw Error("log of a non-positive interval");
  Interval out(x.prec_);
  mpfr_log(out.lo_, x.lo_, MPFR_RNDD);
  mpfr_log(out.hi_, x.hi_, MPFR_RNDU);
  return out;
}

Interval exp(const Interval& x) {
  Interval out(x.prec_);
  mpfr_exp(out.lo_, x.lo_, MPFR_RNDD);
  mpfr_exp(out.hi_, x.hi_, MPFR_RNDU);
  return out;
}

Interval sqrt(const Interval& x) {
  Interval out(x.prec_);
  if (mpfr_sgn(x.lo_) < 0) {
    mpfr_set_zero(out.lo_, 1);
  } else {
    mpfr_sqrt(out.lo_, x.lo_, MPFR_RNDD);
  }
  if (mpfr_sgn(x.hi_) < 0) throw Error("sqrt of a negative interval");
  mpfr_sqrt(out.hi_, x.hi_, MPFR_RNDU);
  return out;
}

Interval abs(const Interval& x) {
  if (mpfr_sgn(x.lo_) >= 0) return x;
  if (mpfr_sgn(x.hi_) <= 0) return -x;
  Interval out(x.prec_);
  mpfr_set_zero(out.lo_, 1);
  mpfr_t t;
  mpfr_init2(t, x.prec_);
  mpfr_neg(t, x.lo_, MPFR_RNDU);
  mpfr_max(out.hi_, t, x.hi_, MPFR_RNDU);
  mpfr_clear(t);
  return out;
}

Interval max(const Interval& a, const Interval& b) {
  Interval out(std::max(a.prec_, b.prec_));
  mpfr_max(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return out;
}

double Interval::lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid() const {
  mpfr_t t;
  mpfr_init2(t, prec_ + 1);
  mpfr_add(t, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(t, t, 1, MPFR_RNDN);
  double d = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return d;
}

double Interval::width() const {
  mpfr_t t;
  mpfr_init2(t, prec_);
  mpfr_sub(t, hi_, lo_, MPFR_RNDU);
  double d = mpfr_get_d(t, MPFR_RNDU);
  mpfr_clear(t);
  return d;
}

double Interval::radius() const {
  // Half-width plus the rounding of the midpoint to double.
  const double m = mid();
  return std::max(upper() - m, m - lower()) * (1 + 1e-15) + std::abs(m) * 1.2e-16;
}

bool Interval::positive() const { return mpfr_sgn(lo_) > 0; }
bool Interval::negative() const { return mpfr_sgn(hi_) < 0; }
bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

Integer Interval::floor_lower() const {
  Integer out;
  mpfr_get_z(out.get_mpz_t(), lo_, MPFR_RNDD);
  return out;
}

Integer Interval::floor_upper() const {
  Integer out;
  mpfr_get_z(out.get_mpz_t(), hi_, MPFR_RNDD);
  return out;
}

bool Interval::floor_if_unique(Integer& out) const {
  Integer a = floor_lower();
  Integer b = floor_upper();
  if (a != b) return false;
  out = a;
  return true;
}

std::string Interval::decimal(int digits) const {
  mpfr_t t;
  mpfr_init2(t, prec_ + 1);
  mpfr_add(t, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(t, t, 1, MPFR_RNDN);
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, t);
  mpfr_clear(t);
  return std::string(buf.data());
}

Tri certified_le(const Interval& a, const Interval& b) {
  if (mpfr_lessequal_p(a.hi(), b.lo())) return Tri::True;
  if (mpfr_greater_p(a.lo(), b.hi())) return Tri::False;
  return Tri::Unknown;
}

Tri certified_lt(const Interval& a, const Interval& b) {
  if (mpfr_less_p(a.hi(), b.lo())) return Tri::True;
  if (mpfr_greaterequal_p(a.lo(), b.hi())) return Tri::False;
  return Tri::Unknown;
}

Tri refine(const std::function<Tri(mpfr_prec_t)>& decide, mpfr_prec_t start, mpfr_prec_t stop) {
  for (mpfr_prec_t p = start; p <= stop; p *= 2) {
    Tri t = decide(p);
    if (t != Tri::Unknown) return t;
  }
  return Tri::Unknown;
}

// ---------------------------------------------------------------- LogScalar

LogScalar LogScalar::log_of(const Rational& q) {
  if (q <= 0) throw Error("log of a non-positive rational " + rational_string(q));
  Rational c = q;
  c.canonicalize();
  return LogScalar(c, Rational(0));
}

LogScalar LogScalar::parse(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw ConfigError("empty real literal");
  LogScalar acc;
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    while (i < s.size() && (s[i] == '+' || s[i] == '-' || std::isspace(static_cast<unsigned char>(s[i])))) {
      if (s[i] == '-') sign = -sign;
      ++i;
    }
    // A term runs to the next top-level '+'/'-' that is not part of an exponent.
    std::size_t j = i;
    int depth = 0;
    for (; j < s.size(); ++j) {
      char c = s[j];
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (depth == 0 && (c == '+' || c == '-') && j > i && s[j - 1] != 'e' && s[j - 1] != 'E') break;
    }
    std::string term = trim(s.substr(i, j - i));
    if (term.empty()) throw ConfigError("malformed real '" + s + "'");
    LogScalar value;
    if (auto pos = term.find("log("); pos != std::string::npos) {
      if (term.back() != ')') throw ConfigError("malformed log term '" + term + "'");
      long mult = 1;
      if (pos > 0) {
        std::string coef = trim(term.substr(0, pos));
        if (coef.empty() || coef.back() != '*') throw ConfigError("malformed log term '" + term + "'");
        coef.pop_back();
        Rational c = parse_rational(coef);
        if (c.get_den() != 1) throw ConfigError("log coefficient must be an integer in '" + term + "'");
        mult = c.get_num().get_si();
      }
      Rational arg = parse_rational(term.substr(pos + 4, term.size() - pos - 5));
      if (arg <= 0) throw ConfigError("log of a non-positive number in '" + term + "'");
      value = LogScalar::log_of(arg).times(mult);
    } else {
      value = LogScalar::rational(parse_rational(term));
    }
    acc = sign > 0 ? acc + value : acc - value;
    i = j;
  }
  return acc;
}

LogScalar LogScalar::operator+(const LogScalar& o) const {
  Rational q = q_ * o.q_;
  q.canonicalize();
  Rational r = r_ + o.r_;
  r.canonicalize();
  return LogScalar(q, r);
}

LogScalar LogScalar::operator-(const LogScalar& o) const { return *this + (-o); }

LogScalar LogScalar::operator-() const {
  Rational q = 1 / q_;
  q.canonicalize();
  return LogScalar(q, -r_);
}

LogScalar LogScalar::times(long n) const {
  Rational q;
  const unsigned long e = static_cast<unsigned long>(n < 0 ? -n : n);
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), q_.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), q_.get_den_mpz_t(), e);
  q = n < 0 ? Rational(den, num) : Rational(num, den);
  q.canonicalize();
  Rational r = r_ * n;
  r.canonicalize();
  return LogScalar(q, r);
}

Interval LogScalar::interval(mpfr_prec_t prec) const {
  Interval r = Interval::from_rational(r_, prec);
  if (q_ == 1) return r;
  return log(Interval::from_rational(q_, prec)) + r;
}

Interval LogScalar::exp_interval(mpfr_prec_t prec) const {
  Interval q = Interval::from_rational(q_, prec);
  if (r_ == 0) return q;
  return q * exp(Interval::from_rational(r_, prec));
}

double LogScalar::approx() const { return interval().mid(); }

int LogScalar::sign() const {
  if (is_zero()) return 0;
  if (q_ == 1) return sgn(r_);
  if (r_ == 0) return q_ > 1 ? 1 : -1;
  if ((q_ > 1) == (r_ > 0)) return q_ > 1 ? 1 : -1;
  Tri pos = refine([&](mpfr_prec_t p) {
    Interval v = interval(p);
    if (v.positive()) return Tri::True;
    if (v.negative()) return Tri::False;
    return Tri::Unknown;
  });
  if (pos == Tri::Unknown) throw Error("sign of " + to_string() + " undecided at maximum precision");
  return pos == Tri::True ? 1 : -1;
}

std::string LogScalar::to_string() const {
  std::string out;
  if (q_ != 1) {
    if (q_ < 1) {
      Rational inv = 1 / q_;
      out = "-log(" + rational_string(inv) + ")";
    } else {
      out = "log(" + rational_string(q_) + ")";
    }
  }
  if (r_ != 0 || out.empty()) {
    std::string rs = rational_string(r_);
    if (!out.empty() && r_ > 0) out += "+";
    out += rs;
  }
  return out;
}

int compare(const LogScalar& a, const LogScalar& b) { return (a - b).sign(); }

Tri abs_le_scaled(const Rational& x, const Rational& q, const Rational& r) {
  const Rational ax = abs(x);
  if (r == 0) return ax <= q ? Tri::True : Tri::False;
  if (ax == 0) return Tri::True;
  return refine([&](mpfr_prec_t p) {
    Interval threshold = Interval::from_rational(q, p) * exp(Interval::from_rational(r, p));
    return certified_le(Interval::from_rational(ax, p), threshold);
  });
}

}  // namespace aokb
