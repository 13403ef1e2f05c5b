#include "aokb/number_ring.hpp"

#include "aokb/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace aokb {

namespace {

bool squarefree(long d) {
  long n = std::labs(d);
  for (long f = 2; f * f <= n; ++f) {
    if (n % (f * f) == 0) return false;
  }
  return true;
}

long mod(long a, long p) {
  long r = a % p;
  return r < 0 ? r + p : r;
}

Rational canon(Rational q) {
  q.canonicalize();
  return q;
}

}  // namespace

NumberField NumberField::rationals() {
  NumberField f;
  f.degree_ = 1;
  f.d_ = 1;
  f.disc_ = 1;
  f.basis_ = {QuadNumber(1)};
  f.embeddings_ = {Embedding{0, true, 0, 1}};
  return f;
}

NumberField NumberField::quadratic(long d) {
  if (d == 0 || d == 1 || !squarefree(d)) {
    throw InvalidField("Q(sqrt(" + std::to_string(d) + ")) needs a squarefree radicand other than 0 and 1");
  }
  NumberField f;
  f.degree_ = 2;
  f.d_ = d;
  if (mod(d, 4) == 1) {
    f.disc_ = d;
    f.basis_ = {QuadNumber(1), QuadNumber(Rational(1, 2), Rational(1, 2))};
    f.omega_trace_ = 1;
    f.omega_norm_ = (1 - d) / 4;
  } else {
    f.disc_ = Integer(4) * d;
    f.basis_ = {QuadNumber(1), QuadNumber(0, 1)};
    f.omega_trace_ = 0;
    f.omega_norm_ = -d;
  }
  if (d > 0) {
    f.embeddings_ = {Embedding{0, true, 0, 1}, Embedding{1, true, 1, -1}};
  } else {
    f.embeddings_ = {Embedding{0, false, 1, 1}, Embedding{1, false, 0, -1}};
  }
  return f;
}

std::string NumberField::descriptor() const {
  if (degree_ == 1) return "Q";
  return "Q(sqrt(" + std::to_string(d_) + "))";
}

QuadNumber NumberField::add(const QuadNumber& x, const QuadNumber& y) const {
  return {canon(x.a + y.a), canon(x.b + y.b)};
}

QuadNumber NumberField::sub(const QuadNumber& x, const QuadNumber& y) const {
  return {canon(x.a - y.a), canon(x.b - y.b)};
}

QuadNumber NumberField::mul(const QuadNumber& x, const QuadNumber& y) const {
  return {canon(x.a * y.a + x.b * y.b * d_), canon(x.a * y.b + x.b * y.a)};
}

QuadNumber NumberField::conj(const QuadNumber& x) const { return {x.a, canon(-x.b)}; }

Rational NumberField::norm(const QuadNumber& x) const {
  if (degree_ == 1) return x.a;
  return canon(x.a * x.a - x.b * x.b * d_);
}

Rational NumberField::trace(const QuadNumber& x) const { return canon(Rational(degree_) * x.a); }

QuadNumber NumberField::inverse(const QuadNumber& x) const {
  if (x.is_zero()) throw Error("inverse of zero");
  if (degree_ == 1) return QuadNumber(canon(1 / x.a));
  const Rational n = norm(x);
  const QuadNumber c = conj(x);
  return {canon(c.a / n), canon(c.b / n)};
}

QuadNumber NumberField::power(const QuadNumber& x, long n) const {
  QuadNumber base = n < 0 ? inverse(x) : x;
  unsigned long e = static_cast<unsigned long>(n < 0 ? -n : n);
  QuadNumber acc(1);
  while (e) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  return acc;
}

QuadNumber NumberField::from_coords(std::span<const std::int64_t> coords) const {
  if (static_cast<int>(coords.size()) != degree_) throw Error("coordinate vector has the wrong length");
  if (degree_ == 1) return QuadNumber(Rational(coords[0]));
  const QuadNumber& w = basis_[1];
  return {canon(Rational(coords[0]) + w.a * coords[1]), canon(w.b * coords[1])};
}

std::optional<std::vector<Integer>> NumberField::to_coords(const QuadNumber& x) const {
  if (degree_ == 1) {
    if (x.b != 0 || x.a.get_den() != 1) return std::nullopt;
    return std::vector<Integer>{x.a.get_num()};
  }
  const QuadNumber& w = basis_[1];
  Rational x2 = canon(x.b / w.b);
  Rational x1 = canon(x.a - x2 * w.a);
  if (x1.get_den() != 1 || x2.get_den() != 1) return std::nullopt;
  return std::vector<Integer>{x1.get_num(), x2.get_num()};
}

std::array<std::int64_t, 2> NumberField::times_omega(std::int64_t x1, std::int64_t x2) const {
  // (x1 + x2 w) w = x1 w + x2 (t w - n) = -n x2 + (x1 + t x2) w
  const std::int64_t t = omega_trace_.get_si();
  const std::int64_t n = omega_norm_.get_si();
  return {-n * x2, x1 + t * x2};
}

ComplexInterval NumberField::embed(const QuadNumber& x, int sigma, mpfr_prec_t prec) const {
  const Embedding& e = embeddings_.at(static_cast<std::size_t>(sigma));
  Interval a = Interval::from_rational(x.a, prec);
  if (degree_ == 1 || x.b == 0) return {a, Interval(prec)};
  Interval root = sqrt(Interval::from_rational(Rational(std::labs(d_)), prec));
  Interval bpart = Interval::from_rational(x.b * e.sqrt_sign, prec) * root;
  if (e.real) return {a + bpart, Interval(prec)};
  return {a, bpart};
}

Interval NumberField::abs_embed(const QuadNumber& x, int sigma, mpfr_prec_t prec) const {
  if (degree_ == 2 && d_ < 0) {
    return sqrt(Interval::from_rational(norm(x), prec));
  }
  ComplexInterval z = embed(x, sigma, prec);
  return abs(z.re);
}

QuadNumber NumberField::transport_abs(const QuadNumber& x, int sigma, int tau) const {
  if (degree_ == 1 || d_ < 0 || sigma == tau) return x;
  return conj(x);
}

int NumberField::real_sign(const Rational& a, const Rational& b) const {
  if (b == 0 || degree_ == 1) return sgn(a);
  if (d_ < 0) throw Error("real_sign on an imaginary field");
  if (a == 0) return sgn(b);
  if (sgn(a) == sgn(b)) return sgn(a);
  const Rational lhs = a * a;
  const Rational rhs = b * b * d_;
  return lhs > rhs ? sgn(a) : sgn(b);
}

bool NumberField::abs_le(const QuadNumber& x, int sigma, const Rational& threshold) const {
  if (threshold < 0) return false;
  if (degree_ == 1 || x.b == 0) return abs(x.a) <= threshold;
  if (d_ < 0) return norm(x) <= threshold * threshold;
  const Embedding& e = embeddings_.at(static_cast<std::size_t>(sigma));
  const Rational sb = x.b * e.sqrt_sign;
  return real_sign(threshold - x.a, -sb) >= 0 && real_sign(threshold + x.a, sb) >= 0;
}

Tri NumberField::abs_le_scaled(const QuadNumber& x, int sigma, const Rational& q, const Rational& r) const {
  if (r == 0) return abs_le(x, sigma, q) ? Tri::True : Tri::False;
  if (x.is_zero()) return Tri::True;
  return refine([&](mpfr_prec_t p) {
    Interval threshold = Interval::from_rational(q, p) * exp(Interval::from_rational(r, p));
    return certified_le(abs_embed(x, sigma, p), threshold);
  });
}

Rational NumberField::embedding_determinant_squared() const {
  if (degree_ == 1) return 1;
  const QuadNumber& w = basis_[1];
  // sigma_1(w) - sigma_0(w) = sigma_0(conj(w) - w); its square lies in Q.
  QuadNumber delta = sub(conj(w), w);
  QuadNumber sq = mul(delta, delta);
  if (sq.b != 0) throw Error("embedding determinant square is not rational");
  return sq.a;
}

NumberField make_field(std::string_view descriptor) {
  std::string s;
  for (char c : descriptor) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s == "Q") return NumberField::rationals();
  const std::string prefix = "Q(sqrt(";
  if (s.rfind(prefix, 0) == 0 && s.size() > prefix.size() + 2 && s.substr(s.size() - 2) == "))") {
    const std::string body = s.substr(prefix.size(), s.size() - prefix.size() - 2);
    char* end = nullptr;
    long d = std::strtol(body.c_str(), &end, 10);
    if (end && *end == '\0' && !body.empty()) return NumberField::quadratic(d);
  }
  throw InvalidField("unrecognised field descriptor '" + std::string(descriptor) + "'");
}

Interval minkowski_constant(const NumberField& field, mpfr_prec_t prec) {
  Interval log2 = log(Interval::from_integer(2, prec));
  if (abs(field.discriminant()) == 1) return log2;
  Interval logd = log(Interval::from_integer(abs(field.discriminant()), prec));
  return log2 + logd / Interval::from_integer(2 * field.degree(), prec);
}

std::pair<QuadNumber, int> delta_witness(const NumberField& field) {
  std::pair<QuadNumber, int> best{QuadNumber(1), 0};
  Interval best_abs = Interval::from_integer(1);
  for (const QuadNumber& a : field.integral_basis()) {
    for (const Embedding& e : field.embeddings()) {
      Interval v = field.abs_embed(a, e.index);
      if (v.lower() > best_abs.upper() || (certified_lt(best_abs, v) == Tri::True)) {
        best = {a, e.index};
        best_abs = v;
      }
    }
  }
  return best;
}

Interval delta_constant(const NumberField& field, mpfr_prec_t prec) {
  Interval best = Interval(prec);  // log 1 = 0 from the basis element 1
  for (const QuadNumber& a : field.integral_basis()) {
    for (const Embedding& e : field.embeddings()) {
      best = max(best, log(field.abs_embed(a, e.index, prec)));
    }
  }
  return best;
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long f = 2; f * f <= n; ++f) {
    if (n % f == 0) return false;
  }
  return true;
}

bool PrimeData::contains(const QuadNumber& x) const {
  auto coords = field.to_coords(x);
  if (!coords) return false;
  const Integer P = p;
  if (field.is_rational()) return (*coords)[0] % P == 0;
  if (splitting == Splitting::Inert) return (*coords)[0] % P == 0 && (*coords)[1] % P == 0;
  Integer v = (*coords)[0] + (*coords)[1] * root;
  return v % P == 0;
}

std::string PrimeData::describe() const {
  std::string kind = splitting == Splitting::Split ? "split" : splitting == Splitting::Inert ? "inert" : "ramified";
  if (field.is_rational()) return "(" + std::to_string(p) + ")";
  return "prime above " + std::to_string(p) + " (" + kind + ", N=" + norm.get_str() + ")";
}

PrimeData residue_data(const NumberField& field, long p, int which) {
  if (!is_prime(p)) throw NoSuchPrime(std::to_string(p) + " is not a rational prime");
  if (which < 0) throw NoSuchPrime("negative prime selector");
  PrimeData out{field, p, Splitting::Split, 0, Integer(p), std::nullopt};
  if (field.is_rational()) {
    if (which != 0) throw NoSuchPrime("only one prime above " + std::to_string(p) + " in Q");
    out.generator = QuadNumber(Rational(p));
    return out;
  }
  const long t = mod(field.omega_trace().get_si(), p);
  const long n = mod(field.omega_norm().get_si(), p);
  std::vector<long> roots;
  for (long r = 0; r < p; ++r) {
    if (mod(r * r - t * r + n, p) == 0) roots.push_back(r);
  }
  if (field.discriminant() % p == 0) {
    out.splitting = Splitting::Ramified;
    out.root = roots.at(0);
    if (which != 0) throw NoSuchPrime(std::to_string(p) + " is ramified: a single prime lies above it");
  } else if (roots.empty()) {
    out.splitting = Splitting::Inert;
    out.norm = Integer(p) * p;
    if (which != 0) throw NoSuchPrime(std::to_string(p) + " is inert: a single prime lies above it");
    out.generator = QuadNumber(Rational(p));
    return out;
  } else {
    out.splitting = Splitting::Split;
    if (which > 1) throw NoSuchPrime("only two primes above " + std::to_string(p));
    out.root = roots.at(static_cast<std::size_t>(which));
  }
  // Smallest element (by max-coordinate, then lexicographic) of norm +-N_wp inside wp.
  const Rational target(out.norm);
  for (std::int64_t radius = 1; radius <= 256 && !out.generator; ++radius) {
    for (std::int64_t x1 = -radius; x1 <= radius && !out.generator; ++x1) {
      for (std::int64_t x2 = -radius; x2 <= radius; ++x2) {
        if (std::max(std::llabs(x1), std::llabs(x2)) != radius) continue;
        std::int64_t c[2] = {x1, x2};
        QuadNumber x = field.from_coords(c);
        if (abs(field.norm(x)) == target && out.contains(x)) {
          out.generator = x;
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace aokb
