#include "aokb/integer_span.hpp"

#include "aokb/errors.hpp"

#include <algorithm>

namespace aokb {

namespace {

bool to_int128(const Integer& z, __int128& out) {
  if (mpz_sizeinbase(z.get_mpz_t(), 2) > 120) return false;
  // Split into high/low 60-bit halves to stay within signed long.
  Integer a = abs(z);
  Integer lo = a % (Integer(1) << 60);
  Integer hi = a >> 60;
  __int128 v = static_cast<__int128>(hi.get_ui()) << 60;
  v += static_cast<__int128>(lo.get_ui());
  out = sgn(z) < 0 ? -v : v;
  return true;
}

std::int64_t mod(std::int64_t a, std::int64_t p) {
  std::int64_t r = a % p;
  return r < 0 ? r + p : r;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t p) {
  // p prime: a^(p-2)
  std::int64_t result = 1, base = mod(a, p);
  std::int64_t e = p - 2;
  while (e > 0) {
    if (e & 1) result = static_cast<std::int64_t>(static_cast<__int128>(result) * base % p);
    base = static_cast<std::int64_t>(static_cast<__int128>(base) * base % p);
    e >>= 1;
  }
  return result;
}

}  // namespace

IntegerSpan::IntegerSpan(std::size_t dimension) : dim_(dimension), denom_(1) {}

bool IntegerSpan::contains_fast(std::span<const std::int64_t> v, bool& overflow) const {
  overflow = false;
  for (std::size_t c = 0; c < dim_; ++c) {
    __int128 acc;
    if (__builtin_mul_overflow(denom128_, static_cast<__int128>(v[c]), &acc)) {
      overflow = true;
      return false;
    }
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      const std::int64_t coef = v[pivots_[i]];
      if (coef == 0) continue;
      __int128 term;
      if (__builtin_mul_overflow(rows128_[i][c], static_cast<__int128>(coef), &term) ||
          __builtin_sub_overflow(acc, term, &acc)) {
        overflow = true;
        return false;
      }
    }
    if (acc != 0) return false;
  }
  return true;
}

bool IntegerSpan::contains_exact(std::span<const std::int64_t> v) const {
  for (std::size_t c = 0; c < dim_; ++c) {
    Integer acc = denom_ * Integer(static_cast<long>(v[c]));
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      const std::int64_t coef = v[pivots_[i]];
      if (coef != 0) acc -= rows_[i][c] * Integer(static_cast<long>(coef));
    }
    if (acc != 0) return false;
  }
  return true;
}

bool IntegerSpan::contains(std::span<const std::int64_t> v) const {
  if (v.size() != dim_) throw Error("IntegerSpan: dimension mismatch");
  if (basis_.empty()) return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
  if (full()) return true;
  if (fits128_) {
    bool overflow = false;
    bool in = contains_fast(v, overflow);
    if (!overflow) return in;
  }
  return contains_exact(v);
}

bool IntegerSpan::add(std::span<const std::int64_t> v) {
  if (full() || contains(v)) return false;
  basis_.emplace_back(v.begin(), v.end());
  rebuild();
  return true;
}

void IntegerSpan::rebuild() {
  // Gaussian elimination over Q to reduced row echelon form.
  std::vector<std::vector<Rational>> m;
  for (const auto& b : basis_) {
    std::vector<Rational> row(dim_);
    for (std::size_t c = 0; c < dim_; ++c) row[c] = Rational(static_cast<long>(b[c]));
    m.push_back(std::move(row));
  }
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < dim_ && r < m.size(); ++c) {
    std::size_t sel = r;
    while (sel < m.size() && m[sel][c] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[r], m[sel]);
    const Rational inv = 1 / m[r][c];
    for (auto& x : m[r]) {
      x *= inv;
      x.canonicalize();
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (std::size_t k = 0; k < dim_; ++k) {
        m[i][k] -= f * m[r][k];
        m[i][k].canonicalize();
      }
    }
    pivots.push_back(c);
    ++r;
  }
  if (r != basis_.size()) throw Error("IntegerSpan: basis became dependent");
  Integer d = 1;
  for (const auto& row : m) {
    for (const auto& x : row) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den_mpz_t());
  }
  pivots_ = pivots;
  denom_ = d;
  rows_.assign(r, std::vector<Integer>(dim_));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t c = 0; c < dim_; ++c) {
      Rational scaled = m[i][c] * d;
      scaled.canonicalize();
      rows_[i][c] = scaled.get_num();
    }
  }
  fits128_ = to_int128(denom_, denom128_);
  rows128_.assign(r, std::vector<__int128>(dim_));
  for (std::size_t i = 0; i < r && fits128_; ++i) {
    for (std::size_t c = 0; c < dim_ && fits128_; ++c) fits128_ = to_int128(rows_[i][c], rows128_[i][c]);
  }
}

std::size_t integer_rank(const std::vector<std::vector<std::int64_t>>& vectors, std::size_t dimension) {
  IntegerSpan span(dimension);
  for (const auto& v : vectors) {
    span.add(v);
    if (span.full()) break;
  }
  return span.rank();
}

ModSpan::ModSpan(std::size_t dimension, std::int64_t p) : dim_(dimension), p_(p) {}

bool ModSpan::add(std::span<const std::int64_t> v) {
  if (full()) return false;
  std::vector<std::int64_t> w(dim_);
  for (std::size_t c = 0; c < dim_; ++c) w[c] = mod(v[c], p_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const std::int64_t f = w[pivots_[i]];
    if (f == 0) continue;
    for (std::size_t c = 0; c < dim_; ++c) w[c] = mod(w[c] - f * rows_[i][c], p_);
  }
  std::size_t piv = 0;
  while (piv < dim_ && w[piv] == 0) ++piv;
  if (piv == dim_) return false;
  const std::int64_t inv = inverse_mod(w[piv], p_);
  for (auto& x : w) x = mod(x * inv, p_);
  // Keep rows fully reduced against the new pivot.
  for (auto& row : rows_) {
    const std::int64_t f = row[piv];
    if (f == 0) continue;
    for (std::size_t c = 0; c < dim_; ++c) row[c] = mod(row[c] - f * w[c], p_);
  }
  rows_.push_back(std::move(w));
  pivots_.push_back(piv);
  return true;
}

}  // namespace aokb
