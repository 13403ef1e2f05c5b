#include "aokb/fubini_study.hpp"

#include "aokb/errors.hpp"
#include "aokb/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace aokb::fs {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kMaxCells = 60'000;      // per membership test
constexpr std::size_t kMaxNormCells = 600'000;  // per sup_norm step

/// A polynomial in double precision with the bounds used by branch and bound.
struct Poly {
  std::vector<double> a;  // exact: coefficients are small integers
  int m = 0;

  /// s(z) and s'(z) by Horner.
  void eval(std::complex<double> z, std::complex<double>& s, std::complex<double>& ds) const {
    s = 0;
    ds = 0;
    for (int j = m; j >= 0; --j) {
      ds = ds * z + s;
      s = s * z + a[static_cast<std::size_t>(j)];
    }
  }
  /// sum |a_j| r^j
  double abs_sum(double r) const {
    double acc = 0;
    for (int j = m; j >= 0; --j) acc = acc * r + std::abs(a[static_cast<std::size_t>(j)]);
    return acc;
  }
  /// sum j |a_j| r^(j-1), a bound for |s'| on |z| <= r
  double deriv_sum(double r) const {
    double acc = 0;
    for (int j = m; j >= 1; --j) acc = acc * r + j * std::abs(a[static_cast<std::size_t>(j)]);
    return acc;
  }
  /// sum j (j-1) |a_j| r^(j-2), a bound for |s''| on |z| <= r
  double deriv2_sum(double r) const {
    double acc = 0;
    for (int j = m; j >= 2; --j) acc = acc * r + j * (j - 1) * std::abs(a[static_cast<std::size_t>(j)]);
    return acc;
  }
};

Poly make_poly(std::span<const std::int64_t> c, bool reversed) {
  Poly p;
  p.m = static_cast<int>(c.size()) - 1;
  p.a.resize(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    p.a[j] = static_cast<double>(reversed ? c[c.size() - 1 - j] : c[j]);
  }
  return p;
}

/// Polar cell [r0, r1] x [t0, t1] of the closed unit disc (upper half; the
/// coefficients are real, so |s(conj z)| = |s(z)|).
struct Cell {
  double r0, r1, t0, t1;
};

/// Bounds for G(z) = |s(z)|^2 - T (1+|z|^2)^m on a cell.
///
/// Upper: Taylor at the centre c with the Hessian of |s|^2 bounded by
/// 2|s'|^2 + 2|s||s''|; the term -T(1+|z|^2)^m is concave, so it only lowers G.
/// Lower: G(c) itself. Both carry a slack for floating-point error.
struct CellBounds {
  double upper;
  double at_centre_lower;
};

CellBounds bound_cell(const Poly& p, const Cell& c, double T) {
  const double rc = 0.5 * (c.r0 + c.r1);
  const double tc = 0.5 * (c.t0 + c.t1);
  const double reach = 0.5 * (c.r1 - c.r0) + c.r1 * 0.5 * (c.t1 - c.t0);
  const std::complex<double> z = std::polar(rc, tc);
  std::complex<double> s, ds;
  p.eval(z, s, ds);
  const double A = p.abs_sum(c.r1), A1 = p.deriv_sum(c.r1), A2 = p.deriv2_sum(c.r1);
  const double q = 1 + rc * rc;
  const double w = std::pow(q, p.m);
  const double g = std::norm(s) - T * w;
  const std::complex<double> grad = 2.0 * s * std::conj(ds) - T * 2.0 * p.m * std::pow(q, p.m - 1) * z;
  const double hess = 2 * A1 * A1 + 2 * A * A2;
  const double u = 16.0 * (p.m + 3) * kEps;
  const double slack = u * (A * A + T * w) + u * reach * (A * A1 + T * p.m * std::pow(1 + c.r1 * c.r1, p.m)) + 1e-300;
  return {g + std::abs(grad) * reach + 0.5 * hess * reach * reach + slack, g - slack};
}

std::vector<Cell> initial_cells() {
  std::vector<Cell> cells;
  constexpr int nr = 8, nt = 8;
  for (int i = 0; i < nr; ++i) {
    for (int k = 0; k < nt; ++k) {
      cells.push_back({static_cast<double>(i) / nr, static_cast<double>(i + 1) / nr, std::numbers::pi * k / nt,
                       std::numbers::pi * (k + 1) / nt});
    }
  }
  return cells;
}

/// Decides |s|^2 <= T (1+|z|^2)^m on the closed unit disc, with T known to
/// lie in [t_lo, t_hi].
Tri disc_le(const Poly& p, double t_lo, double t_hi, std::size_t& cells_used, std::size_t cap) {
  std::vector<Cell> stack = initial_cells();
  // Centres first: a certified violation ends the search early.
  for (const Cell& c : stack) {
    ++cells_used;
    if (bound_cell(p, c, t_hi).at_centre_lower > 0) return Tri::False;
  }
  bool undecided = false;
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    if (++cells_used > cap) return Tri::Unknown;
    if (bound_cell(p, c, t_hi).at_centre_lower > 0) return Tri::False;
    if (bound_cell(p, c, t_lo).upper <= 0) continue;
    if (c.r1 - c.r0 < 1e-7) {
      undecided = true;
      continue;
    }
    const double rm = 0.5 * (c.r0 + c.r1), tm = 0.5 * (c.t0 + c.t1);
    stack.push_back({c.r0, rm, c.t0, tm});
    stack.push_back({c.r0, rm, tm, c.t1});
    stack.push_back({rm, c.r1, c.t0, tm});
    stack.push_back({rm, c.r1, tm, c.t1});
  }
  return undecided ? Tri::Unknown : Tri::True;
}

Tri whole_line_le(std::span<const std::int64_t> coeffs, double t_lo, double t_hi, std::size_t cap = kMaxCells,
                  std::size_t* used = nullptr) {
  std::size_t local_cells = 0;
  std::size_t& cells = used ? *used : local_cells;
  Tri verdict = Tri::True;
  for (bool reversed : {false, true}) {
    const Tri t = disc_le(make_poly(coeffs, reversed), t_lo, t_hi, cells, cap);
    if (t == Tri::False) return Tri::False;
    if (t == Tri::Unknown) verdict = Tri::Unknown;
  }
  return verdict;
}

/// sqrt(j^j (m-j)^(m-j) / m^m) squared, i.e. the squared sup of a monomial x^j.
Rational monomial_sup_squared(int m, int j) {
  if (m == 0) return 1;
  Integer num = 1, den = 1;
  mpz_pow_ui(num.get_mpz_t(), Integer(j).get_mpz_t(), static_cast<unsigned long>(j));
  Integer t;
  mpz_pow_ui(t.get_mpz_t(), Integer(m - j).get_mpz_t(), static_cast<unsigned long>(m - j));
  num *= t;
  mpz_pow_ui(den.get_mpz_t(), Integer(m).get_mpz_t(), static_cast<unsigned long>(m));
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace

std::vector<std::int64_t> coefficient_bounds(int level, const LogScalar& lambda) {
  if (level < 0) throw InvalidModule("negative level");
  std::vector<std::int64_t> out;
  const mpfr_prec_t prec = 128;
  const Interval neg_lambda = (-lambda).interval(prec);
  auto xlogx_half = [&](int n) {
    if (n <= 1) return Interval(prec);
    return Interval::from_integer(n, prec) * log(Interval::from_integer(n, prec)) / Interval::from_integer(2, prec);
  };
  for (int j = 0; j <= level; ++j) {
    Interval e = neg_lambda + xlogx_half(level) - xlogx_half(j) - xlogx_half(level - j);
    Interval b = exp(e);
    if (!(b.upper() < 4e18)) throw BudgetExceeded(0, {std::numeric_limits<std::int64_t>::max()});
    out.push_back(b.floor_upper().get_si());
  }
  return out;
}

namespace {

using RPoly = std::vector<Rational>;  // low degree first, no trailing zeros

void trim(RPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

RPoly derivative(const RPoly& p) {
  RPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<long>(i)));
  trim(d);
  return d;
}

RPoly sub(RPoly a, const RPoly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

/// Quotient and remainder; b nonzero.
std::pair<RPoly, RPoly> divmod(RPoly a, const RPoly& b) {
  RPoly q;
  if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rational(0));
  while (!a.empty() && a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    Rational c = a.back() / b.back();
    c.canonicalize();
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[i + shift] -= c * b[i];
      a[i + shift].canonicalize();
    }
    a.pop_back();
    trim(a);
  }
  trim(q);
  return {q, a};
}

RPoly monic_gcd(RPoly a, RPoly b) {
  while (!b.empty()) {
    RPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const Rational lead = a.back();
    for (auto& c : a) {
      c /= lead;
      c.canonicalize();
    }
  }
  return a;
}

int sign_at_zero(const RPoly& p) { return p.empty() ? 0 : (p[0] > 0 ? 1 : (p[0] < 0 ? -1 : 0)); }
int sign_at_infinity(const RPoly& p) { return p.empty() ? 0 : (p.back() > 0 ? 1 : -1); }

/// Distinct real roots of a squarefree p in (0, infinity), p(0) != 0.
int positive_roots(const RPoly& p) {
  std::vector<RPoly> chain{p, derivative(p)};
  while (!chain.back().empty()) {
    RPoly r = divmod(chain[chain.size() - 2], chain.back()).second;
    for (auto& c : r) c = -c;
    chain.push_back(std::move(r));
  }
  chain.pop_back();
  auto variations = [&](auto sign_of) {
    int v = 0, last = 0;
    for (const auto& q : chain) {
      const int sg = sign_of(q);
      if (sg == 0) continue;
      if (last != 0 && sg != last) ++v;
      last = sg;
    }
    return v;
  };
  return variations(sign_at_zero) - variations(sign_at_infinity);
}

/// Product of the factors of p with odd multiplicity (Yun).
RPoly odd_part(const RPoly& p) {
  RPoly out{Rational(1)};
  const RPoly dp = derivative(p);
  RPoly a = monic_gcd(p, dp);
  RPoly b = divmod(p, a).first;
  RPoly c = divmod(dp, a).first;
  RPoly d = sub(c, derivative(b));
  for (int i = 1; b.size() > 1; ++i) {
    const RPoly f = monic_gcd(b, d);
    if (i % 2 == 1) {
      RPoly prod(out.size() + f.size() - 1, Rational(0));
      for (std::size_t x = 0; x < out.size(); ++x) {
        for (std::size_t y = 0; y < f.size(); ++y) prod[x + y] += out[x] * f[y];
      }
      out = std::move(prod);
    }
    b = divmod(b, f).first;
    c = divmod(d, f).first;
    d = sub(c, derivative(b));
  }
  return out;
}

/// T (1+r^2)^m >= (sum |a_j| r^j)^2 for all r >= 0, decided exactly. By the
/// triangle inequality this is sufficient for sup <= threshold; it settles
/// ties on the positive real axis, e.g. at z = 0 when |a_0| meets the bound.
bool dominated_on_ray(std::span<const std::int64_t> coeffs, const Rational& T) {
  const int m = static_cast<int>(coeffs.size()) - 1;
  RPoly diff(static_cast<std::size_t>(2 * m + 1), Rational(0));
  Integer binom = 1;
  for (int k = 0; k <= m; ++k) {
    diff[static_cast<std::size_t>(2 * k)] += T * Rational(binom);
    binom = binom * (m - k) / (k + 1);
  }
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= m; ++j) {
      const long ai = std::labs(static_cast<long>(coeffs[static_cast<std::size_t>(i)]));
      const long aj = std::labs(static_cast<long>(coeffs[static_cast<std::size_t>(j)]));
      diff[static_cast<std::size_t>(i + j)] -= Rational(Integer(ai) * Integer(aj));
    }
  }
  for (auto& c : diff) c.canonicalize();
  trim(diff);
  if (diff.empty()) return true;
  std::size_t low = 0;
  while (diff[low] == 0) ++low;
  diff.erase(diff.begin(), diff.begin() + static_cast<std::ptrdiff_t>(low));
  if (diff[0] < 0) return false;
  if (diff.size() == 1) return true;
  return positive_roots(odd_part(diff)) == 0;
}

/// sup_le with e^{-2 lambda} already enclosed in th, adding the branch and
/// bound cells it visits to `cells`.
Tri sup_le_counted(std::span<const std::int64_t> coeffs, const LogScalar& lambda, const Interval& th,
                   std::size_t& cells) {
  const int m = static_cast<int>(coeffs.size()) - 1;
  if (m < 0) throw InvalidModule("empty section");
  int nonzero = 0, which = -1;
  for (int j = 0; j <= m; ++j) {
    if (coeffs[static_cast<std::size_t>(j)] != 0) {
      ++nonzero;
      which = j;
    }
  }
  if (nonzero == 0) return Tri::True;
  // e^{2 lambda} sup^2 <= 1  <=>  sup^2 <= q^{-2} e^{-2r}
  const Rational& q = lambda.log_argument();
  const Rational& r = lambda.rational_part();
  if (nonzero == 1) {
    const Rational a(coeffs[static_cast<std::size_t>(which)]);
    const Rational sup2 = a * a * monomial_sup_squared(m, which);
    Rational inv_q2 = 1 / (q * q);
    inv_q2.canonicalize();
    return abs_le_scaled(sup2, inv_q2, Rational(-2 * r));
  }
  if (r == 0) {
    Rational T = 1 / (q * q);
    T.canonicalize();
    if (dominated_on_ray(coeffs, T)) return Tri::True;
  }
  // |s|^2 <= e^{-2 lambda} (1+|z|^2)^m
  return whole_line_le(coeffs, th.lower(), th.upper(), kMaxCells, &cells);
}

}  // namespace

Tri sup_le(std::span<const std::int64_t> coeffs, const LogScalar& lambda) {
  std::size_t cells = 0;
  return sup_le_counted(coeffs, lambda, (-lambda).times(2).exp_interval(96), cells);
}

Interval sup_norm(std::span<const std::int64_t> coeffs, mpfr_prec_t prec) {
  const int m = static_cast<int>(coeffs.size()) - 1;
  if (m < 0) throw InvalidModule("empty section");
  if (std::all_of(coeffs.begin(), coeffs.end(), [](auto x) { return x == 0; })) return Interval(prec);
  // Lower bound from a sample grid, then the smallest certified upper bound
  // of the form lower * (1 + 10^-k).
  double lower = 0;
  for (bool reversed : {false, true}) {
    const Poly p = make_poly(coeffs, reversed);
    for (int i = 0; i <= 64; ++i) {
      for (int k = 0; k <= 64; ++k) {
        std::complex<double> s, ds;
        const double r = i / 64.0;
        p.eval(std::polar(r, std::numbers::pi * k / 64), s, ds);
        lower = std::max(lower, std::abs(s) / std::pow(1 + r * r, 0.5 * m) * (1 - 64 * kEps));
      }
    }
  }
  for (double rel = 1e-7; rel < 1e3; rel *= 10) {
    const double upper = lower * (1 + rel);
    if (whole_line_le(coeffs, upper * upper, upper * upper, kMaxNormCells) == Tri::True) {
      return Interval::hull(Interval::from_rational(Rational(lower), prec), Interval::from_rational(Rational(upper), prec));
    }
  }
  throw Error("sup norm did not converge");
}

ShortVectorSet enumerate(int level, const LogScalar& lambda, const EnumerationOptions& opts) {
  const std::vector<std::int64_t> bounds = coefficient_bounds(level, lambda);
  const int m = level;
  // Necessary condition: the circle mean of |s|^2 is at most the sup, so for
  // every radius r, sum_j a_j^2 r^{2j} <= e^{-2 lambda} (1+r^2)^m.
  const Interval th2 = (-lambda).times(2).exp_interval(96);
  const double t_hi = th2.upper() * (1 + 1e-9);
  std::vector<std::vector<double>> weights;  // weights[k][j] = r_k^{2j} / (1+r_k^2)^m
  for (int k = 1; k <= 7; ++k) {
    const double r = std::tan(std::numbers::pi * k / 16);
    std::vector<double> w(static_cast<std::size_t>(m + 1));
    for (int j = 0; j <= m; ++j) w[static_cast<std::size_t>(j)] = std::pow(r * r, j) / std::pow(1 + r * r, m);
    weights.push_back(std::move(w));
  }

  const std::int64_t b0 = bounds[0];
  const std::size_t n0 = static_cast<std::size_t>(2 * b0 + 1);
  std::vector<std::vector<Vec>> members(n0), undecided(n0);
  std::atomic<std::uint64_t> visits{0};
  std::atomic<bool> abort{false};

  parallel_for(n0, opts.workers, [&](std::size_t i) {
    if (abort.load()) return;
    Vec s(static_cast<std::size_t>(m + 1), 0);
    s[0] = static_cast<std::int64_t>(i) - b0;
    std::vector<double> partial(weights.size());
    for (std::size_t k = 0; k < weights.size(); ++k) partial[k] = static_cast<double>(s[0] * s[0]) * weights[k][0];
    std::uint64_t local = 0;
    // Iterative depth-first scan over a_1..a_m.
    auto recurse = [&](auto&& self, int j, std::vector<double>& acc) -> void {
      if (abort.load(std::memory_order_relaxed)) return;
      if (j > m) {
        std::size_t cells = 0;
        const Tri t = sup_le_counted(s, lambda, th2, cells);
        // Certification work counts against the budget like coefficient visits.
        if (visits.fetch_add(cells) + cells > opts.budget) abort.store(true);
        if (t == Tri::True) members[i].push_back(s);
        else if (t == Tri::Unknown) undecided[i].push_back(s);
        return;
      }
      const std::int64_t b = bounds[static_cast<std::size_t>(j)];
      std::vector<double> next(acc.size());
      for (std::int64_t a = -b; a <= b; ++a) {
        if (++local % 4096 == 0) {
          if (visits.fetch_add(4096) + 4096 > opts.budget) {
            abort.store(true);
            return;
          }
        }
        bool ok = true;
        for (std::size_t k = 0; k < acc.size() && ok; ++k) {
          next[k] = acc[k] + static_cast<double>(a * a) * weights[k][static_cast<std::size_t>(j)];
          ok = next[k] <= t_hi;
        }
        if (!ok) continue;
        s[static_cast<std::size_t>(j)] = a;
        self(self, j + 1, next);
      }
      s[static_cast<std::size_t>(j)] = 0;
    };
    bool ok = true;
    for (double v : partial) ok = ok && v <= t_hi;
    if (ok) recurse(recurse, 1, partial);
    visits.fetch_add(local % 4096);
  });
  if (abort.load() || visits.load() > opts.budget) throw BudgetExceeded(opts.budget, bounds);
  std::vector<Vec> all, und;
  for (std::size_t i = 0; i < n0; ++i) {
    all.insert(all.end(), members[i].begin(), members[i].end());
    und.insert(und.end(), undecided[i].begin(), undecided[i].end());
  }
  return ShortVectorSet::explicit_list(1, m + 1, std::move(all), std::move(und));
}

}  // namespace aokb::fs
