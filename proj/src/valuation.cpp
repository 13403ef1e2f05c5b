#include "aokb/valuation.hpp"

#include "aokb/errors.hpp"
#include "aokb/integer_span.hpp"
#include "aokb/parallel.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <shared_mutex>

namespace aokb {

namespace {

std::int64_t mod(std::int64_t x, long p) {
  const std::int64_t r = x % p;
  return r < 0 ? r + p : r;
}

bool all_zero(std::span<const std::int64_t> s) {
  return std::all_of(s.begin(), s.end(), [](auto x) { return x == 0; });
}

std::string point_string(const std::optional<long>& a) { return a ? std::to_string(*a) : std::string("inf"); }

}  // namespace

FlagData FlagData::make(long p, std::optional<long> point) {
  if (!is_prime(p)) throw ConfigError("flag prime " + std::to_string(p) + " is not prime");
  if (point) point = static_cast<long>(mod(*point, p));
  return FlagData{p, point};
}

FlagData FlagData::from_json(const nlohmann::json& j) {
  try {
    const long p = j.at("p").get<long>();
    const auto& pt = j.at("point");
    const std::string s = pt.is_string() ? pt.get<std::string>() : pt.dump();
    if (s == "inf" || s == "infinity") return make(p, std::nullopt);
    return make(p, std::stol(s));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("flag descriptor: ") + e.what());
  } catch (const std::logic_error&) {
    throw ConfigError("flag point must be an integer or \"inf\"");
  }
}

nlohmann::json FlagData::to_json() const { return {{"p", p}, {"point", point_string(point)}}; }

std::string FlagData::describe() const { return "p=" + std::to_string(p) + ",point=" + point_string(point); }

GenericFlag GenericFlag::from_json(const nlohmann::json& j) {
  try {
    const auto& z = j.at("z0");
    const std::string s = z.is_string() ? z.get<std::string>() : z.dump();
    if (s == "inf" || s == "infinity") return GenericFlag{};
    return GenericFlag{parse_rational(s)};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("generic flag descriptor: ") + e.what());
  } catch (const Error& e) {
    throw ConfigError(std::string("generic flag descriptor: ") + e.what());
  }
}

std::int64_t order_mod_p(std::vector<std::int64_t> c, long p, const std::optional<long>& point) {
  const std::int64_t m = static_cast<std::int64_t>(c.size()) - 1;
  if (!point) {
    std::int64_t deg = m;
    while (deg >= 0 && c[static_cast<std::size_t>(deg)] == 0) --deg;
    if (deg < 0) throw UndefinedValuation("zero reduction");
    return m - deg;
  }
  const std::int64_t a = *point;
  std::int64_t order = 0;
  while (!c.empty()) {
    // Synthetic division by (x - a): c = q (x - a) + c(a).
    std::vector<std::int64_t> q(c.size() - 1);
    std::int64_t acc = 0;
    for (std::size_t j = c.size(); j-- > 0;) {
      acc = (acc * a + c[j]) % p;
      if (j > 0) q[j - 1] = acc;
    }
    if (acc != 0) return order;
    if (all_zero(q)) throw UndefinedValuation("zero reduction");
    ++order;
    c = std::move(q);
  }
  return order;
}

ValuationVector nu(std::span<const std::int64_t> s, const FlagData& f) {
  if (s.empty() || all_zero(s)) throw UndefinedValuation("valuation of the zero section");
  std::int64_t g = 0;
  for (auto x : s) g = std::gcd(g, x);
  ValuationVector v;
  std::int64_t scale = 1;
  while (g % f.p == 0) {
    g /= f.p;
    scale *= f.p;
    ++v.nu1;
  }
  std::vector<std::int64_t> red(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) red[j] = mod(s[j] / scale, f.p);
  v.nu2 = order_mod_p(std::move(red), f.p, f.point);
  return v;
}

std::int64_t nu_generic(std::span<const std::int64_t> s, const GenericFlag& g) {
  if (s.empty() || all_zero(s)) throw UndefinedValuation("valuation of the zero section");
  const std::int64_t m = static_cast<std::int64_t>(s.size()) - 1;
  if (!g.z0) {
    std::int64_t deg = m;
    while (s[static_cast<std::size_t>(deg)] == 0) --deg;
    return m - deg;
  }
  // Divide by (v x - u), z0 = u/v in lowest terms; by Gauss the quotient of
  // an integer polynomial by a primitive factor stays integral.
  const Integer u = g.z0->get_num(), w = g.z0->get_den();
  std::vector<Integer> c;
  for (auto x : s) c.emplace_back(static_cast<long>(x));
  std::int64_t order = 0;
  for (;;) {
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.size() <= 1) return order;
    const std::size_t n = c.size() - 1;
    std::vector<Integer> q(n);
    bool exact = true;
    // c_j = w q_{j-1} - u q_j, solved from the top.
    std::vector<Integer> work = c;
    for (std::size_t j = n; j >= 1; --j) {
      if (!mpz_divisible_p(work[j].get_mpz_t(), w.get_mpz_t())) {
        exact = false;
        break;
      }
      q[j - 1] = work[j] / w;
      work[j - 1] += q[j - 1] * u;
      work[j] = 0;
    }
    if (!exact || work[0] != 0) return order;
    ++order;
    c = std::move(q);
  }
}

// ---------------------------------------------------------------------------
// Residue sets of coordinate boxes

namespace {

constexpr std::uint64_t kResidueProductCap = 5'000'000;

/// Residues mod p of the integers in [-c, c].
std::vector<std::int64_t> residue_set(const Integer& c, long p) {
  std::vector<std::int64_t> out;
  if (c * 2 + 1 >= p) {
    for (long r = 0; r < p; ++r) out.push_back(r);
    return out;
  }
  const long cc = c.get_si();
  std::set<std::int64_t> s;
  for (long x = -cc; x <= cc; ++x) s.insert(mod(x, p));
  return {s.begin(), s.end()};
}

/// floor(w / p^i) for each weight.
std::vector<Integer> box_radii(const std::vector<Rational>& w, long p, int i) {
  Integer pi;
  mpz_ui_pow_ui(pi.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(i));
  std::vector<Integer> out;
  for (const auto& x : w) {
    Integer f;
    const Integer den = x.get_den() * pi;
    mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), den.get_mpz_t());
    out.push_back(f);
  }
  return out;
}

std::int64_t binom_mod(std::int64_t n, std::int64_t k, long p) {
  // Small n only (n <= a few hundred); Pascal row mod p.
  std::vector<std::int64_t> row(static_cast<std::size_t>(n + 1), 0);
  row[0] = 1;
  for (std::int64_t r = 1; r <= n; ++r) {
    for (std::int64_t j = r; j >= 1; --j) row[static_cast<std::size_t>(j)] = (row[static_cast<std::size_t>(j)] + row[static_cast<std::size_t>(j - 1)]) % p;
  }
  return row[static_cast<std::size_t>(k)];
}

struct ProductSetOrders {
  std::vector<bool> orders;  // orders[t]: some nonzero element has order t
  std::size_t dimension = 0;  // F_p-dimension of the span
};

/// Orders at the point of the nonzero elements of prod_j R_j, R_j the residue
/// set of [-c_j, c_j], together with the dimension of their span.
ProductSetOrders product_set_orders(const std::vector<Integer>& radii, long p, const std::optional<long>& point) {
  const std::size_t n = radii.size();
  const std::size_t m = n - 1;
  ProductSetOrders out;
  out.orders.assign(n, false);
  std::vector<std::vector<std::int64_t>> sets;
  std::vector<std::size_t> support;
  bool subspace = true;
  for (std::size_t j = 0; j < n; ++j) {
    sets.push_back(residue_set(radii[j], p));
    if (sets.back().size() > 1) {
      support.push_back(j);
      if (static_cast<long>(sets.back().size()) != p) subspace = false;
    }
  }
  out.dimension = support.size();
  if (support.empty()) return out;
  if (!point || *point == 0) {
    // Orders are read off the monomials directly.
    for (auto j : support) out.orders[point ? j : m - j] = true;
    return out;
  }
  const long a = *point;
  if (subspace) {
    // Span of x^j, j in support: echelon form of the Taylor coefficients at a
    // by lowest nonzero index; the pivots are exactly the attained orders.
    std::vector<std::vector<std::int64_t>> rows;
    for (auto j : support) {
      std::vector<std::int64_t> t(n, 0);
      std::int64_t apow = 1;
      for (std::size_t i = j + 1; i-- > 0;) {
        t[i] = binom_mod(static_cast<std::int64_t>(j), static_cast<std::int64_t>(i), p) * apow % p;
        apow = apow * a % p;
      }
      rows.push_back(std::move(t));
    }
    std::vector<std::vector<std::int64_t>> basis;
    std::vector<std::size_t> piv;
    for (auto r : rows) {
      for (std::size_t b = 0; b < basis.size(); ++b) {
        const std::int64_t f = r[piv[b]];
        if (f == 0) continue;
        for (std::size_t c = 0; c < n; ++c) r[c] = mod(r[c] - f * basis[b][c], p);
      }
      std::size_t lead = 0;
      while (lead < n && r[lead] == 0) ++lead;
      if (lead == n) continue;
      // normalize pivot to 1
      std::int64_t inv = 1;
      for (std::int64_t e = p - 2, base = r[lead]; e > 0; e >>= 1, base = base * base % p) {
        if (e & 1) inv = inv * base % p;
      }
      for (auto& x : r) x = x * inv % p;
      for (std::size_t b = 0; b < basis.size(); ++b) {
        const std::int64_t f = basis[b][lead];
        if (f == 0) continue;
        for (std::size_t c = 0; c < n; ++c) basis[b][c] = mod(basis[b][c] - f * r[c], p);
      }
      basis.push_back(r);
      piv.push_back(lead);
    }
    for (auto l : piv) out.orders[l] = true;
    return out;
  }
  double size = 1;
  for (const auto& s : sets) size *= static_cast<double>(s.size());
  if (size > static_cast<double>(kResidueProductCap)) {
    std::vector<std::int64_t> box;
    for (const auto& r : radii) box.push_back(r.fits_slong_p() ? r.get_si() : INT64_MAX);
    throw BudgetExceeded(kResidueProductCap, box);
  }
  std::vector<std::size_t> idx(n, 0);
  std::vector<std::int64_t> c(n);
  for (;;) {
    for (std::size_t j = 0; j < n; ++j) c[j] = sets[j][idx[j]];
    if (!all_zero(c)) out.orders[static_cast<std::size_t>(order_mod_p(c, p, point))] = true;
    std::size_t j = n;
    while (j > 0) {
      --j;
      if (++idx[j] < sets[j].size()) break;
      idx[j] = 0;
      if (j == 0) return out;
    }
  }
}

struct CacheKey {
  std::string bundle;
  long p;
  long point;
  int k;
  int path;
  auto operator<=>(const CacheKey&) const = default;
};

std::shared_mutex cache_mu;
std::map<CacheKey, std::vector<ValuationVector>> image_cache;

std::vector<ValuationVector> literal_image(const SurfaceBundle& b, const FlagData& f, int k,
                                           const EnumerationOptions& opts) {
  const ShortVectorSet s = h0_hat_set(sections_lattice(b.power(k)), opts);
  const std::vector<Vec> all = s.elements(opts.budget);
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (all.size() + kChunk - 1) / kChunk;
  std::vector<std::set<ValuationVector>> parts(chunks);
  parallel_for(chunks, opts.workers, [&](std::size_t c) {
    const std::size_t end = std::min(all.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      if (!all_zero(all[i])) parts[c].insert(nu(all[i], f));
    }
  });
  std::set<ValuationVector> merged;
  for (const auto& p : parts) merged.insert(p.begin(), p.end());
  return {merged.begin(), merged.end()};
}

std::vector<ValuationVector> box_image(const SurfaceBundle& b, const FlagData& f, int k) {
  const auto w = b.power(k).box_weights().b;
  std::vector<ValuationVector> out;
  for (int v = 0;; ++v) {
    const std::vector<Integer> radii = box_radii(w, f.p, v);
    if (std::all_of(radii.begin(), radii.end(), [](const Integer& r) { return r == 0; })) break;
    // nu_1 = v exactly: s = p^v u with u not divisible by p, i.e. a nonzero
    // reduction in the residue product.
    const ProductSetOrders po = product_set_orders(radii, f.p, f.point);
    for (std::size_t t = 0; t < po.orders.size(); ++t) {
      if (po.orders[t]) out.push_back({v, static_cast<std::int64_t>(t)});
    }
  }
  return out;
}

}  // namespace

std::vector<ValuationVector> valuation_image(const SurfaceBundle& b, const FlagData& f, int k, ImagePath path,
                                             const EnumerationOptions& opts) {
  if (k < 1) throw InvalidModule("k must be positive");
  const bool literal = path == ImagePath::Literal || !b.is_box();
  const CacheKey key{b.to_json().dump(), f.p, f.point ? *f.point : -1, k, literal ? 1 : 0};
  {
    std::shared_lock lock(cache_mu);
    auto it = image_cache.find(key);
    if (it != image_cache.end()) return it->second;
  }
  std::vector<ValuationVector> img = literal ? literal_image(b, f, k, opts) : box_image(b, f, k);
  std::unique_lock lock(cache_mu);
  image_cache.emplace(key, img);
  return img;
}

void clear_valuation_cache() {
  std::unique_lock lock(cache_mu);
  image_cache.clear();
}

FiberReductionReport fiber_reduction(const SurfaceBundle& b, const FlagData& f, int k, int i, ImagePath path,
                                     const EnumerationOptions& opts) {
  if (i < 0) throw InvalidModule("i must be non-negative");
  FiberReductionReport r;
  r.i = i;
  const SurfaceBundle kb = b.power(k);
  if (kb.is_box() && path == ImagePath::Auto) {
    const std::vector<Integer> radii = box_radii(kb.box_weights().b, f.p, i);
    const ProductSetOrders po = product_set_orders(radii, f.p, f.point);
    r.distinct_orders = static_cast<std::size_t>(std::count(po.orders.begin(), po.orders.end(), true));
    r.fp_dimension = po.dimension;
    r.z_rank = static_cast<std::size_t>(std::count_if(radii.begin(), radii.end(), [](const Integer& x) { return x > 0; }));
  } else {
    const NumberField q = make_field("Q");
    const NormedModule t = tensor_rank_one(sections_lattice(kb), RankOneModule::prime_power(residue_data(q, f.p), i));
    const ShortVectorSet s = h0_hat_set(t, opts);
    const std::size_t n = static_cast<std::size_t>(kb.level() + 1);
    ModSpan span(n, f.p);
    IntegerSpan zspan(n);
    std::set<std::int64_t> orders;
    std::vector<std::int64_t> red(n);
    s.for_each([&](const Vec& u) {
      if (!zspan.full()) zspan.add(u);
      for (std::size_t j = 0; j < n; ++j) red[j] = mod(u[j], f.p);
      if (all_zero(red)) return true;
      if (!span.full()) span.add(red);
      orders.insert(order_mod_p(red, f.p, f.point));
      return true;
    });
    r.distinct_orders = orders.size();
    r.fp_dimension = span.rank();
    r.z_rank = zspan.rank();
  }
  r.lm_equal = r.distinct_orders == r.fp_dimension;
  r.injective = r.z_rank == r.fp_dimension;
  return r;
}

FiberReductionReport lm_identity_check(const SurfaceBundle& b, const FlagData& f, int k, int i,
                                       const EnumerationOptions& opts) {
  return fiber_reduction(b, f, k, i, ImagePath::Auto, opts);
}

FiberReductionReport reduction_injection_check(const SurfaceBundle& b, const FlagData& f, int k, int i,
                                               const EnumerationOptions& opts) {
  return fiber_reduction(b, f, k, i, ImagePath::Auto, opts);
}

}  // namespace aokb
