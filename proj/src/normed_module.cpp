#include "aokb/normed_module.hpp"

#include "aokb/errors.hpp"
#include "aokb/fubini_study.hpp"
#include "aokb/integer_span.hpp"
#include "aokb/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace aokb {

namespace {

Rational canon(Rational q) {
  q.canonicalize();
  return q;
}

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

/// Embeddings whose norms must be tested: conjugate pairs share one.
std::vector<int> distinct_embeddings(const NumberField& f) {
  std::vector<int> out;
  for (const Embedding& e : f.embeddings()) {
    if (e.real || e.index < e.conjugate) out.push_back(e.index);
  }
  return out;
}

std::complex<double> embed_double(const NumberField& f, const QuadNumber& x, int sigma) {
  ComplexInterval z = f.embed(x, sigma, 64);
  return {z.re.mid(), z.im.mid()};
}

/// |sigma(multiplier * z)| <= w * e^{scale}, exact up to the precision cap.
Tri component_short(const NumberField& f, const EmbeddingNorm& n, int sigma, const QuadNumber& z, const Rational& w) {
  const QuadNumber y = f.mul(n.multiplier, z);
  return f.abs_le_scaled(y, sigma, canon(w * n.scale.log_argument()), n.scale.rational_part());
}

struct ComponentEnumeration {
  std::vector<Vec> in;
  std::vector<Vec> undecided;
};

/// Radius bound rho_sigma (rounded up) for |sigma(z)| of short component values.
double component_radius(const NumberField& f, const EmbeddingNorm& n, int sigma, const Rational& w) {
  Interval threshold = Interval::from_rational(w) * n.scale.exp_interval();
  Interval g = f.abs_embed(n.multiplier, sigma);
  return (threshold / g).upper();
}

void check_box_size(double half_width, std::uint64_t budget, std::size_t coords) {
  if (!(half_width < 1e15)) {
    throw BudgetExceeded(budget, std::vector<std::int64_t>(coords, std::numeric_limits<std::int64_t>::max()));
  }
}

/// Candidate rows for one component: for each x2 (or the single row of Q) an x1 range.
struct Row {
  std::int64_t x2;
  std::int64_t lo;
  std::int64_t hi;
};

std::vector<Row> candidate_rows(const NumberField& f, const std::vector<double>& rho) {
  std::vector<Row> rows;
  if (f.is_rational()) {
    const auto b = static_cast<std::int64_t>(std::floor(rho[0])) + 1;
    rows.push_back({0, -b, b});
    return rows;
  }
  const auto w0 = embed_double(f, f.omega(), 0);
  const auto w1 = embed_double(f, f.omega(), 1);
  if (f.is_imaginary()) {
    const double r = std::min(rho[0], rho[1]);
    const auto b2 = static_cast<std::int64_t>(std::floor(r / std::abs(w0.imag()))) + 1;
    for (std::int64_t x2 = -b2; x2 <= b2; ++x2) {
      const double c = -static_cast<double>(x2) * w0.real();
      rows.push_back({x2, static_cast<std::int64_t>(std::floor(c - r)) - 2,
                      static_cast<std::int64_t>(std::ceil(c + r)) + 2});
    }
    return rows;
  }
  const double a0 = w0.real(), a1 = w1.real();
  const auto b2 = static_cast<std::int64_t>(std::floor((rho[0] + rho[1]) / std::abs(a0 - a1))) + 1;
  for (std::int64_t x2 = -b2; x2 <= b2; ++x2) {
    const double c0 = -static_cast<double>(x2) * a0;
    const double c1 = -static_cast<double>(x2) * a1;
    const double lo = std::max(c0 - rho[0], c1 - rho[1]);
    const double hi = std::min(c0 + rho[0], c1 + rho[1]);
    if (lo > hi + 4) continue;
    rows.push_back({x2, static_cast<std::int64_t>(std::floor(lo)) - 2, static_cast<std::int64_t>(std::ceil(hi)) + 2});
  }
  return rows;
}

ComponentEnumeration enumerate_component(const NormedModule& m, int j, const EnumerationOptions& opts,
                                         std::uint64_t& visits) {
  const NumberField& f = m.field();
  const auto& norms = m.box_norms();
  const std::vector<int> sigmas = distinct_embeddings(f);
  std::vector<double> rho(static_cast<std::size_t>(f.embedding_count()));
  for (const Embedding& e : f.embeddings()) {
    rho[static_cast<std::size_t>(e.index)] =
        component_radius(f, norms[static_cast<std::size_t>(e.index)], e.index, norms[e.index].weights[j]);
    check_box_size(rho[static_cast<std::size_t>(e.index)], opts.budget, static_cast<std::size_t>(f.degree()));
  }
  const std::vector<Row> rows = candidate_rows(f, rho);
  std::uint64_t cands = 0;
  for (const Row& r : rows) cands += static_cast<std::uint64_t>(r.hi - r.lo + 1);
  visits += cands;
  if (visits > opts.budget) {
    std::vector<std::int64_t> box;
    if (f.is_rational()) {
      box.push_back(rows[0].hi);
    } else {
      std::int64_t w1 = 0;
      for (const Row& r : rows) w1 = std::max<std::int64_t>({w1, std::llabs(r.lo), std::llabs(r.hi)});
      box = {w1, rows.empty() ? std::int64_t{0} : static_cast<std::int64_t>(std::llabs(rows.front().x2))};
    }
    throw BudgetExceeded(opts.budget, box);
  }

  // Fast classification in double precision with a relative guard band;
  // anything near the boundary goes to the exact test.
  std::vector<std::complex<double>> w(static_cast<std::size_t>(f.embedding_count()));
  for (int s : sigmas) {
    w[static_cast<std::size_t>(s)] = f.is_rational() ? std::complex<double>(0, 0) : embed_double(f, f.omega(), s);
  }
  std::vector<double> rho_mid(rho.size());
  for (int s : sigmas) {
    Interval threshold = Interval::from_rational(norms[s].weights[j]) * norms[s].scale.exp_interval();
    rho_mid[static_cast<std::size_t>(s)] = (threshold / f.abs_embed(norms[s].multiplier, s)).mid();
  }
  constexpr double kGuard = 1e-9;

  std::vector<ComponentEnumeration> per_row(rows.size());
  parallel_for(rows.size(), opts.workers, [&](std::size_t ri) {
    const Row& row = rows[ri];
    ComponentEnumeration& out = per_row[ri];
    for (std::int64_t x1 = row.lo; x1 <= row.hi; ++x1) {
      Tri verdict = Tri::True;
      bool need_exact = false;
      for (int s : sigmas) {
        const std::complex<double> z =
            static_cast<double>(x1) + static_cast<double>(row.x2) * w[static_cast<std::size_t>(s)];
        const double a = std::abs(z);
        const double r = rho_mid[static_cast<std::size_t>(s)];
        if (a > r * (1 + kGuard) + 1e-300) {
          verdict = Tri::False;
          break;
        }
        if (a >= r * (1 - kGuard)) need_exact = true;
      }
      if (verdict == Tri::False) continue;
      Vec v = f.is_rational() ? Vec{x1} : Vec{x1, row.x2};
      if (need_exact) {
        const QuadNumber z = f.from_coords(v);
        for (int s : sigmas) {
          verdict = tri_and(verdict, component_short(f, norms[s], s, z, norms[s].weights[j]));
          if (verdict == Tri::False) break;
        }
      }
      if (verdict == Tri::True) out.in.push_back(std::move(v));
      else if (verdict == Tri::Unknown) out.undecided.push_back(std::move(v));
    }
  });
  ComponentEnumeration all;
  for (auto& r : per_row) {
    for (auto& v : r.in) all.in.push_back(std::move(v));
    for (auto& v : r.undecided) all.undecided.push_back(std::move(v));
  }
  std::sort(all.in.begin(), all.in.end());
  std::sort(all.undecided.begin(), all.undecided.end());
  return all;
}

void check_same_field(const NumberField& a, const NumberField& b) {
  if (!(a == b)) throw FieldMismatch("modules over " + a.descriptor() + " and " + b.descriptor());
}

}  // namespace

// ---------------------------------------------------------------------------
// NormedModule

NormedModule NormedModule::box(const NumberField& field, std::vector<EmbeddingNorm> norms) {
  if (static_cast<int>(norms.size()) != field.embedding_count()) {
    throw InvalidModule("need one norm per embedding (" + std::to_string(field.embedding_count()) + ")");
  }
  const std::size_t r = norms[0].weights.size();
  for (auto& n : norms) {
    if (n.weights.size() != r) throw InvalidModule("weight lists differ in length across embeddings");
    for (auto& w : n.weights) {
      w.canonicalize();
      if (w <= 0) throw InvalidModule("weights must be positive");
    }
    if (n.multiplier.is_zero()) throw InvalidModule("zero multiplier");
  }
  for (const Embedding& e : field.embeddings()) {
    if (e.real || e.conjugate < e.index) continue;
    const EmbeddingNorm& a = norms[static_cast<std::size_t>(e.index)];
    const EmbeddingNorm& b = norms[static_cast<std::size_t>(e.conjugate)];
    if (a.weights != b.weights || !(a.scale == b.scale) || field.norm(a.multiplier) != field.norm(b.multiplier)) {
      throw InvalidModule("norms at conjugate embeddings must agree");
    }
  }
  return NormedModule(field, static_cast<int>(r), std::move(norms));
}

NormedModule NormedModule::uniform_box(const NumberField& field, std::vector<Rational> weights, const LogScalar& scale) {
  std::vector<EmbeddingNorm> norms(static_cast<std::size_t>(field.embedding_count()),
                                   EmbeddingNorm{std::move(weights), QuadNumber(Rational(1)), scale});
  return box(field, std::move(norms));
}

NormedModule NormedModule::fubini_study(int level, const LogScalar& lambda) {
  if (level < 0) throw InvalidModule("negative level");
  return NormedModule(NumberField::rationals(), level + 1, FubiniStudyNorm{level, lambda});
}

const std::vector<EmbeddingNorm>& NormedModule::box_norms() const {
  if (!is_box()) throw InvalidModule("not a box-normed module");
  return std::get<std::vector<EmbeddingNorm>>(norm_);
}

const FubiniStudyNorm& NormedModule::fs_norm() const {
  if (is_box()) throw InvalidModule("not a Fubini-Study module");
  return std::get<FubiniStudyNorm>(norm_);
}

Tri NormedModule::contains(std::span<const std::int64_t> v) const {
  if (static_cast<int>(v.size()) != z_rank()) throw InvalidModule("element has the wrong length");
  if (!is_box()) return fs::sup_le(v, fs_norm().lambda);
  const auto& norms = box_norms();
  const int k = field_.degree();
  Tri verdict = Tri::True;
  for (int j = 0; j < rank_ && verdict != Tri::False; ++j) {
    const QuadNumber z = field_.from_coords(v.subspan(static_cast<std::size_t>(j * k), static_cast<std::size_t>(k)));
    for (int s : distinct_embeddings(field_)) {
      verdict = tri_and(verdict, component_short(field_, norms[s], s, z, norms[s].weights[j]));
      if (verdict == Tri::False) break;
    }
  }
  return verdict;
}

Interval NormedModule::norm(std::span<const std::int64_t> v, int sigma, mpfr_prec_t prec) const {
  if (static_cast<int>(v.size()) != z_rank()) throw InvalidModule("element has the wrong length");
  if (!is_box()) return fs::sup_norm(v, prec) * fs_norm().lambda.exp_interval(prec);
  const EmbeddingNorm& n = box_norms().at(static_cast<std::size_t>(sigma));
  const int k = field_.degree();
  Interval best(prec);
  for (int j = 0; j < rank_; ++j) {
    const QuadNumber z = field_.from_coords(v.subspan(static_cast<std::size_t>(j * k), static_cast<std::size_t>(k)));
    Interval a = field_.abs_embed(field_.mul(n.multiplier, z), sigma, prec) /
                 Interval::from_rational(n.weights[static_cast<std::size_t>(j)], prec);
    best = max(best, a);
  }
  return best * (-n.scale).exp_interval(prec);
}

nlohmann::json NormedModule::to_json() const {
  nlohmann::json j;
  j["field"] = field_.descriptor();
  j["rank"] = rank_;
  if (!is_box()) {
    j["fubini_study"] = {{"level", fs_norm().level}, {"lambda", fs_norm().lambda.to_string()}};
    return j;
  }
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& n : box_norms()) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& x : n.weights) w.push_back(rational_string(x));
    arr.push_back({{"weights", w},
                   {"multiplier", {rational_string(n.multiplier.a), rational_string(n.multiplier.b)}},
                   {"scale", n.scale.to_string()}});
  }
  j["norms"] = arr;
  return j;
}

NormedModule NormedModule::from_json(const nlohmann::json& j) {
  try {
    const NumberField f = make_field(j.at("field").get<std::string>());
    if (j.contains("fubini_study")) {
      const auto& fsj = j.at("fubini_study");
      return fubini_study(fsj.at("level").get<int>(), LogScalar::parse(fsj.at("lambda").get<std::string>()));
    }
    std::vector<EmbeddingNorm> norms;
    for (const auto& nj : j.at("norms")) {
      EmbeddingNorm n;
      for (const auto& w : nj.at("weights")) n.weights.push_back(parse_rational(w.get<std::string>()));
      if (nj.contains("multiplier")) {
        n.multiplier = QuadNumber(parse_rational(nj["multiplier"].at(0).get<std::string>()),
                                  parse_rational(nj["multiplier"].at(1).get<std::string>()));
      }
      if (nj.contains("scale")) n.scale = LogScalar::parse(nj["scale"].get<std::string>());
      norms.push_back(std::move(n));
    }
    if (norms.size() == 1 && f.embedding_count() == 2) norms.push_back(norms[0]);
    return box(f, std::move(norms));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidModule(std::string("malformed module descriptor: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Rank-one modules

RankOneModule RankOneModule::trivial(const NumberField& field) {
  return RankOneModule{field, QuadNumber(Rational(1)), std::vector<LogScalar>(field.embedding_count())};
}

RankOneModule RankOneModule::scalar(const NumberField& field, const LogScalar& alpha) {
  return RankOneModule{field, QuadNumber(Rational(1)), std::vector<LogScalar>(field.embedding_count(), alpha)};
}

RankOneModule RankOneModule::prime_power(const PrimeData& prime, long e) {
  if (!prime.generator) throw InvalidModule(prime.describe() + " has no principal generator");
  return RankOneModule{prime.field, prime.field.power(*prime.generator, e),
                       std::vector<LogScalar>(prime.field.embedding_count())};
}

NormedModule RankOneModule::as_module() const {
  if (static_cast<int>(alpha.size()) != field.embedding_count()) throw InvalidModule("alpha per embedding required");
  if (generator.is_zero()) throw InvalidModule("zero module");
  std::vector<EmbeddingNorm> norms;
  for (const auto& a : alpha) norms.push_back(EmbeddingNorm{{Rational(1)}, generator, a});
  return NormedModule::box(field, std::move(norms));
}

NormedModule twist(const NormedModule& m, const LogScalar& alpha) {
  if (alpha.is_zero()) return m;
  if (!m.is_box()) return NormedModule::fubini_study(m.fs_norm().level, m.fs_norm().lambda - alpha);
  std::vector<EmbeddingNorm> norms = m.box_norms();
  for (auto& n : norms) n.scale += alpha;
  return NormedModule::box(m.field(), std::move(norms));
}

NormedModule tensor_rank_one(const NormedModule& m, const RankOneModule& l) {
  check_same_field(m.field(), l.field);
  if (l.generator.is_zero()) throw InvalidModule("zero module");
  if (!m.is_box()) {
    const LogScalar shift = LogScalar::log_of(abs(l.generator.a)) - l.alpha[0];
    return NormedModule::fubini_study(m.fs_norm().level, m.fs_norm().lambda + shift);
  }
  std::vector<EmbeddingNorm> norms = m.box_norms();
  for (std::size_t s = 0; s < norms.size(); ++s) {
    norms[s].multiplier = m.field().mul(norms[s].multiplier, l.generator);
    norms[s].scale += l.alpha[s];
  }
  return NormedModule::box(m.field(), std::move(norms));
}

RankOneModule dual_rank_one(const RankOneModule& l) {
  if (l.generator.is_zero()) throw InvalidModule("zero module");
  RankOneModule d{l.field, l.field.inverse(l.generator), {}};
  for (const auto& a : l.alpha) d.alpha.push_back(-a);
  return d;
}

LogScalar deg_hat(const RankOneModule& l) {
  if (l.generator.is_zero()) throw InvalidModule("zero module has no degree");
  LogScalar sum;
  for (const auto& a : l.alpha) sum += a;
  return sum - LogScalar::log_of(abs(l.field.norm(l.generator)));
}

Interval deg_hat_with_witness(const RankOneModule& l, std::span<const std::int64_t> w, mpfr_prec_t prec) {
  if (l.generator.is_zero()) throw InvalidModule("zero module has no degree");
  const QuadNumber z = l.field.from_coords(w);
  if (z.is_zero()) throw InvalidModule("witness must be nonzero");
  const QuadNumber s = l.field.mul(l.generator, z);
  Interval out = log(Interval::from_rational(abs(l.field.norm(z)), prec));
  for (const Embedding& e : l.field.embeddings()) {
    Interval norm_s = l.alpha[static_cast<std::size_t>(e.index)].exp_interval(prec);
    out = out - (log(l.field.abs_embed(s, e.index, prec)) - log(norm_s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// ShortVectorSet

ShortVectorSet ShortVectorSet::product(int kappa, std::vector<std::vector<Vec>> factors,
                                       std::vector<std::vector<Vec>> factor_undecided) {
  ShortVectorSet s;
  s.kappa_ = kappa;
  s.rank_ = static_cast<int>(factors.size());
  s.product_ = true;
  s.factors_ = std::move(factors);
  s.factor_undecided_ = std::move(factor_undecided);
  s.factor_undecided_.resize(s.factors_.size());
  return s;
}

ShortVectorSet ShortVectorSet::explicit_list(int kappa, int rank, std::vector<Vec> members, std::vector<Vec> undecided) {
  ShortVectorSet s;
  s.kappa_ = kappa;
  s.rank_ = rank;
  s.product_ = false;
  std::sort(members.begin(), members.end());
  std::sort(undecided.begin(), undecided.end());
  s.members_ = std::move(members);
  s.undecided_ = std::move(undecided);
  return s;
}

Integer ShortVectorSet::count() const {
  if (!product_) return Integer(static_cast<unsigned long>(members_.size()));
  Integer c = 1;
  for (const auto& f : factors_) c *= static_cast<unsigned long>(f.size());
  return c;
}

Integer ShortVectorSet::undecided_count() const {
  if (!product_) return Integer(static_cast<unsigned long>(undecided_.size()));
  Integer all = 1;
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    all *= static_cast<unsigned long>(factors_[j].size() + factor_undecided_[j].size());
  }
  return all - count();
}

bool ShortVectorSet::contains(std::span<const std::int64_t> v) const {
  if (!product_) {
    Vec key(v.begin(), v.end());
    return std::binary_search(members_.begin(), members_.end(), key);
  }
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    Vec part(v.begin() + static_cast<std::ptrdiff_t>(j * kappa_),
             v.begin() + static_cast<std::ptrdiff_t>((j + 1) * kappa_));
    if (!std::binary_search(factors_[j].begin(), factors_[j].end(), part)) return false;
  }
  return true;
}

void ShortVectorSet::for_each(const std::function<bool(const Vec&)>& fn) const {
  if (!product_) {
    for (const auto& v : members_) {
      if (!fn(v)) return;
    }
    return;
  }
  for (const auto& f : factors_) {
    if (f.empty()) return;
  }
  const std::size_t r = factors_.size();
  std::vector<std::size_t> idx(r, 0);
  Vec v(r * static_cast<std::size_t>(kappa_));
  for (;;) {
    for (std::size_t j = 0; j < r; ++j) {
      std::copy(factors_[j][idx[j]].begin(), factors_[j][idx[j]].end(), v.begin() + static_cast<std::ptrdiff_t>(j * kappa_));
    }
    if (!fn(v)) return;
    std::size_t j = r;
    while (j > 0) {
      --j;
      if (++idx[j] < factors_[j].size()) break;
      idx[j] = 0;
      if (j == 0) return;
    }
    if (r == 0) return;
  }
}

std::vector<Vec> ShortVectorSet::elements(std::uint64_t limit) const {
  if (count() > Integer(static_cast<unsigned long>(limit))) {
    std::vector<std::int64_t> box;
    for (const auto& f : factors_) box.push_back(static_cast<std::int64_t>(f.size()));
    throw BudgetExceeded(limit, box);
  }
  std::vector<Vec> out;
  out.reserve(count().get_ui());
  for_each([&](const Vec& v) {
    out.push_back(v);
    return true;
  });
  return out;
}

std::vector<Vec> ShortVectorSet::undecided() const {
  if (!product_) return undecided_;
  std::vector<Vec> out;
  for (const auto& f : factor_undecided_) out.insert(out.end(), f.begin(), f.end());
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration

ShortVectorSet h0_hat_set(const NormedModule& m, const EnumerationOptions& opts) {
  if (!m.is_box()) return fs::enumerate(m.fs_norm().level, m.fs_norm().lambda, opts);
  std::vector<std::vector<Vec>> factors, undecided;
  std::uint64_t visits = 0;
  for (int j = 0; j < m.rank(); ++j) {
    ComponentEnumeration c = enumerate_component(m, j, opts, visits);
    factors.push_back(std::move(c.in));
    undecided.push_back(std::move(c.undecided));
  }
  return ShortVectorSet::product(m.field().degree(), std::move(factors), std::move(undecided));
}

LogScalar h0_hat(const NormedModule& m, const EnumerationOptions& opts) { return h0_hat_set(m, opts).h0(); }

// ---------------------------------------------------------------------------
// Span ranks

std::size_t span_rank(const NormedModule& m, const std::vector<Vec>& s, SpanRing ring) {
  const std::size_t n = static_cast<std::size_t>(m.z_rank());
  IntegerSpan span(n);
  const int k = m.field().degree();
  for (const Vec& v : s) {
    if (span.full()) break;
    span.add(v);
    if (ring == SpanRing::OK && k == 2) {
      Vec w(v.size());
      for (std::size_t j = 0; j < v.size(); j += 2) {
        const auto t = m.field().times_omega(v[j], v[j + 1]);
        w[j] = t[0];
        w[j + 1] = t[1];
      }
      span.add(w);
    }
  }
  return ring == SpanRing::OK ? span.rank() / static_cast<std::size_t>(k) : span.rank();
}

std::size_t span_rank(const NormedModule& m, const ShortVectorSet& s, SpanRing ring) {
  if (!s.is_product()) return span_rank(m, s.elements(), ring);
  std::size_t total = 0;
  const NumberField& f = m.field();
  for (const auto& factor : s.factors()) {
    if (ring == SpanRing::OK) {
      total += std::any_of(factor.begin(), factor.end(),
                           [](const Vec& v) { return std::any_of(v.begin(), v.end(), [](auto x) { return x != 0; }); })
                   ? 1
                   : 0;
    } else {
      total += integer_rank(factor, static_cast<std::size_t>(f.degree()));
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Checks

MinkowskiReport minkowski_check(const RankOneModule& l, const EnumerationOptions& opts) {
  MinkowskiReport r;
  r.h0 = h0_hat(l.as_module(), opts);
  r.degree = deg_hat(l);
  const NumberField& f = l.field;
  // Twice the margin is log-rational: 2h0 - 2deg + 2 kappa log 2 + log|D|.
  const LogScalar twice = r.h0.times(2) - r.degree.times(2) + LogScalar::log_of(Integer(2)).times(2L * f.degree()) +
                          LogScalar::log_of(Integer(abs(f.discriminant())));
  r.margin = twice.interval() / Interval::from_integer(2);
  r.holds = twice.sign() > 0;
  return r;
}

ShiftReport gs_shift_check(const NormedModule& m, const LogScalar& t, const EnumerationOptions& opts) {
  if (t.sign() < 0) throw InvalidModule("shift parameter must be nonnegative");
  ShiftReport r;
  const NormedModule mt = twist(m, t);
  const ShortVectorSet st = h0_hat_set(mt, opts);
  r.h0 = h0_hat(m, opts);
  r.h0_twisted = st.h0();
  r.r0 = span_rank(mt, st, SpanRing::OK);
  const long factor = static_cast<long>(m.field().degree()) * static_cast<long>(r.r0);
  r.margin = r.h0 - r.h0_twisted + (t + LogScalar::log_of(Integer(3))).times(factor);
  r.holds = r.margin.sign() >= 0;
  return r;
}

NormedModule delta_twist_down(const NormedModule& m) {
  if (!m.is_box()) return m;  // Q only: delta = 0
  const NumberField& f = m.field();
  const auto [a, sigma_star] = delta_witness(f);
  std::vector<EmbeddingNorm> norms = m.box_norms();
  for (const Embedding& e : f.embeddings()) {
    auto& n = norms[static_cast<std::size_t>(e.index)];
    n.multiplier = f.mul(n.multiplier, f.transport_abs(a, sigma_star, e.index));
  }
  return NormedModule::box(f, std::move(norms));
}

SpanRankReport span_rank_check(const NormedModule& m, const EnumerationOptions& opts) {
  SpanRankReport r;
  r.kappa = m.field().degree();
  const ShortVectorSet s = h0_hat_set(m, opts);
  const NormedModule md = delta_twist_down(m);
  r.ok_rank_delta = span_rank(md, h0_hat_set(md, opts), SpanRing::OK);
  r.z_rank = span_rank(m, s, SpanRing::Z);
  r.ok_rank = span_rank(m, s, SpanRing::OK);
  const auto k = static_cast<std::size_t>(r.kappa);
  r.first_holds = k * r.ok_rank_delta <= r.z_rank;
  r.second_holds = r.ok_rank <= r.z_rank && r.z_rank <= k * r.ok_rank;
  return r;
}

}  // namespace aokb
