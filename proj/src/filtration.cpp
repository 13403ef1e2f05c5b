#include "aokb/filtration.hpp"

#include "aokb/errors.hpp"
#include "aokb/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace aokb {

namespace {

/// r log r + r with r log r := 0 for r <= 1.
LogScalar error_scale_of(std::size_t r0) {
  const Rational r(static_cast<long>(r0));
  if (r0 <= 1) return LogScalar::rational(r);
  Integer pw;
  mpz_ui_pow_ui(pw.get_mpz_t(), r0, r0);
  return LogScalar::log_of(pw) + LogScalar::rational(r);
}

/// Exact sign of gap + c * scale for rational c. Intervals settle almost every
/// case; the exact comparison raises log arguments to the power den(c).
bool holds_with(const LogScalar& gap, const Rational& c, const LogScalar& scale) {
  const Tri t = refine([&](mpfr_prec_t prec) {
    const Interval m = gap.interval(prec) + Interval::from_rational(c, prec) * scale.interval(prec);
    if (m.positive()) return Tri::True;
    if (m.negative()) return Tri::False;
    return Tri::Unknown;
  });
  if (t != Tri::Unknown) return t == Tri::True;
  const long num = c.get_num().get_si(), den = c.get_den().get_si();
  if (!c.get_num().fits_slong_p() || !c.get_den().fits_slong_p()) throw Error("constant too large");
  return (gap.times(den) + scale.times(num)).sign() >= 0;
}

Interval margin_with(const LogScalar& gap, const Rational& c, const LogScalar& scale) {
  return gap.interval() + Interval::from_rational(c) * scale.interval();
}

NormedModule tensor_power(const NormedModule& m, const PrimeData& prime, int i) {
  if (i == 0) return m;
  return tensor_rank_one(m, RankOneModule::prime_power(prime, i));
}

}  // namespace

std::vector<LogScalar> FiltrationInstance::degrees() const {
  if (chain.empty()) throw InvalidInstance("chain must contain L_0");
  std::vector<LogScalar> out;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (!(chain[i].field == module.field())) throw InvalidInstance("chain module over a different field");
    out.push_back(deg_hat(chain[i]));
    if (i == 0 && !out[0].is_zero()) throw InvalidInstance("deg L_0 must be 0");
    if (i > 0 && out[i] < out[i - 1]) {
      throw InvalidInstance("degrees must be non-decreasing: a_" + std::to_string(i - 1) + " = " +
                            out[i - 1].to_string() + " > a_" + std::to_string(i) + " = " + out[i].to_string());
    }
  }
  return out;
}

FiltrationProfile profile(const FiltrationInstance& inst, const EnumerationOptions& opts) {
  FiltrationProfile p;
  p.alpha = inst.degrees();
  const std::size_t n = p.alpha.size() - 1;
  for (std::size_t i = 0; i <= n; ++i) {
    const NormedModule twisted = tensor_rank_one(inst.module, dual_rank_one(inst.chain[i]));
    const ShortVectorSet s = h0_hat_set(twisted, opts);
    p.ranks.push_back(span_rank(twisted, s, SpanRing::OK));
    p.undecided += s.undecided_count();
    if (i == 0) p.h0 = s.h0();
    if (i == n) p.h0_last = s.h0();
    if (i > 0 && p.ranks[i] > p.ranks[i - 1]) p.ranks_monotone = false;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    const LogScalar step = p.alpha[i] - p.alpha[i - 1];
    p.lower += step.times(static_cast<long>(p.ranks[i]));
    p.upper += step.times(static_cast<long>(p.ranks[i - 1]));
  }
  p.upper += p.h0_last;
  p.error_scale = error_scale_of(p.ranks[0]);
  return p;
}

KeyBoundsReport verify_key_bounds(const FiltrationProfile& p, const Rational& c) {
  if (c < 0) throw InvalidInstance("constant must be non-negative");
  KeyBoundsReport r;
  r.c = c;
  r.lower_gap = p.h0 - p.lower;
  r.upper_gap = p.upper - p.h0;
  r.lower_margin = margin_with(r.lower_gap, c, p.error_scale);
  r.upper_margin = margin_with(r.upper_gap, c, p.error_scale);
  r.lower_holds = holds_with(r.lower_gap, c, p.error_scale);
  r.upper_holds = holds_with(r.upper_gap, c, p.error_scale);
  if (p.error_scale.is_zero()) {
    if (r.lower_gap.sign() >= 0 && r.upper_gap.sign() >= 0) r.minimal_c = Interval::from_integer(0);
    return r;
  }
  const Interval s = p.error_scale.interval();
  Interval need = Interval::from_integer(0);
  for (const LogScalar* g : {&r.lower_gap, &r.upper_gap}) {
    if (g->sign() < 0) need = max(need, -g->interval() / s);
  }
  r.minimal_c = need;
  return r;
}

KeyBoundsReport verify_key_bounds(const FiltrationInstance& inst, const Rational& c,
                                  const EnumerationOptions& opts) {
  return verify_key_bounds(profile(inst, opts), c);
}

std::vector<std::size_t> fiber_decomposition(const NormedModule& m, const PrimeData& prime,
                                             std::optional<int> i_max, const EnumerationOptions& opts) {
  if (!(prime.field == m.field())) throw FieldMismatch("prime and module over different fields");
  auto rank_at = [&](int i) {
    const NormedModule t = tensor_power(m, prime, i);
    return span_rank(t, h0_hat_set(t, opts), SpanRing::OK);
  };
  constexpr int kCap = 64;
  int last;
  if (i_max) {
    if (*i_max < 0) throw ImaxTooSmall("i_max must be non-negative");
    last = *i_max;
  } else {
    // Doubling search for the first vanishing rank, then bisection.
    int hi = 1;
    while (rank_at(hi) != 0) {
      if (hi >= kCap) throw ImaxTooSmall("rank still nonzero at i = " + std::to_string(kCap));
      hi = std::min(2 * hi, kCap);
    }
    int lo = hi / 2;  // rank_at(lo) != 0 unless lo == 0
    if (lo == 0 && rank_at(0) == 0) {
      hi = 0;
    } else {
      while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (rank_at(mid) != 0 ? lo : hi) = mid;
      }
    }
    last = hi;
  }
  std::vector<std::size_t> ranks;
  for (int i = 0; i <= last; ++i) ranks.push_back(rank_at(i));
  if (ranks.back() != 0) {
    throw ImaxTooSmall("rank " + std::to_string(ranks.back()) + " at i_max = " + std::to_string(last));
  }
  return ranks;
}

EqTwoReport eq_two_gap(const NormedModule& m, const PrimeData& prime, std::optional<int> i_max,
                       const EnumerationOptions& opts) {
  EqTwoReport r;
  r.ranks = fiber_decomposition(m, prime, i_max, opts);
  for (auto x : r.ranks) r.rank_sum += x;
  r.h0 = h0_hat(m, opts);
  const LogScalar diff = r.h0 - LogScalar::log_of(prime.norm).times(static_cast<long>(r.rank_sum));
  r.gap = diff.sign() < 0 ? -diff : diff;
  r.generic_rank = m.rank();
  const int h = r.generic_rank;
  if (r.gap.is_zero() || h == 0) {
    r.normalized = Interval::from_integer(0);
  } else {
    const Interval hlogh = h <= 2 ? Interval::from_integer(h) : Interval::from_integer(h) * log(Interval::from_integer(h));
    r.normalized = r.gap.interval() / hlogh;
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

std::uint64_t below(std::mt19937_64& g, std::uint64_t n) { return g() % n; }

}  // namespace

FiltrationInstance random_instance(const NumberField& field, std::uint64_t seed, int id,
                                   const Rational& radius_factor) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id)};
  std::mt19937_64 g(seq);
  const int rank = 1 + static_cast<int>(below(g, 4));
  std::vector<Rational> weights;
  for (int j = 0; j < rank; ++j) {
    const double w = std::exp(-3.0 + 6.0 * unit(g));
    Rational q(static_cast<long>(std::llround(w * 1000)), 1000);
    q *= radius_factor;
    q.canonicalize();
    weights.push_back(q);
  }
  FiltrationInstance inst{NormedModule::uniform_box(field, weights), {RankOneModule::trivial(field)}};
  const int n = static_cast<int>(below(g, 7));
  Rational degree = 0;
  const long places = field.embedding_count();
  for (int i = 1; i <= n; ++i) {
    degree += Rational(static_cast<long>(below(g, 31)), 20);
    Rational per_place = degree / places;
    per_place.canonicalize();
    inst.chain.push_back(RankOneModule::scalar(field, LogScalar::rational(per_place)));
  }
  return inst;
}

SuiteResult run_suite(const SuiteOptions& opts) {
  const NumberField field = make_field(opts.field);
  SuiteResult out;
  out.rows.resize(static_cast<std::size_t>(opts.instances));
  EnumerationOptions inner = opts.enumeration;
  inner.workers = 1;
  parallel_for(out.rows.size(), opts.enumeration.workers, [&](std::size_t k) {
    const FiltrationInstance inst = random_instance(field, opts.seed, static_cast<int>(k), opts.radius_factor);
    const FiltrationProfile p = profile(inst, inner);
    const KeyBoundsReport rep = verify_key_bounds(p, Rational(0));
    SuiteRow& row = out.rows[k];
    row.id = static_cast<int>(k);
    row.field = field.descriptor();
    row.kappa = field.degree();
    row.n = static_cast<int>(inst.chain.size()) - 1;
    row.r0 = p.ranks[0];
    row.h0 = p.h0;
    row.lower = p.lower;
    row.upper = p.upper;
    row.minimal_c = rep.minimal_c;
    row.error_scale = p.error_scale;
  });
  std::vector<double> cs;
  for (const auto& row : out.rows) {
    if (row.minimal_c) {
      cs.push_back(row.minimal_c->upper());
    } else {
      ++out.failures;
    }
  }
  if (!cs.empty()) {
    std::sort(cs.begin(), cs.end());
    out.max_minimal_c = cs.back();
    const std::size_t h = cs.size() / 2;
    out.median_minimal_c = cs.size() % 2 ? cs[h] : 0.5 * (cs[h - 1] + cs[h]);
    out.fitted_c = Rational(Integer(static_cast<long>(std::ceil(out.max_minimal_c * 1e6))), Integer(1'000'000));
    out.fitted_c.canonicalize();
  }
  for (const auto& row : out.rows) {
    const bool ok = row.minimal_c && holds_with(row.h0 - row.lower, out.fitted_c, row.error_scale) &&
                    holds_with(row.upper - row.h0, out.fitted_c, row.error_scale);
    if (!ok) ++out.violations;
  }
  return out;
}

std::string suite_csv(const SuiteResult& r) {
  std::ostringstream os;
  os << "id,field,kappa,n,r0,h0,lower,upper,minimal_c\n";
  for (const auto& row : r.rows) {
    os << row.id << ',' << row.field << ',' << row.kappa << ',' << row.n << ',' << row.r0 << ',' << row.h0.interval().decimal(12) << ','
       << row.lower.interval().decimal(12) << ',' << row.upper.interval().decimal(12) << ','
       << (row.minimal_c ? row.minimal_c->decimal(12) : std::string("inf")) << '\n';
  }
  return os.str();
}

nlohmann::json suite_summary(const SuiteResult& r) {
  return {{"instances", r.rows.size()},
          {"max_minimal_c", r.max_minimal_c},
          {"median_minimal_c", r.median_minimal_c},
          {"failures", r.failures},
          {"fitted_c", rational_string(r.fitted_c)},
          {"violations", r.violations}};
}

}  // namespace aokb
