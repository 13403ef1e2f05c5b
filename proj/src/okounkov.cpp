#include "aokb/okounkov.hpp"

#include "aokb/errors.hpp"
#include "aokb/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

namespace aokb {

Rational cross(const RationalPoint& a, const RationalPoint& b, const RationalPoint& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

namespace {

bool on_segment(const RationalPoint& a, const RationalPoint& b, const RationalPoint& p) {
  if (cross(a, b, p) != 0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

}  // namespace

bool RationalPolygon::contains(const RationalPoint& p) const {
  const std::size_t n = vertices.size();
  if (n == 0) return false;
  if (n == 1) return vertices[0] == p;
  if (degenerate) return on_segment(vertices.front(), vertices.back(), p);
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(vertices[i], vertices[(i + 1) % n], p) < 0) return false;
  }
  return true;
}

bool RationalPolygon::contains(const RationalPolygon& inner) const {
  return std::all_of(inner.vertices.begin(), inner.vertices.end(), [&](const auto& v) { return contains(v); });
}

RationalPolygon convex_hull(std::vector<RationalPoint> points) {
  for (auto& p : points) {
    p.x.canonicalize();
    p.y.canonicalize();
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  RationalPolygon out;
  out.area = 0;
  const std::size_t n = points.size();
  if (n <= 2) {
    out.vertices = points;
    return out;
  }
  std::vector<RationalPoint> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], points[i]) <= 0) --k;
    h[k++] = points[i];
  }
  for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], points[i]) <= 0) --k;
    h[k++] = points[i];
  }
  h.resize(k - 1);
  if (h.size() < 3) {
    out.vertices = {points.front(), points.back()};
    return out;
  }
  Rational twice = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& a = h[i];
    const auto& b = h[(i + 1) % h.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  out.vertices = std::move(h);
  out.area = twice / 2;
  out.area.canonicalize();
  out.degenerate = false;
  return out;
}

std::vector<RationalPoint> lambda_points(const SurfaceBundle& b, const FlagData& f, int k_max,
                                         const EnumerationOptions& opts) {
  if (k_max < 1) throw ConfigError("k_max must be at least 1");
  std::vector<std::vector<ValuationVector>> images(static_cast<std::size_t>(k_max));
  EnumerationOptions inner = opts;
  inner.workers = 1;
  // Smallest levels first: a budget failure stops the larger ones.
  parallel_for(images.size(), opts.workers, [&](std::size_t i) {
    const int k = static_cast<int>(i) + 1;
    images[static_cast<std::size_t>(k - 1)] = valuation_image(b, f, k, ImagePath::Auto, inner);
  });
  std::set<RationalPoint> pts;
  for (int k = 1; k <= k_max; ++k) {
    for (const auto& v : images[static_cast<std::size_t>(k - 1)]) {
      RationalPoint p{Rational(static_cast<long>(v.nu1), k), Rational(static_cast<long>(v.nu2), k)};
      p.x.canonicalize();
      p.y.canonicalize();
      pts.insert(p);
    }
  }
  return {pts.begin(), pts.end()};
}

RealValue RealValue::of(const Interval& i) { return RealValue{i, i.mid()}; }

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

Interval log_p(long p) { return log(Interval::from_integer(Integer(p))); }

Interval over_k2(const Interval& x, int k) { return x / Interval::from_integer(Integer(k) * k); }

nlohmann::json point_json(const RationalPoint& p) { return {rational_string(p.x), rational_string(p.y)}; }

}  // namespace

nlohmann::json RealValue::to_json() const { return {{"value", enclosure.decimal(15)}, {"radius", sci(enclosure.radius())}}; }

double relative_difference(double a, double b) {
  if (b == 0) return a == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(a - b) / std::abs(b);
}

CountingLimitReport counting_limit_report(const SurfaceBundle& b, const FlagData& f, int k_max,
                                          const EnumerationOptions& opts) {
  if (k_max < 3) throw ConfigError("k_max must be at least 3");
  struct Slot {
    bool failed = false;
    std::size_t size = 0;
    LogScalar h0;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(k_max));
  EnumerationOptions inner = opts;
  inner.workers = 1;
  // Levels above a failed one are skipped; the report stops at the smallest
  // failure, which is always computed.
  std::atomic<int> lowest_failure{k_max + 1};
  parallel_for(slots.size(), opts.workers, [&](std::size_t idx) {
    const int k = static_cast<int>(idx) + 1;
    if (k > lowest_failure.load()) {
      slots[idx].failed = true;
      return;
    }
    try {
      slots[idx].h0 = h0_hat_power(b, k, inner);
      slots[idx].size = valuation_image(b, f, k, ImagePath::Auto, inner).size();
    } catch (const BudgetExceeded&) {
      slots[idx].failed = true;
      int cur = lowest_failure.load();
      while (k < cur && !lowest_failure.compare_exchange_weak(cur, k)) {
      }
    }
  });
  CountingLimitReport r;
  const Interval lp = log_p(f.p);
  for (int k = 1; k <= k_max; ++k) {
    const Slot& s = slots[static_cast<std::size_t>(k - 1)];
    if (s.failed) {
      r.partial = true;
      r.failed_k = k;
      break;
    }
    CountingRow row;
    row.k = k;
    row.image_size = s.size;
    const Interval c = over_k2(Interval::from_integer(Integer(static_cast<unsigned long>(s.size))) * lp, k);
    const Interval h = over_k2(s.h0.interval(), k);
    row.count_term = RealValue::of(c);
    row.h0_term = RealValue::of(h);
    row.gap = RealValue::of(abs(c - h));
    r.rows.push_back(std::move(row));
  }
  const std::size_t n = r.rows.size();
  if (n >= 2) {
    double mk = 0, mg = 0;
    for (const auto& row : r.rows) {
      mk += row.k;
      mg += row.gap.value;
    }
    mk /= static_cast<double>(n);
    mg /= static_cast<double>(n);
    double num = 0, den = 0;
    for (const auto& row : r.rows) {
      num += (row.k - mk) * (row.gap.value - mg);
      den += (row.k - mk) * (row.k - mk);
    }
    r.slope = num / den;
  }
  return r;
}

MainIdentityReport main_identity_report(const SurfaceBundle& b, const FlagData& f, int k_max,
                                        const EnumerationOptions& opts) {
  MainIdentityReport r;
  r.k_max = k_max;
  const std::vector<RationalPoint> pts = lambda_points(b, f, k_max, opts);
  r.lambda_size = pts.size();
  r.hull = convex_hull(pts);
  r.degenerate = r.hull.degenerate;
  const Interval lp = log_p(f.p);
  const std::size_t count = valuation_image(b, f, k_max, ImagePath::Auto, opts).size();
  const LogScalar h0 = h0_hat_power(b, k_max, opts);
  r.big = count > 0 && !h0.is_zero();
  r.hull_term = RealValue::of(Interval::from_rational(r.hull.area) * lp);
  r.count_term = RealValue::of(over_k2(Interval::from_integer(Integer(static_cast<unsigned long>(count))) * lp, k_max));
  r.volume_term = RealValue::of(over_k2(h0.interval(), k_max));
  r.count_vs_volume = relative_difference(r.count_term.value, r.volume_term.value);
  if (!r.degenerate) {
    r.hull_vs_count = relative_difference(r.hull_term.value, r.count_term.value);
    r.hull_vs_volume = relative_difference(r.hull_term.value, r.volume_term.value);
  }
  return r;
}

namespace {

/// [min, max] of the generic orders of the nonzero short vectors, unscaled.
std::optional<std::pair<std::int64_t, std::int64_t>> order_range(const NormedModule& m, const GenericFlag& g,
                                                                 const EnumerationOptions& opts) {
  const ShortVectorSet s = h0_hat_set(m, opts);
  std::optional<std::pair<std::int64_t, std::int64_t>> out;
  auto add = [&](std::int64_t o) {
    if (!out) out = {o, o};
    out->first = std::min(out->first, o);
    out->second = std::max(out->second, o);
  };
  const bool monomial_point = !g.z0 || *g.z0 == 0;
  if (s.is_product() && monomial_point && s.kappa() == 1) {
    // Each coordinate ranges over its own set, so every index with a nonzero
    // entry is the order of that monomial and the extremes come from them.
    const auto& fac = s.factors();
    const std::int64_t lvl = static_cast<std::int64_t>(fac.size()) - 1;
    for (std::size_t j = 0; j < fac.size(); ++j) {
      const bool nonzero = std::any_of(fac[j].begin(), fac[j].end(), [](const Vec& v) { return v[0] != 0; });
      if (nonzero) add(g.z0 ? static_cast<std::int64_t>(j) : lvl - static_cast<std::int64_t>(j));
    }
    return out;
  }
  if (s.count() > opts.budget) {
    throw BudgetExceeded(opts.budget, std::vector<std::int64_t>(static_cast<std::size_t>(m.z_rank()), 0));
  }
  s.for_each([&](const Vec& v) {
    if (std::any_of(v.begin(), v.end(), [](auto x) { return x != 0; })) add(nu_generic(v, g));
    return true;
  });
  return out;
}

Integer ceil_rational(const Rational& q) {
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return c;
}

}  // namespace

IncidenceProfile bc_incidence(const SurfaceBundle& b, const GenericFlag& g, const FlagData& f, int k, int grid,
                              IncidenceSide side, const EnumerationOptions& opts) {
  if (grid < 4) throw ConfigError("grid must be at least 4");
  if (k < 1) throw ConfigError("k must be positive");
  IncidenceProfile prof;
  prof.side = side;
  prof.k = k;
  const SurfaceBundle kb = b.power(k);
  const NormedModule base = sections_lattice(kb);
  const PrimeData prime = residue_data(make_field("Q"), f.p);

  auto module_at = [&](const Rational& t) {
    if (side == IncidenceSide::Archimedean) return twist(base, LogScalar::rational(-t * k));
    const long i = ceil_rational(t * k).get_si();
    return tensor_rank_one(base, RankOneModule::prime_power(prime, i));
  };
  auto range_at = [&](const Rational& t) { return order_range(module_at(t), g, opts); };

  const auto base_range = range_at(Rational(0));
  if (!base_range) {
    prof.grid = grid;
    prof.step = 0;
    prof.refinement_bound = 0;
    return prof;
  }
  prof.empty = false;

  if (side == IncidenceSide::Archimedean) {
    // First empty twist by doubling, then bisection down to a fraction of the
    // grid step.
    Rational lo = 0, hi(1, 4);
    for (int it = 0; range_at(hi); ++it) {
      if (it > 40) throw Error("twist search did not terminate");
      lo = hi;
      hi *= 2;
    }
    const Rational tol = hi / (8 * grid);
    while (hi - lo > tol) {
      Rational mid = (lo + hi) / 2;
      mid.canonicalize();
      (range_at(mid) ? lo : hi) = mid;
    }
    prof.grid = grid;
    prof.step = hi / grid;
  } else {
    // Segments change only at t = i/k; align the grid with those points.
    long i_max = 0;
    while (range_at(Rational(i_max + 1, k))) {
      if (++i_max > 4096) throw Error("twist search did not terminate");
    }
    const long per = (grid + i_max) / (i_max + 1);
    prof.grid = static_cast<int>(per * (i_max + 1));
    prof.step = Rational(1, static_cast<long>(k) * per);
  }
  prof.step.canonicalize();

  const std::size_t n = static_cast<std::size_t>(prof.grid) + 1;
  std::vector<std::optional<std::pair<std::int64_t, std::int64_t>>> raw(n);
  EnumerationOptions inner = opts;
  inner.workers = 1;
  parallel_for(n, opts.workers, [&](std::size_t j) {
    const Rational t = prof.step * static_cast<long>(j);
    raw[j] = order_range(module_at(t), g, inner);
  });
  for (std::size_t j = 0; j < n; ++j) {
    if (raw[j]) {
      Rational lo(static_cast<long>(raw[j]->first), k), hi(static_cast<long>(raw[j]->second), k);
      lo.canonicalize();
      hi.canonicalize();
      prof.segments.emplace_back(std::make_pair(lo, hi));
    } else {
      prof.segments.emplace_back(std::nullopt);
    }
    if (j > 0) {
      const auto& a = raw[j - 1];
      const auto& c = raw[j];
      if (c && (!a || c->first < a->first || c->second > a->second)) prof.decreasing = false;
    }
  }

  std::vector<RationalPoint> body_pts;
  for (std::int64_t o = base_range->first; o <= base_range->second; ++o) {
    Rational x(static_cast<long>(o), k);
    x.canonicalize();
    Rational gx = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (raw[j] && raw[j]->first <= o && o <= raw[j]->second) gx = prof.step * static_cast<long>(j);
    }
    gx.canonicalize();
    prof.graph.push_back({x, gx});
    body_pts.push_back({x, Rational(0)});
    body_pts.push_back({x, gx});
  }
  prof.body = convex_hull(body_pts);
  prof.refinement_bound = prof.step * Rational(static_cast<long>(base_range->second - base_range->first), k);
  prof.refinement_bound.canonicalize();
  return prof;
}

BcVolumeReport bc_volume_report(const IncidenceProfile& profile, const SurfaceBundle& b, const FlagData& f,
                                const EnumerationOptions& opts) {
  BcVolumeReport r;
  r.refinement_bound = profile.refinement_bound;
  const Interval area = Interval::from_rational(profile.body.area);
  r.body_area = RealValue::of(area);
  r.scaled_area = RealValue::of(profile.side == IncidenceSide::Finite ? area * log_p(f.p) : area);
  r.volume_term = RealValue::of(over_k2(h0_hat_power(b, profile.k, opts).interval(), profile.k));
  r.relative = relative_difference(r.scaled_area.value, r.volume_term.value);
  return r;
}

nlohmann::json to_json(const RationalPolygon& p) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& q : p.vertices) v.push_back(point_json(q));
  return {{"vertices", v}, {"area", rational_string(p.area)}, {"degenerate", p.degenerate}};
}

nlohmann::json to_json(const CountingLimitReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"k", row.k},
                    {"image_size", row.image_size},
                    {"count_term", row.count_term.to_json()},
                    {"h0_term", row.h0_term.to_json()},
                    {"gap", row.gap.to_json()}});
  }
  return {{"rows", rows}, {"slope", sci(r.slope)}, {"partial", r.partial}, {"failed_k", r.failed_k}};
}

nlohmann::json to_json(const MainIdentityReport& r) {
  return {{"k_max", r.k_max},
          {"hull", to_json(r.hull)},
          {"lambda_size", r.lambda_size},
          {"hull_term", r.hull_term.to_json()},
          {"count_term", r.count_term.to_json()},
          {"volume_term", r.volume_term.to_json()},
          {"hull_vs_count", sci(r.hull_vs_count)},
          {"hull_vs_volume", sci(r.hull_vs_volume)},
          {"count_vs_volume", sci(r.count_vs_volume)},
          {"degenerate", r.degenerate},
          {"big", r.big}};
}

nlohmann::json to_json(const IncidenceProfile& p) {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : p.segments) {
    if (s) {
      segs.push_back({rational_string(s->first), rational_string(s->second)});
    } else {
      segs.push_back(nullptr);
    }
  }
  nlohmann::json graph = nlohmann::json::array();
  for (const auto& q : p.graph) graph.push_back(point_json(q));
  return {{"side", p.side == IncidenceSide::Archimedean ? "archimedean" : "finite"},
          {"k", p.k},
          {"grid", p.grid},
          {"step", rational_string(p.step)},
          {"segments", segs},
          {"graph", graph},
          {"body", to_json(p.body)},
          {"refinement_bound", rational_string(p.refinement_bound)},
          {"decreasing", p.decreasing},
          {"empty", p.empty}};
}

nlohmann::json to_json(const BcVolumeReport& r) {
  return {{"body_area", r.body_area.to_json()},
          {"scaled_area", r.scaled_area.to_json()},
          {"volume_term", r.volume_term.to_json()},
          {"relative", sci(r.relative)},
          {"refinement_bound", rational_string(r.refinement_bound)}};
}

std::string hull_svg(const RationalPolygon& hull, const std::vector<RationalPoint>& points,
                     const std::string& x_label, const std::string& y_label) {
  constexpr double size = 400, margin = 40;
  double xmax = 1, ymax = 1;
  for (const auto& p : points) {
    xmax = std::max(xmax, p.x.get_d());
    ymax = std::max(ymax, p.y.get_d());
  }
  for (const auto& p : hull.vertices) {
    xmax = std::max(xmax, p.x.get_d());
    ymax = std::max(ymax, p.y.get_d());
  }
  const double sx = (size - 2 * margin) / xmax, sy = (size - 2 * margin) / ymax;
  auto fx = [&](double x) { return margin + x * sx; };
  auto fy = [&](double y) { return size - margin - y * sy; };
  char buf[160];
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n";
  os << "<rect width=\"400\" height=\"400\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n", fx(0), fy(0),
                fx(xmax), fy(0));
  os << buf;
  std::snprintf(buf, sizeof buf, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n", fx(0), fy(0),
                fx(0), fy(ymax));
  os << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" text-anchor=\"end\">%s</text>\n",
                fx(xmax), fy(0) + 28, x_label.c_str());
  os << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\">%s</text>\n", fx(0) + 4, fy(ymax) - 8,
                y_label.c_str());
  os << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"10\" text-anchor=\"middle\">%.3g</text>\n",
                fx(xmax), fy(0) + 14, xmax);
  os << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"10\" text-anchor=\"end\">%.3g</text>\n",
                fx(0) - 4, fy(ymax) + 4, ymax);
  os << buf;
  if (!hull.vertices.empty()) {
    os << "<polygon fill=\"#cde\" stroke=\"#246\" points=\"";
    for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", fx(hull.vertices[i].x.get_d()),
                    fy(hull.vertices[i].y.get_d()));
      os << buf;
    }
    os << "\"/>\n";
  }
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1.5\" fill=\"#a22\"/>\n", fx(p.x.get_d()),
                  fy(p.y.get_d()));
    os << buf;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace aokb
