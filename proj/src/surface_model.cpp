#include "aokb/surface_model.hpp"

#include "aokb/errors.hpp"

#include <cmath>

namespace aokb {

SurfaceBundle SurfaceBundle::box(std::vector<Rational> weights) {
  if (weights.empty()) throw InvalidModule("box bundle needs at least one weight");
  for (auto& w : weights) {
    w.canonicalize();
    if (w <= 0) throw InvalidModule("box weights must be positive");
  }
  const int level = static_cast<int>(weights.size()) - 1;
  return SurfaceBundle(level, BoxWeights{std::move(weights)});
}

SurfaceBundle SurfaceBundle::fubini_study(int level, const LogScalar& lambda) {
  if (level < 0) throw InvalidModule("negative level");
  return SurfaceBundle(level, FSScaled{lambda});
}

SurfaceBundle SurfaceBundle::power(int k) const {
  if (k < 1) throw InvalidModule("power must be positive");
  if (!is_box()) return fubini_study(level_ * k, fs().lambda.times(k));
  const auto& b = box_weights().b;
  std::vector<Rational> acc = b;
  for (int step = 1; step < k; ++step) {
    std::vector<Rational> next(acc.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < acc.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) next[i + j] += acc[i] * b[j];
    }
    for (auto& x : next) x.canonicalize();
    acc = std::move(next);
  }
  return box(std::move(acc));
}

nlohmann::json SurfaceBundle::to_json() const {
  nlohmann::json family;
  if (is_box()) {
    nlohmann::json ws = nlohmann::json::array();
    for (const auto& w : box_weights().b) ws.push_back(rational_string(w));
    family["box"] = ws;
  } else {
    family["fs"] = {{"lambda", fs().lambda.to_string()}};
  }
  return {{"level", level_}, {"family", family}};
}

SurfaceBundle SurfaceBundle::from_json(const nlohmann::json& j) {
  try {
    const int level = j.at("level").get<int>();
    const auto& family = j.at("family");
    if (family.contains("box")) {
      std::vector<Rational> ws;
      for (const auto& w : family.at("box")) ws.push_back(parse_rational(w.is_string() ? w.get<std::string>() : w.dump()));
      if (static_cast<int>(ws.size()) != level + 1) {
        throw ConfigError("box family needs level+1 = " + std::to_string(level + 1) + " weights, got " +
                          std::to_string(ws.size()));
      }
      return box(std::move(ws));
    }
    if (family.contains("fs")) {
      const auto& l = family.at("fs").at("lambda");
      return fubini_study(level, LogScalar::parse(l.is_string() ? l.get<std::string>() : l.dump()));
    }
    throw ConfigError("family must be \"box\" or \"fs\"");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bundle descriptor: ") + e.what());
  } catch (const InvalidModule& e) {
    throw ConfigError(std::string("bundle descriptor: ") + e.what());
  }
}

NormedModule sections_lattice(const SurfaceBundle& b) {
  if (b.is_box()) return NormedModule::uniform_box(make_field("Q"), b.box_weights().b);
  return NormedModule::fubini_study(b.level(), b.fs().lambda);
}

LogScalar h0_hat_power(const SurfaceBundle& b, int k, const EnumerationOptions& opts) {
  return h0_hat(sections_lattice(b.power(k)), opts);
}

LogScalar box_h0_closed_form(const BoxWeights& w) {
  Integer count = 1;
  for (const auto& b : w.b) {
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
    count *= 2 * f + 1;
  }
  return LogScalar::log_of(count);
}

VolumeEstimate volume_estimate(const SurfaceBundle& b, int k_max, const EnumerationOptions& opts) {
  if (k_max < 3) throw ConfigError("k_max must be at least 3");
  VolumeEstimate v;
  for (int k = 1; k <= k_max; ++k) {
    VolumePoint p;
    p.k = k;
    try {
      const ShortVectorSet s = h0_hat_set(sections_lattice(b.power(k)), opts);
      p.h0 = s.h0();
      p.undecided = s.undecided_count();
    } catch (const BudgetExceeded&) {
      v.partial = true;
      v.failed_k = k;
      break;
    }
    p.normalized = 2 * p.h0.approx() / (static_cast<double>(k) * k);
    v.points.push_back(p);
  }
  const auto& pts = v.points;
  const std::size_t n = pts.size();
  if (n >= 2) {
    const double k = pts[n - 1].k;
    v.extrapolated = k * pts[n - 1].normalized - (k - 1) * pts[n - 2].normalized;
  } else if (n == 1) {
    v.extrapolated = pts[0].normalized;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (pts[i].normalized < pts[i - 1].normalized) v.monotone = false;
    if (2 * i >= n) v.oscillation = std::max(v.oscillation, std::abs(pts[i].normalized - pts[i - 1].normalized));
  }
  bool any = false;
  for (const auto& p : pts) any = any || !p.h0.is_zero();
  v.big = any && (n == 0 ? false : pts.back().normalized > 0);
  return v;
}

nlohmann::json to_json(const VolumeEstimate& v) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : v.points) {
    pts.push_back({{"k", p.k},
                   {"h0", p.h0.interval().decimal(15)},
                   {"h0_exact", p.h0.to_string()},
                   {"normalized", p.normalized},
                   {"undecided", p.undecided.get_str()}});
  }
  return {{"points", pts},
          {"extrapolated", v.extrapolated},
          {"monotone", v.monotone},
          {"oscillation", v.oscillation},
          {"big", v.big},
          {"partial", v.partial},
          {"failed_k", v.failed_k}};
}

}  // namespace aokb
