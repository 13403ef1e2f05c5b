#include "aokb/cli.hpp"

#include "aokb/errors.hpp"
#include "aokb/filtration.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#ifndef AOKB_VERSION
#define AOKB_VERSION "0.0.0"
#endif

namespace aokb {

const char* const kSuiteCsvHelp =
    "CSV columns (verify-filtration): id,field,kappa,n,r0,h0,lower,upper,minimal_c\n"
    "  id         instance index within the field's suite\n"
    "  field      field descriptor\n"
    "  kappa      degree of the field\n"
    "  n          length of the twist chain (L_0 excluded)\n"
    "  r0         O_K-rank of the span of the short vectors of M\n"
    "  h0         log of the number of short vectors\n"
    "  lower      sum r_i (a_i - a_{i-1})\n"
    "  upper      h0(M (x) L_n^dual) + sum r_{i-1} (a_i - a_{i-1})\n"
    "  minimal_c  smallest C making both inequalities hold (inf if none)\n";

nlohmann::json Tolerances::to_json() const {
  return {{"identity_count", identity_count},
          {"identity_volume", identity_volume},
          {"counting_ratio", counting_ratio},
          {"bc_finite", bc_finite},
          {"bc_archimedean", bc_archimedean}};
}

Tolerances Tolerances::from_json(const nlohmann::json& j) {
  Tolerances t;
  try {
    for (auto& [key, value] : j.items()) {
      double* slot = key == "identity_count"    ? &t.identity_count
                     : key == "identity_volume" ? &t.identity_volume
                     : key == "counting_ratio"  ? &t.counting_ratio
                     : key == "bc_finite"       ? &t.bc_finite
                     : key == "bc_archimedean"  ? &t.bc_archimedean
                                                : nullptr;
      if (!slot) throw ConfigError("unknown tolerance \"" + key + "\"");
      *slot = value.get<double>();
      if (!(*slot > 0)) throw ConfigError("tolerance \"" + key + "\" must be positive");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("tolerances: ") + e.what());
  }
  return t;
}

nlohmann::json RunConfig::to_json() const {
  return {{"command", command},     {"field", fields},          {"bundle", bundle},
          {"p", p},                 {"point", point},           {"z0", z0},
          {"kmax", k_max},          {"k", k},                   {"grid", grid},
          {"instances", instances}, {"seed", seed},             {"radius_factor", radius_factor},
          {"budget", budget},       {"tolerances", tolerances.to_json()}};
}

void RunConfig::apply_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  auto text = [](const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  try {
    for (auto& [key, v] : j.items()) {
      if (key == "command") {
        command = v.get<std::string>();
      } else if (key == "field") {
        fields = v.is_array() ? v.get<std::vector<std::string>>() : std::vector<std::string>{v.get<std::string>()};
      } else if (key == "bundle") {
        bundle = text(v);
      } else if (key == "p") {
        p = v.get<long>();
      } else if (key == "point") {
        point = text(v);
      } else if (key == "z0") {
        z0 = text(v);
      } else if (key == "kmax") {
        k_max = v.get<int>();
      } else if (key == "k") {
        k = v.get<int>();
      } else if (key == "grid") {
        grid = v.get<int>();
      } else if (key == "instances") {
        instances = v.get<int>();
      } else if (key == "seed") {
        seed = v.get<std::uint64_t>();
      } else if (key == "radius_factor") {
        radius_factor = text(v);
      } else if (key == "budget") {
        budget = v.get<std::uint64_t>();
      } else if (key == "workers") {
        workers = v.get<int>();
      } else if (key == "csv") {
        csv_path = v.get<std::string>();
      } else if (key == "json") {
        json_path = v.get<std::string>();
      } else if (key == "svg") {
        svg_path = v.get<std::string>();
      } else if (key == "tolerances") {
        tolerances = Tolerances::from_json(v);
      } else {
        throw ConfigError("unknown config key \"" + key + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

void RunConfig::validate() const {
  if (command != "verify-filtration" && command != "body" && command != "bc-compare") {
    throw ConfigError("unknown command \"" + command + "\"");
  }
  if (budget == 0) throw ConfigError("budget must be positive");
  if (workers < 0) throw ConfigError("workers must be non-negative");
  if (command == "verify-filtration") {
    if (instances < 0) throw ConfigError("instances must be non-negative");
    if (fields.empty()) throw ConfigError("at least one field is required");
    for (const auto& f : fields) make_field(f);
    if (parse_rational(radius_factor) <= 0) throw ConfigError("radius_factor must be positive");
    return;
  }
  parse_bundle(bundle);
  parse_flag(p, point);
  if (command == "body" && k_max < 3) throw ConfigError("kmax must be at least 3");
  if (command == "bc-compare") {
    parse_generic(z0);
    if (k < 1) throw ConfigError("k must be positive");
    if (grid < 4) throw ConfigError("grid must be at least 4");
  }
}

SurfaceBundle parse_bundle(const std::string& spec) {
  try {
    if (!spec.empty() && spec.front() == '{') return SurfaceBundle::from_json(nlohmann::json::parse(spec));
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw ConfigError("bundle must be box:w0,w1,... or fs:level:lambda");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    if (kind == "box") {
      std::vector<Rational> w;
      std::stringstream ss(rest);
      std::string item;
      while (std::getline(ss, item, ',')) w.push_back(parse_rational(item));
      return SurfaceBundle::box(std::move(w));
    }
    if (kind == "fs") {
      const auto c2 = rest.find(':');
      if (c2 == std::string::npos) throw ConfigError("fs bundle must be fs:level:lambda");
      return SurfaceBundle::fubini_study(std::stoi(rest.substr(0, c2)), LogScalar::parse(rest.substr(c2 + 1)));
    }
    throw ConfigError("unknown bundle family \"" + kind + "\"");
  } catch (const ConfigError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bundle: ") + e.what());
  } catch (const std::logic_error&) {
    throw ConfigError("bundle: malformed level in \"" + spec + "\"");
  } catch (const Error& e) {
    throw ConfigError(std::string("bundle: ") + e.what());
  }
}

FlagData parse_flag(long p, const std::string& point) {
  if (point == "inf" || point == "infinity") return FlagData::make(p, std::nullopt);
  try {
    std::size_t used = 0;
    const long a = std::stol(point, &used);
    if (used != point.size()) throw ConfigError("flag point must be an integer or inf");
    return FlagData::make(p, a);
  } catch (const std::logic_error&) {
    throw ConfigError("flag point must be an integer or inf");
  }
}

GenericFlag parse_generic(const std::string& z0) {
  if (z0 == "inf" || z0 == "infinity") return GenericFlag{};
  try {
    return GenericFlag{parse_rational(z0)};
  } catch (const Error& e) {
    throw ConfigError(std::string("z0: ") + e.what());
  }
}

namespace {

nlohmann::json envelope(const RunConfig& cfg) {
  return {{"tool", "aokb"}, {"version", AOKB_VERSION}, {"config", cfg.to_json()}};
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

}  // namespace

RunOutput cmd_verify_filtration(const RunConfig& cfg) {
  RunOutput out;
  out.json = envelope(cfg);
  nlohmann::json results = nlohmann::json::object();
  std::string csv = "id,field,kappa,n,r0,h0,lower,upper,minimal_c\n";
  bool budget_hit = false;
  bool violated = false;
  for (const auto& field : cfg.fields) {
    SuiteOptions o;
    o.field = field;
    o.instances = cfg.instances;
    o.seed = cfg.seed;
    o.radius_factor = parse_rational(cfg.radius_factor);
    o.enumeration = cfg.enumeration();
    try {
      const SuiteResult r = run_suite(o);
      const std::string rows = suite_csv(r);
      csv += rows.substr(rows.find('\n') + 1);
      nlohmann::json s = suite_summary(r);
      s["holds_at_fitted_c"] = r.violations == 0;
      results[field] = s;
      violated = violated || r.violations > 0;
    } catch (const BudgetExceeded& e) {
      budget_hit = true;
      results[field] = {{"error", e.what()}, {"partial", true}};
    }
  }
  out.json["result"] = results;
  out.csv = csv;
  out.exit_code = budget_hit ? kExitBudget : violated ? kExitViolation : kExitOk;
  return out;
}

RunOutput cmd_body(const RunConfig& cfg) {
  RunOutput out;
  out.json = envelope(cfg);
  const SurfaceBundle b = parse_bundle(cfg.bundle);
  const FlagData f = parse_flag(cfg.p, cfg.point);
  const EnumerationOptions e = cfg.enumeration();
  nlohmann::json result;
  const CountingLimitReport c = counting_limit_report(b, f, cfg.k_max, e);
  result["counting_limit"] = to_json(c);
  if (c.rows.size() >= 3 && c.rows[1].gap.value > 0) {
    const double ratio = c.rows.back().gap.value / c.rows[1].gap.value;
    result["counting_limit"]["ratio_to_k2"] = sci(ratio);
    result["counting_limit"]["decays"] = ratio <= cfg.tolerances.counting_ratio && c.slope < 0;
  }
  if (c.partial) {
    // The identity needs every level up to k_max, including the failed one.
    result["main_identity"] = {{"error", "skipped: level " + std::to_string(c.failed_k) + " exceeded the budget"},
                               {"partial", true}};
  } else {
    try {
      const MainIdentityReport m = main_identity_report(b, f, cfg.k_max, e);
      nlohmann::json mj = to_json(m);
      mj["hull_vs_count_within"] = !m.degenerate && m.hull_vs_count <= cfg.tolerances.identity_count;
      mj["hull_vs_volume_within"] = !m.degenerate && m.hull_vs_volume <= cfg.tolerances.identity_volume;
      result["main_identity"] = mj;
      result["big"] = m.big;
      if (!cfg.svg_path.empty()) out.svg = hull_svg(m.hull, lambda_points(b, f, cfg.k_max, e));
    } catch (const BudgetExceeded& ex) {
      result["main_identity"] = {{"error", ex.what()}, {"partial", true}};
      out.exit_code = kExitBudget;
    }
  }
  if (c.partial) out.exit_code = kExitBudget;
  out.json["result"] = result;
  return out;
}

RunOutput cmd_bc_compare(const RunConfig& cfg) {
  RunOutput out;
  out.json = envelope(cfg);
  const SurfaceBundle b = parse_bundle(cfg.bundle);
  const FlagData f = parse_flag(cfg.p, cfg.point);
  const GenericFlag g = parse_generic(cfg.z0);
  const EnumerationOptions e = cfg.enumeration();
  nlohmann::json result;
  try {
    const IncidenceProfile arch = bc_incidence(b, g, f, cfg.k, cfg.grid, IncidenceSide::Archimedean, e);
    const IncidenceProfile fin = bc_incidence(b, g, f, cfg.k, cfg.grid, IncidenceSide::Finite, e);
    const BcVolumeReport ra = bc_volume_report(arch, b, f, e);
    const BcVolumeReport rf = bc_volume_report(fin, b, f, e);
    const RationalPolygon lam = convex_hull(lambda_points(b, f, cfg.k, e));
    const double lam_term = lam.area.get_d() * std::log(static_cast<double>(f.p));
    const double finite_vs_lambda = relative_difference(rf.scaled_area.value, lam_term);
    nlohmann::json table = nlohmann::json::array();
    for (const auto* r : {&ra, &rf}) {
      nlohmann::json row = to_json(*r);
      row["side"] = r == &ra ? "archimedean" : "finite";
      table.push_back(row);
    }
    result["table"] = table;
    result["archimedean"] = to_json(arch);
    result["finite"] = to_json(fin);
    result["lambda_hull"] = to_json(lam);
    result["finite_vs_lambda"] = sci(finite_vs_lambda);
    result["gap"] = sci(std::abs(ra.scaled_area.value - rf.scaled_area.value));
    result["empty"] = arch.empty && fin.empty;
    result["archimedean_within"] = !arch.empty && ra.relative <= cfg.tolerances.bc_archimedean;
    result["finite_within"] = !fin.empty && finite_vs_lambda <= cfg.tolerances.bc_finite;
  } catch (const BudgetExceeded& ex) {
    result["error"] = ex.what();
    result["partial"] = true;
    out.exit_code = kExitBudget;
  }
  out.json["result"] = result;
  return out;
}

RunOutput run(const RunConfig& cfg) {
  try {
    cfg.validate();
    if (cfg.command == "verify-filtration") return cmd_verify_filtration(cfg);
    if (cfg.command == "body") return cmd_body(cfg);
    return cmd_bc_compare(cfg);
  } catch (const BudgetExceeded& e) {
    RunOutput out;
    out.exit_code = kExitBudget;
    out.json = envelope(cfg);
    out.json["error"] = e.what();
    return out;
  } catch (const Error& e) {
    RunOutput out;
    out.exit_code = kExitConfig;
    out.json = envelope(cfg);
    out.json["error"] = e.what();
    return out;
  }
}

bool write_outputs(const RunConfig& cfg, const RunOutput& out, std::string& error) {
  auto write = [&](const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os || !(os << text)) {
      error = "cannot write " + path;
      return false;
    }
    return true;
  };
  const std::string json = out.json.dump(2) + "\n";
  if (cfg.json_path.empty()) {
    std::cout << json;
  } else if (!write(cfg.json_path, json)) {
    return false;
  }
  if (!cfg.csv_path.empty() && cfg.command == "verify-filtration" && !write(cfg.csv_path, out.csv)) return false;
  if (!cfg.svg_path.empty() && !out.svg.empty() && !write(cfg.svg_path, out.svg)) return false;
  return true;
}

}  // namespace aokb
