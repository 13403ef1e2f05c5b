// Command line front end: verify-filtration, body, bc-compare.

#include "aokb/cli.hpp"
#include "aokb/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  aokb::RunConfig cfg;
  std::string config_path;

  CLI::App app{"Arithmetic Okounkov bodies on the projective line over Z: suites and reports."};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(AOKB_VERSION));
  app.add_option("--config", config_path, "JSON config; its keys override command line flags");
  app.add_option("--workers", cfg.workers, "worker threads (0 = hardware concurrency)");
  app.add_option("--budget", cfg.budget, "enumeration budget per short-vector scan");
  app.add_option("--json", cfg.json_path, "write the JSON report here instead of stdout");
  app.footer(std::string("Exit codes: 0 ok, 1 inequality violated, 2 config error, 3 budget exhausted.\n\n") +
             aokb::kSuiteCsvHelp);

  auto* vf = app.add_subcommand("verify-filtration", "randomized suite for the filtration inequalities");
  vf->add_option("--field", cfg.fields, "field descriptor, repeatable: Q, \"Q(sqrt(-1))\", \"Q(sqrt(2))\"");
  vf->add_option("--instances", cfg.instances, "instances per field");
  vf->add_option("--seed", cfg.seed, "suite seed");
  vf->add_option("--radius-factor", cfg.radius_factor, "multiplies every weight (rational)");
  vf->add_option("--csv", cfg.csv_path, "per-instance rows");

  auto* body = app.add_subcommand("body", "Okounkov body hull, counting limit and volume identity");
  body->add_option("--bundle", cfg.bundle, "box:w0,w1,... or fs:level:lambda");
  body->add_option("--p", cfg.p, "prime of the fiber");
  body->add_option("--point", cfg.point, "point of the fiber: integer or inf");
  body->add_option("--kmax", cfg.k_max, "largest level");
  body->add_option("--svg", cfg.svg_path, "write the hull of Lambda as SVG");

  auto* bc = app.add_subcommand("bc-compare", "incidence bodies on the archimedean and finite side");
  bc->add_option("--bundle", cfg.bundle, "box:w0,w1,... or fs:level:lambda");
  bc->add_option("--p", cfg.p, "prime of the fiber");
  bc->add_option("--point", cfg.point, "point of the fiber for Lambda: integer or inf");
  bc->add_option("--z0", cfg.z0, "generic point: rational or inf");
  bc->add_option("--k", cfg.k, "working level");
  bc->add_option("--grid", cfg.grid, "twist grid resolution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : aokb::kExitConfig;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw aokb::ConfigError("cannot read config " + config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw aokb::ConfigError(std::string("config: ") + e.what());
      }
      cfg.apply_json(j);
    }
  } catch (const aokb::ConfigError& e) {
    std::cerr << "aokb: " << e.what() << "\n";
    return aokb::kExitConfig;
  }

  const aokb::RunOutput out = aokb::run(cfg);
  if (out.json.contains("error") && out.exit_code != aokb::kExitOk) {
    std::cerr << "aokb: " << out.json["error"].get<std::string>() << "\n";
  }
  std::string err;
  if (!aokb::write_outputs(cfg, out, err)) {
    std::cerr << "aokb: " << err << "\n";
    return aokb::kExitConfig;
  }
  return out.exit_code;
}
