#include "aokb/cli.hpp"
#include "aokb/errors.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using namespace aokb;

namespace {

RunConfig config(const std::string& command) {
  RunConfig c;
  c.command = command;
  return c;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

double number(const nlohmann::json& j) {
  return j.is_string() ? std::stod(j.get<std::string>()) : j.get<double>();
}

}  // namespace

TEST(VerifyFiltration, ZeroInstancesGiveHeaderOnly) {
  RunConfig c = config("verify-filtration");
  c.instances = 0;
  const RunOutput out = run(c);
  EXPECT_EQ(out.exit_code, kExitOk);
  EXPECT_EQ(lines(out.csv).size(), 1u);
  EXPECT_EQ(out.json["result"]["Q"]["instances"], 0);
}

TEST(VerifyFiltration, GaussianRowsHaveDegreeTwo) {
  RunConfig c = config("verify-filtration");
  c.fields = {"Q(sqrt(-1))"};
  c.instances = 50;
  const RunOutput out = run(c);
  EXPECT_EQ(out.exit_code, kExitOk);
  const auto rows = lines(out.csv);
  ASSERT_EQ(rows.size(), 51u);
  EXPECT_EQ(rows[0].substr(0, 15), "id,field,kappa,");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].substr(rows[i].find(',') + 1, 14), "Q(sqrt(-1)),2,") << rows[i];
  }
  const auto& s = out.json["result"]["Q(sqrt(-1))"];
  EXPECT_EQ(s["violations"], 0);
  EXPECT_TRUE(s["holds_at_fitted_c"].get<bool>());
  EXPECT_GE(s["max_minimal_c"].get<double>(), 0.0);
}

TEST(VerifyFiltration, EnvelopeCarriesConfigAndTolerances) {
  RunConfig c = config("verify-filtration");
  c.instances = 5;
  const RunOutput out = run(c);
  EXPECT_EQ(out.json["tool"], "aokb");
  EXPECT_FALSE(out.json["version"].get<std::string>().empty());
  EXPECT_EQ(out.json["config"]["seed"], 42);
  EXPECT_EQ(out.json["config"]["tolerances"]["identity_count"], 0.10);
  EXPECT_FALSE(out.json["config"].contains("workers"));
  EXPECT_TRUE(out.json["result"]["Q"].contains("fitted_c"));
}

TEST(VerifyFiltration, SeveralFieldsConcatenate) {
  RunConfig c = config("verify-filtration");
  c.fields = {"Q", "Q(sqrt(2))"};
  c.instances = 7;
  const RunOutput out = run(c);
  EXPECT_EQ(lines(out.csv).size(), 15u);
  EXPECT_TRUE(out.json["result"].contains("Q(sqrt(2))"));
}

TEST(VerifyFiltration, BudgetGivesExitThree) {
  RunConfig c = config("verify-filtration");
  c.instances = 20;
  c.radius_factor = "40";
  c.budget = 1000;
  const RunOutput out = run(c);
  EXPECT_EQ(out.exit_code, kExitBudget);
  EXPECT_TRUE(out.json["result"]["Q"]["partial"].get<bool>());
}

TEST(Body, UnitBoxThreeFigures) {
  RunConfig c = config("body");
  c.k_max = 10;
  c.svg_path = "unused.svg";
  const RunOutput out = run(c);
  EXPECT_EQ(out.exit_code, kExitOk);
  const auto& m = out.json["result"]["main_identity"];
  for (const char* key : {"hull_term", "count_term", "volume_term"}) {
    EXPECT_GT(number(m[key]["value"]), 0) << key;
  }
  EXPECT_TRUE(out.json["result"]["big"].get<bool>());
  EXPECT_TRUE(out.json["result"]["counting_limit"]["decays"].get<bool>());
  EXPECT_NE(out.svg.find("<svg"), std::string::npos);
  EXPECT_NE(out.svg.find("<polygon"), std::string::npos);
}

TEST(Body, DegenerateBundleIsNotBig) {
  RunConfig c = config("body");
  c.bundle = "box:1/10,1/10";
  c.k_max = 4;
  const RunOutput out = run(c);
  EXPECT_EQ(out.exit_code, kExitOk);
  EXPECT_FALSE(out.json["result"]["big"].get<bool>());
  EXPECT_TRUE(out.json["result"]["main_identity"]["degenerate"].get<bool>());
}

TEST(Body, OtherPrimeChangesHull) {
  RunConfig c = config("body");
  c.k_max = 10;
  const RunOutput two = run(c);
  c.p = 3;
  const RunOutput three = run(c);
  ASSERT_EQ(three.exit_code, kExitOk);
  const auto& a = two.json["result"]["main_identity"];
  const auto& b = three.json["result"]["main_identity"];
  EXPECT_NE(a["hull"], b["hull"]);
  // The volume term does not see the prime; both hull terms approach it.
  EXPECT_EQ(a["volume_term"], b["volume_term"]);
  EXPECT_TRUE(a["hull_vs_volume_within"].get<bool>());
  EXPECT_TRUE(b["hull_vs_volume_within"].get<bool>());
}

TEST(Body, BudgetIsPartial) {
  RunConfig c = config("body");
  c.bundle = "fs:1:-1";
  c.k_max = 4;
  c.budget = 100'000;
  const RunOutput out = run(c);
  EXPECT_EQ(out.exit_code, kExitBudget);
  EXPECT_TRUE(out.json["result"]["counting_limit"]["partial"].get<bool>());
  EXPECT_TRUE(out.json["result"]["main_identity"]["partial"].get<bool>());
}

TEST(BcCompare, UnitBoxTwoAreasAndGap) {
  RunConfig c = config("bc-compare");
  const RunOutput out = run(c);
  EXPECT_EQ(out.exit_code, kExitOk);
  const auto& t = out.json["result"]["table"];
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0]["side"], "archimedean");
  EXPECT_EQ(t[1]["side"], "finite");
  const double gap = std::abs(number(t[0]["scaled_area"]["value"]) - number(t[1]["scaled_area"]["value"]));
  EXPECT_NEAR(number(out.json["result"]["gap"]), gap, 1e-3 * gap + 1e-12);
  EXPECT_TRUE(out.json["result"]["finite_within"].get<bool>());
}

TEST(BcCompare, EmptyProfileIsFlagged) {
  RunConfig c = config("bc-compare");
  c.bundle = "box:1/10,1/10";
  c.k = 4;
  c.grid = 8;
  const RunOutput out = run(c);
  EXPECT_EQ(out.exit_code, kExitOk);
  EXPECT_TRUE(out.json["result"]["empty"].get<bool>());
  EXPECT_FALSE(out.json["result"]["archimedean_within"].get<bool>());
}

TEST(BcCompare, GridDoublingStaysWithinRefinementBound) {
  for (int grid : {8, 16}) {
    RunConfig c = config("bc-compare");
    c.k = 4;
    c.grid = grid;
    const RunOutput coarse = run(c);
    c.grid = 2 * grid;
    const RunOutput fine = run(c);
    for (std::size_t side = 0; side < 2; ++side) {
      const auto& a = coarse.json["result"]["table"][side];
      const auto& b = fine.json["result"]["table"][side];
      const double diff = std::abs(number(a["body_area"]["value"]) - number(b["body_area"]["value"]));
      Rational bound(a["refinement_bound"].get<std::string>());
      bound.canonicalize();
      EXPECT_LE(diff, bound.get_d() + 1e-12) << "grid " << grid << " side " << side;
    }
  }
}

TEST(Config, ErrorsGiveExitTwo) {
  RunConfig c = config("body");
  c.k_max = 1;
  EXPECT_EQ(run(c).exit_code, kExitConfig);
  c = config("body");
  c.bundle = "box:1,x";
  EXPECT_EQ(run(c).exit_code, kExitConfig);
  c = config("verify-filtration");
  c.fields = {"Q(sqrt(5)"};
  EXPECT_EQ(run(c).exit_code, kExitConfig);
  c = config("bc-compare");
  c.grid = 2;
  const RunOutput out = run(c);
  EXPECT_EQ(out.exit_code, kExitConfig);
  EXPECT_TRUE(out.json.contains("error"));
  c = config("frobnicate");
  EXPECT_EQ(run(c).exit_code, kExitConfig);
}

TEST(Config, JsonRoundTripAndUnknownKeys) {
  RunConfig c = config("bc-compare");
  c.k = 6;
  c.z0 = "inf";
  c.tolerances.bc_finite = 0.2;
  RunConfig d;
  d.apply_json(c.to_json());
  EXPECT_EQ(d.to_json(), c.to_json());
  EXPECT_THROW(d.apply_json(nlohmann::json::parse(R"({"kmax": 3, "colour": "red"})")), ConfigError);
  EXPECT_THROW(d.apply_json(nlohmann::json::parse(R"({"kmax": "three"})")), ConfigError);
  d.apply_json(c.to_json());
  d.apply_json(nlohmann::json::parse(R"({"workers": 3, "csv": "x.csv"})"));
  EXPECT_EQ(d.workers, 3);
  EXPECT_EQ(d.to_json(), c.to_json());
}

TEST(Determinism, WorkerCountDoesNotChangeOutputs) {
  for (const char* cmd : {"verify-filtration", "body", "bc-compare"}) {
    RunConfig c = config(cmd);
    c.fields = {"Q", "Q(sqrt(-1))"};
    c.instances = 40;
    c.k_max = 8;
    c.workers = 1;
    const RunOutput a = run(c);
    c.workers = 4;
    const RunOutput b = run(c);
    EXPECT_EQ(a.json.dump(), b.json.dump()) << cmd;
    EXPECT_EQ(a.csv, b.csv) << cmd;
    EXPECT_EQ(a.svg, b.svg) << cmd;
  }
}

#ifdef AOKB_CLI_PATH
namespace {

int exit_status(const std::string& args) {
  const std::string cmd = std::string(AOKB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Binary, ExitCodes) {
  EXPECT_EQ(exit_status("verify-filtration --instances 0"), 0);
  EXPECT_EQ(exit_status("body --kmax 2"), 2);
  EXPECT_EQ(exit_status("body --bundle nonsense"), 2);
  EXPECT_EQ(exit_status("body --bundle fs:1:-1 --kmax 3 --budget 1000"), 3);
  EXPECT_EQ(exit_status(""), 2);
}

TEST(Binary, ConfigFileOverridesFlags) {
  const std::string cfg = "cli_test_config.json";
  const std::string json = "cli_test_out.json";
  std::ofstream(cfg) << R"({"command": "body", "kmax": 5, "bundle": "box:1,2"})";
  EXPECT_EQ(exit_status("body --kmax 9 --config " + cfg + " --json " + json), 0);
  std::ifstream is(json);
  const auto out = nlohmann::json::parse(is);
  EXPECT_EQ(out["config"]["kmax"], 5);
  std::remove(cfg.c_str());
  std::remove(json.c_str());
}
#endif
