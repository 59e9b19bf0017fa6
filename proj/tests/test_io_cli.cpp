#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cuspext/app.hpp"
#include "cuspext/errors.hpp"

using namespace cuspext;
namespace fs = std::filesystem;

namespace {

std::string config_error(const Json& j) {
  try {
    parse_run_config(j, ".");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cuspext_unit_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("defaults of an empty config") {
  const RunConfig cfg = parse_run_config(Json::object(), ".");
  CHECK(cfg.n == 3);
  CHECK(cfg.pq.size() == 1);
  CHECK(cfg.second_map == SecondCylinderMap::Reflect);
  CHECK(cfg.tolerance == kDefaultTolerance);
  CHECK(cfg.tolerance_source == "default");
  CHECK(cfg.functions.size() == 5);
}

TEST_CASE("field-level config errors") {
  CHECK(config_error({{"bogus", 1}}).find("config.bogus") != std::string::npos);
  CHECK(config_error({{"profile", {{"kind", "power"}, {"expo", 2}}}}).find("config.profile.expo") !=
        std::string::npos);
  CHECK(config_error({{"profile", {{"kind", "power"}, {"exponent", "two"}}}}).find("config.profile.exponent") !=
        std::string::npos);
  CHECK(config_error({{"pq", {{1.0, 2.0}}}}).find("config.pq[0]") != std::string::npos);
  CHECK(config_error({{"p", 2.0}}).find("config.p") != std::string::npos);
  CHECK(config_error({{"samples", {{"trace", -1}}}}).find("config.samples.trace") != std::string::npos);
  CHECK(config_error({{"functions", {"nope"}}}).find("config.functions[0]") != std::string::npos);
  CHECK(config_error({{"grid", {{"t_min", 0.0}}}}).find("config.grid") != std::string::npos);
  CHECK(config_error({{"shift_amount", 1}, {"second_cylinder_map", "reflect"}}).find("config.shift_amount") !=
        std::string::npos);
  CHECK(config_error({{"quadrature", {{"grading_ratio", 2.0}}}}).find("quadrature.grading_ratio") !=
        std::string::npos);
  CHECK_FALSE(config_error({{"n", 1}}).empty());
}

TEST_CASE("shift amount selects the far-cylinder fold") {
  CHECK(parse_run_config({{"shift_amount", 1}}, ".").second_map == SecondCylinderMap::Shift1);
  CHECK(parse_run_config({{"shift_amount", 2}}, ".").second_map == SecondCylinderMap::Shift2);
  CHECK_FALSE(config_error({{"shift_amount", 3}}).empty());
}

TEST_CASE("tolerance precedence: config over environment over default") {
  CHECK(parse_run_config(Json::object(), ".", 1e-6).tolerance == 1e-6);
  CHECK(parse_run_config(Json::object(), ".", 1e-6).tolerance_source == "env");
  const RunConfig cfg = parse_run_config({{"tolerance", 1e-7}}, ".", 1e-6);
  CHECK(cfg.tolerance == 1e-7);
  CHECK(cfg.tolerance_source == "config");
  CHECK(parse_tolerance("1e-8") == 1e-8);
  CHECK_THROWS_AS(parse_tolerance("abc"), ConfigError);
  CHECK_THROWS_AS(parse_tolerance("-1"), ConfigError);
  CHECK_THROWS_AS(parse_tolerance(""), ConfigError);
}

TEST_CASE("profiles build from inline tables and csv files") {
  const fs::path dir = scratch("csv");
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "table.csv");
    out << "t,psi\n0.5,0.1\n1,0.3\n";
  }
  const RunConfig cfg = parse_run_config({{"profile", {{"kind", "step"}, {"csv", "table.csv"}}}}, dir);
  const CuspProfile psi = build_profile(cfg.profile, cfg.base_dir);
  CHECK(psi(0.75) == 0.3);
  const RunConfig inline_cfg =
      parse_run_config({{"profile", {{"kind", "step"}, {"breakpoints", {0.5, 1.0}}, {"values", {0.1, 0.3}}}}}, ".");
  CHECK(build_profile(inline_cfg.profile, ".")(0.25) == 0.1);
  {
    std::ofstream out(dir / "bad.csv");
    out << "t,psi\n0.5,0.1\n0.4,0.3\n";
  }
  const RunConfig bad = parse_run_config({{"profile", {{"kind", "step"}, {"csv", "bad.csv"}}}}, dir);
  try {
    build_profile(bad.profile, bad.base_dir);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("reports are byte-identical for the same seed") {
  const Json base = {{"command", "lipschitzify"},
                     {"profile", {{"kind", "power"}, {"exponent", 3.0}}},
                     {"samples", {{"lipschitz_pairs", 500}}},
                     {"seed", 42}};
  std::vector<std::string> runs;
  for (int k = 0; k < 2; ++k) {
    RunConfig cfg = parse_run_config(base, ".");
    cfg.out = scratch("determinism" + std::to_string(k));
    const CommandOutcome out = run_command(cfg);
    CHECK(out.exit_code == kExitOk);
    runs.push_back(slurp(cfg.out / "lipschitzify.json") + slurp(cfg.out / "hat_profile.csv"));
    fs::remove_all(cfg.out);
  }
  CHECK(runs[0] == runs[1]);
  CHECK_FALSE(runs[0].empty());
}

TEST_CASE("misconfigured shift is reported as a check failure") {
  RunConfig cfg = parse_run_config({{"command", "transform-verify"},
                                    {"profile", {{"kind", "power"}, {"coefficient", 0.25}}},
                                    {"shift_amount", 1},
                                    {"samples", {{"round_trip", 200}, {"image", 200}, {"distortion", 200}, {"seam", 20}}}},
                                   ".");
  cfg.out = scratch("shift");
  const CommandOutcome out = run_command(cfg);
  CHECK(out.exit_code == kExitCheckFailed);
  bool names_t2 = false;
  for (const auto& f : out.failures) names_t2 = names_t2 || f.find("t=2") != std::string::npos;
  CHECK(names_t2);
  fs::remove_all(cfg.out);
}

TEST_CASE("unknown command") {
  RunConfig cfg = parse_run_config({{"command", "frobnicate"}}, ".");
  cfg.out = scratch("unknown");
  CHECK_THROWS_AS(run_command(cfg), ConfigError);
  fs::remove_all(cfg.out);
}
