#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cuspext/extension.hpp"
#include "cuspext/profile.hpp"
#include "cuspext/quadrature.hpp"
#include "cuspext/report.hpp"

namespace cuspext {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitNumeric = 4;

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr const char* kToleranceEnv = "CUSPEXT_TOL";

struct ProfileConfig {
  /// power | linear | step | tabulated
  std::string kind = "power";
  double coefficient = 1.0;
  double exponent = 2.0;
  double slope = 0.25;
  std::vector<double> breakpoints;
  std::vector<double> values;
  /// Table source for step/tabulated kinds, relative to the config file.
  std::string csv;
};

struct SampleCounts {
  std::size_t round_trip = 100000;
  std::size_t image = 10000;
  std::size_t distortion = 10000;
  std::size_t seam = 200;
  std::size_t trace = 10000;
  std::size_t normals = 1000;
  std::size_t lipschitz_pairs = 10000;
};

struct GridConfig {
  double t_min = 1e-4;
  double t_max = 1.0;
  std::size_t count = 100;
};

struct SweepConfig {
  double first = 1.1;
  double last = 4.0;
  double step = 0.1;
};

struct RunConfig {
  std::string command;
  ProfileConfig profile;
  int n = 3;
  std::vector<std::pair<double, double>> pq{{2.0, 1.0}};
  SweepConfig sweep;
  std::vector<std::string> functions = test_function_names();
  GridConfig grid;
  QuadratureOptions quadrature;
  SampleCounts samples;
  SecondCylinderMap second_map = SecondCylinderMap::Reflect;
  std::uint64_t seed = 1;
  double tolerance = kDefaultTolerance;
  /// default | env | config
  std::string tolerance_source = "default";
  std::filesystem::path out = ".";
  /// Directory relative paths in the config resolve against.
  std::filesystem::path base_dir = ".";
};

std::vector<std::string> command_names();

/// Field-checked parse; unknown fields and out-of-range values raise
/// ConfigError naming the field. `env_tolerance` replaces the built-in
/// default but not an explicit "tolerance" entry.
RunConfig parse_run_config(const Json& j, const std::filesystem::path& base_dir,
                           std::optional<double> env_tolerance = std::nullopt);
RunConfig load_run_config(const std::filesystem::path& path,
                          std::optional<double> env_tolerance = std::nullopt);

/// Parses CUSPEXT_TOL-style text; ConfigError if not a positive number.
double parse_tolerance(const std::string& text);

CuspProfile build_profile(const ProfileConfig& cfg, const std::filesystem::path& base_dir);

/// Every resolved setting, written into each report header.
Json config_to_json(const RunConfig& cfg);

struct CommandOutcome {
  int exit_code = kExitOk;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> files;
  Json report;
};

CommandOutcome cmd_lipschitzify(const RunConfig& cfg);
CommandOutcome cmd_transform_verify(const RunConfig& cfg);
CommandOutcome cmd_extend_verify(const RunConfig& cfg);
CommandOutcome cmd_admissibility_sweep(const RunConfig& cfg);

/// Dispatches on cfg.command and writes the outputs into cfg.out.
CommandOutcome run_command(const RunConfig& cfg);

}  // namespace cuspext
