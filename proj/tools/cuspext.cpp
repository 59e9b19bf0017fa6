#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cuspext/app.hpp"
#include "cuspext/errors.hpp"

int main(int argc, char** argv) {
  using namespace cuspext;
  CLI::App cli{"Cuspidal domain extension toolkit"};
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string command;
  cli.add_option("--config", config_path, "JSON run configuration")->required();
  cli.add_option("--out", out_dir, "output directory (overrides the config)");
  cli.add_option("--seed", seed, "random seed (overrides the config)");
  cli.add_option("--command", command, "lipschitzify | transform-verify | extend-verify | admissibility-sweep");
  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    std::optional<double> env_tol;
    if (const char* text = std::getenv(kToleranceEnv)) env_tol = parse_tolerance(text);
    RunConfig cfg = load_run_config(config_path, env_tol);
    if (!command.empty()) cfg.command = command;
    if (!out_dir.empty()) cfg.out = out_dir;
    if (seed) {
      cfg.seed = *seed;
      cfg.quadrature.seed = *seed;
    }
    const CommandOutcome outcome = run_command(cfg);
    for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& f : outcome.failures) std::cerr << "check failed: " << f << '\n';
    for (const auto& f : outcome.files) std::cout << f.string() << '\n';
    std::cout << (outcome.exit_code == kExitOk ? "status: pass" : "status: fail") << '\n';
    return outcome.exit_code;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
