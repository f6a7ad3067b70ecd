#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "critkit/config.hpp"
#include "critkit/errors.hpp"
#include "critkit/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

void print_summary(const critkit::RunResult& result) {
  std::cout << "mode=" << critkit::run_mode_name(result.mode)
            << " converged=" << (result.converged ? "true" : "false");
  if (result.mode != critkit::RunMode::bench) {
    char k_text[64];
    std::snprintf(k_text, sizeof(k_text), "%.12g", result.k);
    std::cout << " k=" << k_text;
  }
  std::cout << " its_newton=" << result.metrics.its_newton
            << " its_linear=" << result.metrics.its_linear
            << " its_sweep=" << result.metrics.its_sweep << '\n';
}

/// Metrics known before the solve ran, so a failed run still leaves a row.
critkit::RunResult partial_result(const critkit::RunConfig& config,
                                  critkit::RunMode mode) {
  critkit::RunResult result;
  result.mode = mode;
  result.metrics.np = config.np1 * config.np2;
  result.metrics.delta = config.delta;
  result.metrics.theta = config.theta;
  result.metrics.agg = config.agg;
  return result;
}

int run_solve(const std::string& config_path, const std::string& mode_text,
              const std::string& out_dir) {
  critkit::RunConfig config;
  critkit::RunMode mode = critkit::RunMode::nda;
  try {
    config = critkit::RunConfig::load(config_path);
    mode = critkit::parse_run_mode(mode_text);
  } catch (const critkit::Error& error) {
    std::cerr << "critkit: " << error.what() << '\n';
    return kExitConfig;
  }

  critkit::RunResult result;
  try {
    result = critkit::execute_run(config, mode);
  } catch (const critkit::ConfigError& error) {
    std::cerr << "critkit: " << error.what() << '\n';
    return kExitConfig;
  } catch (const critkit::IoError& error) {
    std::cerr << "critkit: " << error.what() << '\n';
    return kExitConfig;
  } catch (const critkit::Error& error) {
    std::cerr << "critkit: solver failure: " << error.what() << '\n';
    if (!out_dir.empty()) {
      try {
        critkit::write_run_outputs(partial_result(config, mode), config,
                                   out_dir);
      } catch (const std::exception& io_error) {
        std::cerr << "critkit: " << io_error.what() << '\n';
      }
    }
    return kExitSolver;
  }

  if (!out_dir.empty()) {
    try {
      critkit::write_run_outputs(result, config, out_dir);
    } catch (const critkit::Error& error) {
      std::cerr << "critkit: " << error.what() << '\n';
      return kExitConfig;
    }
  }
  print_summary(result);
  if (!result.converged) {
    std::cerr << "critkit: solver failure: run did not converge\n";
    return kExitSolver;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"critkit: multigroup slab criticality solver"};
  app.require_subcommand(1);

  auto* solve =
      app.add_subcommand("solve", "run one solve described by a config file");
  std::string config_path;
  std::string mode_text = "nda";
  std::string out_dir;
  solve->add_option("--config", config_path, "path to the run configuration")
      ->required();
  solve->add_option(
      "--mode", mode_text,
      "nda | transport-eigen | diffusion-eigen | bench (default nda)");
  solve->add_option(
      "--out", out_dir,
      "directory for solution.csv, metrics.csv, and manifest.txt");

  CLI11_PARSE(app, argc, argv);

  try {
    return run_solve(config_path, mode_text, out_dir);
  } catch (const std::exception& error) {
    std::cerr << "critkit: unexpected error: " << error.what() << '\n';
    return kExitSolver;
  }
}
