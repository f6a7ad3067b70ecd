#pragma once

#include <cstddef>
#include <string>

#include "critkit/config.hpp"
#include "critkit/report.hpp"
#include "critkit/sparse.hpp"

namespace critkit {

enum class RunMode { nda, transport_eigen, diffusion_eigen, bench };

/// Maps "nda" | "transport-eigen" | "diffusion-eigen" | "bench"; throws
/// ConfigError for anything else.
RunMode parse_run_mode(const std::string& text);
std::string run_mode_name(RunMode mode);

struct RunResult {
  RunMode mode = RunMode::nda;
  bool converged = false;
  double k = 0.0;  // stays 0 for the fixed-source benchmark
  std::size_t n_groups = 0;
  std::size_t n_cells = 0;
  DenseVector phi;  // group-major scalar flux
  MetricsRow metrics;
};

/// Runs one solve described by the config:
///   nda              accelerated eigensolve (low-order flux reported)
///   transport-eigen  Newton-Krylov on the angular eigenproblem
///   diffusion-eigen  Newton-Krylov on the closure-free diffusion problem
///   bench            preconditioned GMRES transport solve, unit source
RunResult execute_run(const RunConfig& config, RunMode mode);

/// Writes solution.csv, metrics.csv, and manifest.txt into out_dir
/// (created if missing).
void write_run_outputs(const RunResult& result, const RunConfig& config,
                       const std::string& out_dir);

}  // namespace critkit
