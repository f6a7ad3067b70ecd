#include "critkit/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <utility>

#include "critkit/discretization.hpp"
#include "critkit/errors.hpp"
#include "critkit/nda.hpp"

namespace critkit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

GmresOptions transport_options(const RunConfig& config) {
  return GmresOptions{.rtol = config.rtol_transport,
                      .restart = config.restart,
                      .max_iterations = 0};
}

JfnkOptions eigen_options(const RunConfig& config, double linear_rtol) {
  JfnkOptions options;
  options.newton_tol = config.newton_tol;
  options.max_newton = config.max_newton;
  options.linear = GmresOptions{.rtol = linear_rtol,
                                .restart = config.restart,
                                .max_iterations = 0};
  return options;
}

void fill_preconditioner_metrics(MetricsRow& row, const Preconditioner& pc,
                                 std::size_t vector_doubles) {
  row.comp = pc.complexity();
  row.setup_nnz = pc.setup_nnz();
  row.mem_bytes = pc.memory_bytes() + vector_doubles * sizeof(double);
}

RunResult run_nda(const RunConfig& config, const XsLibrary& lib,
                  const SlabMesh& mesh, const AngularQuadrature& quad) {
  RunResult result;
  MetricsRow& row = result.metrics;
  const auto total_start = Clock::now();

  NdaParams params;
  params.max_picard = config.max_nda;
  params.tol = config.nda_tol;
  params.mode = config.closure_mode;
  params.transport_linear = transport_options(config);
  params.eigen = eigen_options(config, config.rtol_linear_diffusion);
  params.precond = config.preconditioner_params();

  // Duplicate of the setup the solver performs internally, timed and kept
  // for the memory/complexity columns.
  const auto setup_start = Clock::now();
  const TransportOperators ops = assemble_transport_operator(mesh, lib, quad);
  const Preconditioner pc =
      Preconditioner::build(ops.streaming_collision, params.precond);
  row.time_setup = seconds_since(setup_start);

  const auto apply_start = Clock::now();
  NdaReport report = nda_solve(mesh, lib, quad, params);
  row.time_apply = seconds_since(apply_start);

  row.its_newton = report.initial_newton_iterations;
  row.its_linear = report.initial_linear_iterations;
  for (const NdaIterationStats& it : report.history) {
    row.its_newton += it.newton_iterations;
    row.its_linear += it.linear_iterations;
    row.its_sweep += it.transport_iterations;
  }
  row.apply_count = static_cast<std::size_t>(row.its_linear + row.its_sweep);
  fill_preconditioner_metrics(
      row, pc, report.pair.phi.size() + report.psi.size());

  result.converged = report.converged;
  result.k = report.pair.k;
  result.phi = std::move(report.pair.phi);
  row.time_total = seconds_since(total_start);
  return result;
}

RunResult run_transport_eigen(const RunConfig& config, const XsLibrary& lib,
                              const SlabMesh& mesh,
                              const AngularQuadrature& quad) {
  RunResult result;
  MetricsRow& row = result.metrics;
  const auto total_start = Clock::now();

  const auto setup_start = Clock::now();
  const TransportOperators ops = assemble_transport_operator(mesh, lib, quad);
  const Preconditioner pc = Preconditioner::build(
      ops.streaming_collision, config.preconditioner_params());
  row.time_setup = seconds_since(setup_start);

  JfnkOptions options = eigen_options(config, config.rtol_transport);
  const DenseVector psi0(
      lib.n_groups() * quad.size() * mesh.n_cells(), 1.0);

  const auto apply_start = Clock::now();
  EigenResult res =
      jfnk_eigen(transport_loss_action(ops, mesh, lib, quad),
                 transport_production_action(mesh, lib, quad),
                 pc.make_action(), psi0, options);
  row.time_apply = seconds_since(apply_start);

  row.its_newton = res.report.outer_iterations;
  row.its_sweep = res.report.linear_iterations;
  row.apply_count = static_cast<std::size_t>(row.its_sweep);
  fill_preconditioner_metrics(row, pc, res.pair.phi.size());

  result.converged = res.report.converged;
  result.k = res.pair.k;
  result.phi =
      scalar_flux(res.pair.phi, quad, lib.n_groups(), mesh.n_cells());
  row.time_total = seconds_since(total_start);
  return result;
}

RunResult run_diffusion_eigen(const RunConfig& config, const XsLibrary& lib,
                              const SlabMesh& mesh) {
  RunResult result;
  MetricsRow& row = result.metrics;
  const auto total_start = Clock::now();

  const PreconditionerParams pp = config.preconditioner_params();
  const ClosureCoefficients closure =
      ClosureCoefficients::zero(lib.n_groups(), mesh.n_cells());

  const auto setup_start = Clock::now();
  const Preconditioner pc = Preconditioner::build(
      assemble_diffusion_preconditioner(mesh, lib, closure), pp);
  row.time_setup = seconds_since(setup_start);

  const JfnkOptions options =
      eigen_options(config, config.rtol_linear_diffusion);
  const DenseVector phi0(lib.n_groups() * mesh.n_cells(), 1.0);

  const auto apply_start = Clock::now();
  EigenResult res =
      solve_closed_diffusion_eigen(closure, mesh, lib, options, pp, phi0);
  row.time_apply = seconds_since(apply_start);

  row.its_newton = res.report.outer_iterations;
  row.its_linear = res.report.linear_iterations;
  row.apply_count = static_cast<std::size_t>(row.its_linear);
  fill_preconditioner_metrics(row, pc, res.pair.phi.size());

  result.converged = res.report.converged;
  result.k = res.pair.k;
  result.phi = std::move(res.pair.phi);
  row.time_total = seconds_since(total_start);
  return result;
}

RunResult run_bench(const RunConfig& config, const XsLibrary& lib,
                    const SlabMesh& mesh, const AngularQuadrature& quad) {
  RunResult result;
  MetricsRow& row = result.metrics;
  const auto total_start = Clock::now();

  const auto setup_start = Clock::now();
  const TransportOperators ops = assemble_transport_operator(mesh, lib, quad);
  const Preconditioner pc = Preconditioner::build(
      ops.streaming_collision, config.preconditioner_params());
  row.time_setup = seconds_since(setup_start);

  const std::size_t n = mesh.n_cells();
  const std::size_t n_groups = lib.n_groups();
  const std::size_t n_dirs = quad.size();
  DenseVector rhs(n_groups * n_dirs * n);
  for (std::size_t g = 0; g < n_groups; ++g) {
    for (std::size_t dir = 0; dir < n_dirs; ++dir) {
      const std::size_t base = (g * n_dirs + dir) * n;
      for (std::size_t c = 0; c < n; ++c) {
        rhs[base + c] = 0.5 * mesh.widths[c];
      }
    }
  }

  const SparseMatrix& full = ops.streaming_collision.full();
  const SparseMatrix& reflective = ops.reflective;
  const LinearOperator apply = [&full, &reflective](const DenseVector& x) {
    DenseVector y = spmv(full, x);
    if (reflective.nnz() > 0) {
      spmv_add(reflective, x, 1.0, y);
    }
    return y;
  };

  std::size_t applications = 0;
  LinearOperator precondition;
  if (pc.kind() != PreconditionerKind::none) {
    precondition = [&pc, &applications](const DenseVector& r) {
      ++applications;
      return pc.apply(r);
    };
  }

  const auto apply_start = Clock::now();
  GmresResult sol =
      gmres(apply, rhs, transport_options(config), precondition);
  row.time_apply = seconds_since(apply_start);

  row.its_sweep = sol.report.iterations;
  row.apply_count = applications;
  fill_preconditioner_metrics(row, pc, sol.x.size());

  result.converged = sol.report.converged;
  result.phi = scalar_flux(sol.x, quad, n_groups, n);
  row.time_total = seconds_since(total_start);
  return result;
}

}  // namespace

RunMode parse_run_mode(const std::string& text) {
  if (text == "nda") return RunMode::nda;
  if (text == "transport-eigen") return RunMode::transport_eigen;
  if (text == "diffusion-eigen") return RunMode::diffusion_eigen;
  if (text == "bench") return RunMode::bench;
  throw ConfigError("unknown run mode '" + text +
                    "' (expected nda, transport-eigen, diffusion-eigen, or "
                    "bench)");
}

std::string run_mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::nda:
      return "nda";
    case RunMode::transport_eigen:
      return "transport-eigen";
    case RunMode::diffusion_eigen:
      return "diffusion-eigen";
    case RunMode::bench:
      return "bench";
  }
  return "nda";
}

RunResult execute_run(const RunConfig& config, RunMode mode) {
  const XsLibrary lib = XsLibrary::load(config.resolved_xs_path());
  if (config.groups != 0 && config.groups != lib.n_groups()) {
    throw ConfigError("config expects " + std::to_string(config.groups) +
                      " groups but the library has " +
                      std::to_string(lib.n_groups()));
  }
  const SlabMesh mesh = config.build_mesh(lib);
  const AngularQuadrature quad =
      AngularQuadrature::gauss_legendre(config.quadrature);

  RunResult result;
  switch (mode) {
    case RunMode::nda:
      result = run_nda(config, lib, mesh, quad);
      break;
    case RunMode::transport_eigen:
      result = run_transport_eigen(config, lib, mesh, quad);
      break;
    case RunMode::diffusion_eigen:
      result = run_diffusion_eigen(config, lib, mesh);
      break;
    case RunMode::bench:
      result = run_bench(config, lib, mesh, quad);
      break;
  }
  result.mode = mode;
  result.n_groups = lib.n_groups();
  result.n_cells = mesh.n_cells();
  result.metrics.np = config.np1 * config.np2;
  result.metrics.delta = config.delta;
  result.metrics.theta = config.theta;
  result.metrics.agg = config.agg;
  return result;
}

void write_run_outputs(const RunResult& result, const RunConfig& config,
                       const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + out_dir +
                  "': " + ec.message());
  }
  const auto open = [&](const char* name) {
    std::ofstream out(fs::path(out_dir) / name);
    if (!out) {
      throw IoError(std::string("cannot write '") + name + "' in '" +
                    out_dir + "'");
    }
    return out;
  };
  {
    std::ofstream out = open("solution.csv");
    write_solution_csv(result.phi, result.n_groups, result.n_cells, out);
  }
  {
    std::ofstream out = open("metrics.csv");
    write_metrics_csv({result.metrics}, out);
  }
  {
    // The manifest lives in out_dir, not next to the source config, so the
    // echoed library path must stay valid from there: make it absolute.
    RunConfig echo = config;
    echo.xs_path =
        fs::absolute(config.resolved_xs_path()).lexically_normal().string();
    std::ofstream out = open("manifest.txt");
    write_manifest(echo, run_mode_name(result.mode), out);
  }
}

}  // namespace critkit
