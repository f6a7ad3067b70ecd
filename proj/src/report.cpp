#include "critkit/report.hpp"

#include <cstdio>
#include <ostream>
#include <string>

namespace critkit {

namespace {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

const char* bc_name(BoundaryCondition bc) {
  return bc == BoundaryCondition::vacuum ? "vacuum" : "reflective";
}

const char* closure_name(ClosureMode mode) {
  return mode == ClosureMode::drift ? "drift" : "saaf_functional";
}

const char* preconditioner_name(PreconditionerKind kind) {
  switch (kind) {
    case PreconditionerKind::sgmasm:
      return "sgmasm";
    case PreconditionerKind::masm:
      return "masm";
    case PreconditionerKind::ras:
      return "ras";
    case PreconditionerKind::none:
      return "none";
  }
  return "none";
}

}  // namespace

void write_metrics_csv(const std::vector<MetricsRow>& rows,
                       std::ostream& out) {
  out << "np,delta,theta,agg,mem_bytes,its_newton,its_linear,its_sweep,"
         "comp,setup_nnz,time_setup,time_apply,time_total\n";
  for (const MetricsRow& row : rows) {
    out << row.np << ',' << row.delta << ',' << format_double(row.theta)
        << ',' << row.agg << ',' << row.mem_bytes << ',' << row.its_newton
        << ',' << row.its_linear << ',' << row.its_sweep << ','
        << format_double(row.comp) << ',' << row.setup_nnz << ','
        << format_double(row.time_setup) << ','
        << format_double(row.time_apply) << ','
        << format_double(row.time_total) << '\n';
  }
}

std::size_t estimate_run_memory(
    const std::vector<const MultilevelHierarchy*>& hierarchies,
    std::size_t vector_doubles) {
  std::size_t bytes = vector_doubles * sizeof(double);
  for (const MultilevelHierarchy* hierarchy : hierarchies) {
    if (hierarchy != nullptr) bytes += estimate_memory(*hierarchy);
  }
  return bytes;
}

void write_solution_csv(const DenseVector& phi, std::size_t n_groups,
                        std::size_t n_cells, std::ostream& out) {
  out << "cell,group,phi\n";
  for (std::size_t c = 0; c < n_cells; ++c) {
    for (std::size_t g = 0; g < n_groups; ++g) {
      out << c << ',' << g << ','
          << format_double(phi[g * n_cells + c]) << '\n';
    }
  }
}

void write_manifest(const RunConfig& config, const std::string& mode,
                    std::ostream& out) {
  // The preamble lines are comments so the echo below remains a loadable
  // configuration file.
  out << "# critkit run manifest\n";
  out << "# version = " << kCritkitVersion << '\n';
  out << "# mode = " << mode << '\n';
  out << "# seed = " << config.seed << '\n';
  out << '\n';
  out << "[problem]\n";
  out << "xs = " << config.resolved_xs_path() << '\n';
  std::string materials;
  std::string cells;
  std::string widths;
  for (std::size_t i = 0; i < config.regions.size(); ++i) {
    if (i > 0) {
      materials += ',';
      cells += ',';
      widths += ',';
    }
    materials += config.regions[i].material;
    cells += std::to_string(config.regions[i].cells);
    widths += format_double(config.regions[i].width);
  }
  out << "materials = " << materials << '\n';
  out << "cells = " << cells << '\n';
  out << "widths = " << widths << '\n';
  out << "bc_left = " << bc_name(config.bc_left) << '\n';
  out << "bc_right = " << bc_name(config.bc_right) << '\n';
  out << "quadrature = " << config.quadrature << '\n';
  if (config.groups > 0) out << "groups = " << config.groups << '\n';
  out << '\n';
  out << "[solver]\n";
  out << "preconditioner = " << preconditioner_name(config.preconditioner)
      << '\n';
  out << "theta = " << format_double(config.theta) << '\n';
  out << "delta = " << config.delta << '\n';
  out << "agg = " << config.agg << '\n';
  out << "max_levels = " << config.max_levels << '\n';
  out << "min_coarse = " << config.min_coarse << '\n';
  out << "sweeps = " << config.sweeps << '\n';
  out << "omega = " << format_double(config.omega) << '\n';
  out << "exact_subdomains = "
      << (config.exact_subdomains ? "true" : "false") << '\n';
  out << "np1 = " << config.np1 << '\n';
  out << "np2 = " << config.np2 << '\n';
  out << "component_index = " << config.component_index << '\n';
  out << "restart = " << config.restart << '\n';
  out << "rtol_transport = " << format_double(config.rtol_transport) << '\n';
  out << "rtol_linear_diffusion = "
      << format_double(config.rtol_linear_diffusion) << '\n';
  out << "newton_tol = " << format_double(config.newton_tol) << '\n';
  out << "max_newton = " << config.max_newton << '\n';
  out << "nda_tol = " << format_double(config.nda_tol) << '\n';
  out << "max_nda = " << config.max_nda << '\n';
  out << "closure_mode = " << closure_name(config.closure_mode) << '\n';
  out << "seed = " << config.seed << '\n';
}

}  // namespace critkit
