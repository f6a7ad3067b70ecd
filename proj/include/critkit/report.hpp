#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "critkit/config.hpp"
#include "critkit/sgmasm.hpp"
#include "critkit/sparse.hpp"

namespace critkit {

inline constexpr const char* kCritkitVersion = "0.1.0";

/// One benchmark/report line mirroring the solver-study tables.
struct MetricsRow {
  std::size_t np = 1;       // subdomain count np1 * np2
  int delta = 0;            // finest-level overlap
  double theta = 0.25;      // strength threshold
  int agg = 0;              // aggressive-coarsening levels
  std::size_t mem_bytes = 0;
  int its_newton = 0;       // Newton (outer) iterations
  int its_linear = 0;       // diffusion Krylov iterations
  int its_sweep = 0;        // transport Krylov iterations
  double comp = 1.0;        // operator complexity of the hierarchy
  std::size_t setup_nnz = 0;  // strength edges examined during setup
  std::size_t apply_count = 0;  // preconditioner applications (not in CSV)
  double time_setup = 0.0;  // seconds
  double time_apply = 0.0;
  double time_total = 0.0;
};

/// Header plus one line per row; columns exactly
/// np,delta,theta,agg,mem_bytes,its_newton,its_linear,its_sweep,comp,
/// setup_nnz,time_setup,time_apply,time_total.
void write_metrics_csv(const std::vector<MetricsRow>& rows, std::ostream& out);

/// Bytes held by the given hierarchies plus `vector_doubles` stored solution
/// values (8 bytes each).
std::size_t estimate_run_memory(
    const std::vector<const MultilevelHierarchy*>& hierarchies,
    std::size_t vector_doubles);

/// Solution table `cell,group,phi` for a group-major flux vector, printed
/// with round-trip-exact precision so reruns are bit-identical.
void write_solution_csv(const DenseVector& phi, std::size_t n_groups,
                        std::size_t n_cells, std::ostream& out);

/// Reproducibility manifest: artifact version, run mode, seed, and an echo
/// of the effective configuration (itself a loadable config file).
void write_manifest(const RunConfig& config, const std::string& mode,
                    std::ostream& out);

}  // namespace critkit
