#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "critkit/discretization.hpp"
#include "critkit/sgmasm.hpp"
#include "critkit/slab.hpp"

namespace critkit {

/// One material region of the slab: `cells` equal-width cells spanning
/// `width`.
struct RegionSpec {
  std::string material;
  std::size_t cells = 0;
  double width = 0.0;
};

/// Parsed run configuration. The file format is flat `key = value` pairs
/// under bracketed section headers, with `#` comments:
///
///   [problem]
///   xs         = library.xs      # path, relative to the config file
///   materials  = fuel,water      # one region per entry
///   cells      = 16,8            # cells per region
///   widths     = 8.0,4.0         # region widths (cm)
///   bc_left    = vacuum          # vacuum | reflective
///   bc_right   = vacuum
///   quadrature = 8               # number of discrete directions
///   groups     = 2               # optional; checked against the library
///
///   [solver]                     # every key optional
///   preconditioner = sgmasm      # sgmasm | masm | ras | none
///   theta = 0.25    delta = 1    agg = 0      max_levels = 25
///   min_coarse = 50 sweeps = 1   omega = 1.0  exact_subdomains = false
///   np1 = 1         np2 = 1      component_index = 0
///   restart = 30    rtol_transport = 1e-5     rtol_linear_diffusion = 1e-2
///   newton_tol = 1e-3            max_newton = 50
///   nda_tol = 1e-6  max_nda = 50 closure_mode = drift
///   seed = 0
struct RunConfig {
  // [problem]
  std::string xs_path;
  std::vector<RegionSpec> regions;
  BoundaryCondition bc_left = BoundaryCondition::vacuum;
  BoundaryCondition bc_right = BoundaryCondition::vacuum;
  std::size_t quadrature = 8;
  std::size_t groups = 0;  // 0: take the library's count

  // [solver]
  PreconditionerKind preconditioner = PreconditionerKind::sgmasm;
  double theta = 0.25;
  int delta = 1;
  int agg = 0;
  int max_levels = 25;
  std::size_t min_coarse = 50;
  int sweeps = 1;
  double omega = 1.0;
  bool exact_subdomains = false;
  std::size_t np1 = 1;
  std::size_t np2 = 1;
  std::size_t component_index = 0;
  int restart = 30;
  double rtol_transport = 1e-5;
  double rtol_linear_diffusion = 1e-2;
  double newton_tol = 1e-3;
  int max_newton = 50;
  double nda_tol = 1e-6;
  int max_nda = 50;
  ClosureMode closure_mode = ClosureMode::drift;
  unsigned long seed = 0;

  /// Path of the config file itself (set by load; used to resolve xs_path).
  std::string source_path;

  /// Mesh described by the region list, with material names resolved
  /// against the library.
  SlabMesh build_mesh(const XsLibrary& lib) const;

  /// xs_path resolved against the config file's directory.
  std::string resolved_xs_path() const;

  PreconditionerParams preconditioner_params() const;

  static RunConfig parse(std::istream& in);
  static RunConfig load(const std::string& path);
};

}  // namespace critkit
