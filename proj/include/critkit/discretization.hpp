#pragma once

#include <cstddef>
#include <vector>

#include "critkit/cross_sections.hpp"
#include "critkit/multicomponent.hpp"
#include "critkit/slab.hpp"
#include "critkit/sparse.hpp"

namespace critkit {

/// Upwind-stabilization time constant for a cell: 1/(c * sigma_t) in the
/// thick regime (c * h * sigma_t >= zeta), h / zeta in the thin regime.
double tau_stabilization(double sigma_t, double h, double c = 1.0,
                         double zeta = 0.5);

/// Two-point face coupling 1 / (h_L/(2 D_L) + h_R/(2 D_R)); the face flux is
/// -kappa (phi_R - phi_L).
double face_conductance(double h_left, double d_left, double h_right,
                        double d_right);

/// Vacuum-boundary coupling 1 / (h/(2D) + 4) from eliminating the face flux
/// of the Robin condition phi/4 + D grad(phi) . n = 0; the boundary leakage
/// is kappa_b * phi_cell.
double boundary_conductance(double h, double d);

enum class ClosureMode { drift, saaf_functional };

/// Face/boundary coefficients that close the low-order diffusion system
/// around a high-order angular solution. `dhat` holds one drift coefficient
/// per face per group (faces 0..n_cells, boundaries included); the closed
/// face flux is -kappa_f (phi_R - phi_L) - dhat_f (phi_L + phi_R), which at
/// a boundary degenerates to a leakage correction dhat_b * phi_cell on top
/// of the baseline Robin coefficient. `gamma_*` is the reported boundary
/// functional (outgoing partial current over flux minus 1/4). `dtilde` is a
/// per-cell diagnostic filled only in saaf_functional mode.
struct ClosureCoefficients {
  ClosureMode mode = ClosureMode::drift;
  std::size_t n_groups = 0;
  std::size_t n_cells = 0;
  std::vector<double> dhat;        // size n_groups * (n_cells + 1)
  std::vector<double> gamma_left;  // size n_groups
  std::vector<double> gamma_right; // size n_groups
  std::vector<double> dtilde;      // size n_groups * n_cells or empty

  static ClosureCoefficients zero(std::size_t n_groups, std::size_t n_cells);

  double dhat_at(std::size_t g, std::size_t face) const {
    return dhat[g * (n_cells + 1) + face];
  }
  double& dhat_at(std::size_t g, std::size_t face) {
    return dhat[g * (n_cells + 1) + face];
  }
};

/// Generalized eigenproblem pair for the multigroup diffusion system,
/// unknowns ordered group-major (row = g * n_cells + c):
///   a: face leakage (harmonic-mean D two-point flux, Robin vacuum
///      boundaries, closure drift terms) + removal - inter-group scattering
///   b: fission production chi_g * nu_sigma_f_g'
struct DiffusionOperators {
  SparseMatrix a;
  SparseMatrix b;
};

DiffusionOperators assemble_diffusion_operators(const SlabMesh& mesh,
                                                const XsLibrary& lib);
DiffusionOperators assemble_diffusion_operators(
    const SlabMesh& mesh, const XsLibrary& lib,
    const ClosureCoefficients& closure);

/// Per-group preconditioning blocks of the diffusion system: leakage +
/// removal + closure drift, with no inter-group scattering and no fission.
MultiComponentMatrix assemble_diffusion_preconditioner(
    const SlabMesh& mesh, const XsLibrary& lib,
    const ClosureCoefficients& closure);

/// First-order upwind discrete-ordinates transport, one component per
/// (group, direction) pair ordered component = g * n_directions + n,
/// unknowns component-major (row = component * n_cells + c).
///   streaming_collision: block-diagonal |mu| (upwind difference) + sigma_t h
///   reflective: boundary coupling between mirrored directions; the full
///               operator action is streaming_collision + reflective, while
///               preconditioning uses streaming_collision alone.
struct TransportOperators {
  MultiComponentMatrix streaming_collision;
  SparseMatrix reflective;
};

TransportOperators assemble_transport_operator(const SlabMesh& mesh,
                                               const XsLibrary& lib,
                                               const AngularQuadrature& quad);

/// Zeroth angular moment per (group, cell): sum_n w_n psi_{g,n,c}.
DenseVector scalar_flux(const DenseVector& psi, const AngularQuadrature& quad,
                        std::size_t n_groups, std::size_t n_cells);

/// First angular moment (net current) per (group, cell).
DenseVector cell_current(const DenseVector& psi, const AngularQuadrature& quad,
                         std::size_t n_groups, std::size_t n_cells);

/// Net current through each face (0..n_cells) per group using upwind face
/// values; boundary inflow follows the mesh boundary conditions.
DenseVector face_current(const DenseVector& psi, const AngularQuadrature& quad,
                         const SlabMesh& mesh, std::size_t n_groups);

/// Isotropic scattering source rows h_c * (1/2) * sum_g' sigma_s(g'->g)
/// phi_g'(c), identical across directions of a group.
DenseVector transport_scatter_source(const DenseVector& phi,
                                     const SlabMesh& mesh,
                                     const XsLibrary& lib,
                                     const AngularQuadrature& quad);

/// Isotropic fission source rows h_c * (1/2) * chi_g * sum_g' nu_sigma_f_g'
/// phi_g'(c).
DenseVector transport_fission_source(const DenseVector& phi,
                                     const SlabMesh& mesh,
                                     const XsLibrary& lib,
                                     const AngularQuadrature& quad);

}  // namespace critkit
