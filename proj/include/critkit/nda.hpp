#pragma once

#include <cstddef>
#include <vector>

#include "critkit/discretization.hpp"
#include "critkit/eigensolver.hpp"
#include "critkit/krylov.hpp"
#include "critkit/sgmasm.hpp"

namespace critkit {

/// Loss side of the high-order eigenproblem: streaming + collision +
/// reflective coupling minus the isotropic scattering transfer.
LinearOperator transport_loss_action(const TransportOperators& ops,
                                     const SlabMesh& mesh,
                                     const XsLibrary& lib,
                                     const AngularQuadrature& quad);

/// Production side: isotropic fission source built from the scalar flux of
/// the angular iterate.
LinearOperator transport_production_action(const SlabMesh& mesh,
                                           const XsLibrary& lib,
                                           const AngularQuadrature& quad);

struct TransportSolution {
  DenseVector psi;
  SolveReport report;
};

/// One high-order sweep of the acceleration loop: assemble the isotropic
/// scattering + fission source at (phi, k) and solve the streaming-collision
/// system with preconditioned GMRES. Throws SolverFailure when GMRES does
/// not reach rtol.
TransportSolution solve_transport_fixed_source(
    const DenseVector& phi, double k, const SlabMesh& mesh,
    const XsLibrary& lib, const AngularQuadrature& quad,
    const TransportOperators& ops, const Preconditioner& precond,
    const GmresOptions& options, const DenseVector& psi0 = DenseVector());

/// Face drift coefficients and boundary functionals that make the low-order
/// diffusion system reproduce the high-order solution at its fixed point.
/// phi_ho must be scalar_flux(psi). In saaf_functional mode the per-cell
/// weak-form drift diagnostic is evaluated as well. A vanishing scalar flux
/// where a denominator needs it raises DegenerateProblemError.
ClosureCoefficients compute_closure(const DenseVector& psi,
                                    const DenseVector& phi_ho,
                                    const SlabMesh& mesh, const XsLibrary& lib,
                                    const AngularQuadrature& quad,
                                    ClosureMode mode);

/// Low-order eigensolve with the closure folded into the face stencils:
/// assembles the closed operators, builds the group-decoupled hierarchy for
/// the Jacobian solves, and runs the Newton-Krylov eigensolver from phi0.
EigenResult solve_closed_diffusion_eigen(const ClosureCoefficients& closure,
                                         const SlabMesh& mesh,
                                         const XsLibrary& lib,
                                         const JfnkOptions& eigen_options,
                                         const PreconditionerParams& precond,
                                         const DenseVector& phi0);

struct NdaParams {
  int max_picard = 50;
  double tol = 1e-6;  // relative L2 change of the low-order flux
  ClosureMode mode = ClosureMode::drift;
  GmresOptions transport_linear{.rtol = 1e-5, .restart = 30,
                                .max_iterations = 0};
  JfnkOptions eigen;
  PreconditionerParams precond;  // shared by both solve phases
};

struct NdaIterationStats {
  double eps = 0.0;             // relative low-order flux change
  int transport_iterations = 0;
  int newton_iterations = 0;
  int linear_iterations = 0;
};

struct NdaReport {
  bool converged = false;
  int picard_iterations = 0;
  std::vector<NdaIterationStats> history;
  EigenPair pair;               // final low-order eigenpair
  DenseVector psi;              // final high-order angular flux
  ClosureCoefficients closure;  // final closure coefficients
  int initial_newton_iterations = 0;  // pre-acceleration eigensolve cost
  int initial_linear_iterations = 0;
};

/// Accelerated eigensolve: an initial closure-free diffusion eigensolve,
/// then Picard iterations of transport fixed-source solve, closure update,
/// and closed diffusion eigensolve, until the low-order flux change falls
/// below tol. The transport hierarchy is built once and reused; the
/// diffusion hierarchy is rebuilt whenever the closure changes.
NdaReport nda_solve(const SlabMesh& mesh, const XsLibrary& lib,
                    const AngularQuadrature& quad, const NdaParams& params);

}  // namespace critkit
