#include "critkit/nda.hpp"

#include <cstddef>
#include <utility>

#include "critkit/errors.hpp"

namespace critkit {

LinearOperator transport_loss_action(const TransportOperators& ops,
                                     const SlabMesh& mesh,
                                     const XsLibrary& lib,
                                     const AngularQuadrature& quad) {
  const SparseMatrix full = ops.streaming_collision.full();
  const SparseMatrix reflective = ops.reflective;
  return [full, reflective, mesh, lib, quad](const DenseVector& psi) {
    DenseVector out = spmv(full, psi);
    if (reflective.nnz() > 0) {
      spmv_add(reflective, psi, 1.0, out);
    }
    const DenseVector phi =
        scalar_flux(psi, quad, lib.n_groups(), mesh.n_cells());
    axpy(-1.0, transport_scatter_source(phi, mesh, lib, quad), out);
    return out;
  };
}

LinearOperator transport_production_action(const SlabMesh& mesh,
                                           const XsLibrary& lib,
                                           const AngularQuadrature& quad) {
  return [mesh, lib, quad](const DenseVector& psi) {
    const DenseVector phi =
        scalar_flux(psi, quad, lib.n_groups(), mesh.n_cells());
    return transport_fission_source(phi, mesh, lib, quad);
  };
}

TransportSolution solve_transport_fixed_source(
    const DenseVector& phi, double k, const SlabMesh& mesh,
    const XsLibrary& lib, const AngularQuadrature& quad,
    const TransportOperators& ops, const Preconditioner& precond,
    const GmresOptions& options, const DenseVector& psi0) {
  if (!(k > 0.0)) {
    throw InvalidInputError(
        "solve_transport_fixed_source: multiplication factor must be "
        "positive");
  }
  DenseVector rhs = transport_scatter_source(phi, mesh, lib, quad);
  axpy(1.0 / k, transport_fission_source(phi, mesh, lib, quad), rhs);

  const SparseMatrix& full = ops.streaming_collision.full();
  const SparseMatrix& reflective = ops.reflective;
  const LinearOperator apply = [&full, &reflective](const DenseVector& x) {
    DenseVector y = spmv(full, x);
    if (reflective.nnz() > 0) {
      spmv_add(reflective, x, 1.0, y);
    }
    return y;
  };
  GmresResult sol = gmres(apply, rhs, options, precond.make_action(), psi0);
  if (!sol.report.converged) {
    throw SolverFailure(
        "solve_transport_fixed_source: GMRES did not reach the requested "
        "tolerance",
        sol.report);
  }
  return TransportSolution{std::move(sol.x), std::move(sol.report)};
}

namespace {

[[noreturn]] void throw_degenerate_flux() {
  throw DegenerateProblemError(
      "compute_closure: the scalar flux vanishes where a closure denominator "
      "needs it");
}

/// Per-cell drift diagnostic from the stabilized weak form: angular moments
/// of the residual between the transport current and Fick's law, normalized
/// by the scalar flux.
void fill_weak_form_diagnostic(ClosureCoefficients& closure,
                               const DenseVector& psi,
                               const DenseVector& phi_ho, const SlabMesh& mesh,
                               const XsLibrary& lib,
                               const AngularQuadrature& quad) {
  const std::size_t n = mesh.n_cells();
  const std::size_t groups = lib.n_groups();
  const std::size_t nd = quad.size();
  closure.dtilde.assign(groups * n, 0.0);

  std::vector<double> centers(n);
  double x = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    centers[c] = x + 0.5 * mesh.widths[c];
    x += mesh.widths[c];
  }
  const auto gradient = [&](auto value_at, std::size_t c) {
    if (n == 1) {
      return 0.0;
    }
    const std::size_t lo = (c == 0) ? c : c - 1;
    const std::size_t hi = (c + 1 == n) ? c : c + 1;
    return (value_at(hi) - value_at(lo)) / (centers[hi] - centers[lo]);
  };

  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t c = 0; c < n; ++c) {
      const CrossSections& xs = lib.material(mesh.material[c]);
      const double tau = tau_stabilization(xs.sigma_t[g], mesh.widths[c]);
      double numerator = 0.0;
      for (std::size_t dir = 0; dir < nd; ++dir) {
        const double mu = quad.mu[dir];
        const double w = quad.w[dir];
        const std::size_t base = (g * nd + dir) * n;
        const double psi_c = psi[base + c];
        const double dpsi = gradient(
            [&](std::size_t cc) { return psi[base + cc]; }, c);
        double in_scatter = 0.0;
        for (std::size_t gp = 0; gp < groups; ++gp) {
          in_scatter +=
              xs.scattering_p1(gp, g) * psi[(gp * nd + dir) * n + c];
        }
        numerator += w * (tau * mu * mu * dpsi +
                          (tau * xs.sigma_t[g] - 1.0) * mu * psi_c -
                          tau * mu * in_scatter);
      }
      numerator -= xs.diffusion[g] *
                   gradient([&](std::size_t cc) { return phi_ho[g * n + cc]; },
                            c);
      const double phi_c = phi_ho[g * n + c];
      if (phi_c == 0.0) {
        throw_degenerate_flux();
      }
      closure.dtilde[g * n + c] = numerator / phi_c;
    }
  }
}

}  // namespace

ClosureCoefficients compute_closure(const DenseVector& psi,
                                    const DenseVector& phi_ho,
                                    const SlabMesh& mesh, const XsLibrary& lib,
                                    const AngularQuadrature& quad,
                                    ClosureMode mode) {
  mesh.validate(lib.n_materials());
  const std::size_t n = mesh.n_cells();
  const std::size_t groups = lib.n_groups();
  const std::size_t nd = quad.size();
  if (psi.size() != groups * nd * n) {
    throw DimensionError("compute_closure: angular flux size mismatch");
  }
  if (phi_ho.size() != groups * n) {
    throw DimensionError("compute_closure: scalar flux size mismatch");
  }

  ClosureCoefficients closure = ClosureCoefficients::zero(groups, n);
  closure.mode = mode;
  const DenseVector j_face = face_current(psi, quad, mesh, groups);

  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t f = 1; f < n; ++f) {
      const double phi_l = phi_ho[g * n + f - 1];
      const double phi_r = phi_ho[g * n + f];
      const double denom = phi_l + phi_r;
      if (denom == 0.0) {
        throw_degenerate_flux();
      }
      const double d_l = lib.material(mesh.material[f - 1]).diffusion[g];
      const double d_r = lib.material(mesh.material[f]).diffusion[g];
      const double kappa =
          face_conductance(mesh.widths[f - 1], d_l, mesh.widths[f], d_r);
      const double j = j_face[g * (n + 1) + f];
      closure.dhat_at(g, f) = -(j + kappa * (phi_r - phi_l)) / denom;
    }

    // Boundary functionals (outgoing partial current over flux, less the
    // incident-free Marshak value) and the boundary drift corrections that
    // reproduce the high-order leakage on top of the Robin baseline.
    const double phi_left = phi_ho[g * n];
    const double phi_right = phi_ho[g * n + n - 1];
    if (phi_left == 0.0 || phi_right == 0.0) {
      throw_degenerate_flux();
    }
    double out_left = 0.0;
    double out_right = 0.0;
    for (std::size_t dir = 0; dir < nd; ++dir) {
      const double mu = quad.mu[dir];
      const double w = quad.w[dir];
      if (mu < 0.0) {
        out_left += w * (-mu) * psi[(g * nd + dir) * n];
      } else {
        out_right += w * mu * psi[(g * nd + dir) * n + n - 1];
      }
    }
    closure.gamma_left[g] = out_left / phi_left - 0.25;
    closure.gamma_right[g] = out_right / phi_right - 0.25;
    if (mesh.bc_left == BoundaryCondition::vacuum) {
      const double d0 = lib.material(mesh.material[0]).diffusion[g];
      const double kappa_b = boundary_conductance(mesh.widths[0], d0);
      const double leak = -j_face[g * (n + 1)];
      closure.dhat_at(g, 0) = leak / phi_left - kappa_b;
    }
    if (mesh.bc_right == BoundaryCondition::vacuum) {
      const double dn = lib.material(mesh.material[n - 1]).diffusion[g];
      const double kappa_b = boundary_conductance(mesh.widths[n - 1], dn);
      const double leak = j_face[g * (n + 1) + n];
      closure.dhat_at(g, n) = leak / phi_right - kappa_b;
    }
  }

  if (mode == ClosureMode::saaf_functional) {
    fill_weak_form_diagnostic(closure, psi, phi_ho, mesh, lib, quad);
  }
  return closure;
}

EigenResult solve_closed_diffusion_eigen(const ClosureCoefficients& closure,
                                         const SlabMesh& mesh,
                                         const XsLibrary& lib,
                                         const JfnkOptions& eigen_options,
                                         const PreconditionerParams& precond,
                                         const DenseVector& phi0) {
  const DiffusionOperators ops =
      assemble_diffusion_operators(mesh, lib, closure);
  const MultiComponentMatrix decoupled =
      assemble_diffusion_preconditioner(mesh, lib, closure);
  const Preconditioner pc = Preconditioner::build(decoupled, precond);

  const LinearOperator apply_a = [&ops](const DenseVector& x) {
    return spmv(ops.a, x);
  };
  const LinearOperator apply_b = [&ops](const DenseVector& x) {
    return spmv(ops.b, x);
  };
  return jfnk_eigen(apply_a, apply_b, pc.make_action(), phi0, eigen_options);
}

NdaReport nda_solve(const SlabMesh& mesh, const XsLibrary& lib,
                    const AngularQuadrature& quad, const NdaParams& params) {
  mesh.validate(lib.n_materials());
  if (params.max_picard < 1) {
    throw InvalidInputError("nda_solve: max_picard must be positive");
  }
  if (!(params.tol > 0.0)) {
    throw InvalidInputError("nda_solve: tol must be positive");
  }
  const std::size_t n = mesh.n_cells();
  const std::size_t groups = lib.n_groups();

  // High-order operators and their preconditioner, built once: the
  // streaming-collision matrix does not change across Picard iterations.
  const TransportOperators transport =
      assemble_transport_operator(mesh, lib, quad);
  const Preconditioner transport_pc =
      Preconditioner::build(transport.streaming_collision, params.precond);

  NdaReport report;

  // Pre-acceleration low-order solve with the closure switched off.
  EigenResult low_order = solve_closed_diffusion_eigen(
      ClosureCoefficients::zero(groups, n), mesh, lib, params.eigen,
      params.precond, DenseVector(groups * n, 1.0));
  report.initial_newton_iterations = low_order.report.outer_iterations;
  report.initial_linear_iterations = low_order.report.linear_iterations;
  report.closure = ClosureCoefficients::zero(groups, n);

  DenseVector psi;
  for (int iteration = 1; iteration <= params.max_picard; ++iteration) {
    TransportSolution high_order = solve_transport_fixed_source(
        low_order.pair.phi, low_order.pair.k, mesh, lib, quad, transport,
        transport_pc, params.transport_linear, psi);
    psi = std::move(high_order.psi);

    const DenseVector phi_ho = scalar_flux(psi, quad, groups, n);
    ClosureCoefficients closure =
        compute_closure(psi, phi_ho, mesh, lib, quad, params.mode);

    EigenResult next = solve_closed_diffusion_eigen(
        closure, mesh, lib, params.eigen, params.precond, low_order.pair.phi);

    const DenseVector change = subtract(next.pair.phi, low_order.pair.phi);
    const double eps = norm2(change) / norm2(next.pair.phi);

    NdaIterationStats stats;
    stats.eps = eps;
    stats.transport_iterations = high_order.report.iterations;
    stats.newton_iterations = next.report.outer_iterations;
    stats.linear_iterations = next.report.linear_iterations;
    report.history.push_back(stats);
    report.picard_iterations = iteration;

    low_order = std::move(next);
    report.closure = std::move(closure);
    if (eps <= params.tol) {
      report.converged = true;
      break;
    }
  }

  report.pair = std::move(low_order.pair);
  report.psi = std::move(psi);
  return report;
}

}  // namespace critkit
