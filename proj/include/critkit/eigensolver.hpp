#pragma once

#include <vector>

#include "critkit/errors.hpp"
#include "critkit/krylov.hpp"
#include "critkit/sparse.hpp"

namespace critkit {

/// Fundamental-mode pair of the generalized problem A phi = (1/k) B phi.
/// phi is the solver iterate with ||B phi|| = k, sign-fixed so its first
/// nonzero entry is positive.
struct EigenPair {
  DenseVector phi;
  double k = 0.0;
};

struct EigenReport {
  bool converged = false;
  int outer_iterations = 0;
  int linear_iterations = 0;
  /// Per outer iteration: relative eigenvalue change (power iteration) or
  /// ||F_n|| / ||F_0|| (Newton).
  std::vector<double> residual_history;
};

struct EigenResult {
  EigenPair pair;
  EigenReport report;
};

/// Thrown when the Newton line search cannot make progress; carries the best
/// iterate reached so far.
class StagnationError : public Error {
 public:
  StagnationError(const std::string& what_arg, EigenPair best)
      : Error(what_arg), best_(std::move(best)) {}

  const EigenPair& best() const { return best_; }

 private:
  EigenPair best_;
};

/// Nonlinear eigenvalue residual F(phi) = A phi - B phi / ||B phi||.
DenseVector newton_residual(const LinearOperator& apply_a,
                            const LinearOperator& apply_b,
                            const DenseVector& phi);

/// Inverse power iteration: solve A phi_{n+1} = B phi_n / k_n with
/// k = ||B phi||, stopping when the relative eigenvalue change falls below
/// tol. `solve_a` returns the solution of A x = rhs.
EigenResult inverse_power(const LinearOperator& solve_a,
                          const LinearOperator& apply_b,
                          const DenseVector& phi0, int max_iterations,
                          double tol);

struct JfnkOptions {
  int init_power_iterations = 2;
  double newton_tol = 1e-3;
  int max_newton = 50;
  GmresOptions linear{.rtol = 1e-2, .restart = 30, .max_iterations = 0};
  double armijo = 1e-4;
  int max_backtracks = 8;
  /// Absolute floor on ||F||: the production term inside F is normalized to
  /// unit length, so falling below this means the residual is negligible on
  /// that scale. Rescues starts that are already converged, where the
  /// relative test against ||F(phi_0)|| can never be met.
  double absolute_tol = 1e-12;
};

/// Jacobian-free Newton-Krylov eigensolver. Starts from a few inverse power
/// iterations, then Newton steps on F with a finite-difference Jacobian
/// action (perturbation sqrt(machine eps) * sqrt(1 + ||phi||) / ||v||),
/// GMRES inner solves (right-preconditioned by `precondition` when given),
/// and a halving line search with an Armijo decrease test. Converges when
/// ||F_n|| / ||F_0|| <= newton_tol; an exhausted line search raises
/// StagnationError carrying the best iterate.
EigenResult jfnk_eigen(const LinearOperator& apply_a,
                       const LinearOperator& apply_b,
                       const LinearOperator& precondition,
                       const DenseVector& phi0, const JfnkOptions& options);

}  // namespace critkit
