#pragma once

#include <functional>
#include <vector>

#include "critkit/errors.hpp"
#include "critkit/sparse.hpp"

namespace critkit {

using LinearOperator = std::function<DenseVector(const DenseVector&)>;

struct GmresOptions {
  double rtol = 1e-8;
  int restart = 30;
  int max_iterations = 0;  // 0 means 10 * restart
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double final_residual = 0.0;
  /// Residual norms: the initial true residual followed by one estimate per
  /// iteration. Non-increasing within each restart cycle.
  std::vector<double> residual_history;
};

struct GmresResult {
  DenseVector x;
  SolveReport report;
};

/// Restarted GMRES with modified Gram-Schmidt orthogonalization and,
/// optionally, right preconditioning (which keeps the minimized residual the
/// true residual). Convergence is declared on ||b - A x|| <= rtol * ||b||,
/// re-checked against the true residual at each restart; an exact Krylov
/// breakdown also counts as convergence. A zero right-hand side returns the
/// zero solution regardless of the initial guess.
GmresResult gmres(const LinearOperator& apply_a, const DenseVector& b,
                  const GmresOptions& options = {},
                  const LinearOperator& precondition = {},
                  const DenseVector& x0 = DenseVector());

/// Thrown where a non-converged linear solve cannot be tolerated.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what_arg, SolveReport report)
      : Error(what_arg), report_(std::move(report)) {}

  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

}  // namespace critkit
