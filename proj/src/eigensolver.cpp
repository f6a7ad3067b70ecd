#include "critkit/eigensolver.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

namespace critkit {
namespace {

DenseVector scaled(const DenseVector& v, double alpha) {
  DenseVector out = v;
  scale(out, alpha);
  return out;
}

/// Flips the sign of the whole vector if its first nonzero entry is negative.
void fix_sign(DenseVector& phi) {
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (phi[i] > 0.0) {
      return;
    }
    if (phi[i] < 0.0) {
      scale(phi, -1.0);
      return;
    }
  }
}

double checked_production_norm(const DenseVector& production) {
  const double k = norm2(production);
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw DegenerateProblemError(
        "eigensolver: the production term vanished, so the iteration cannot "
        "define an eigenvalue; check that the system has a fission source");
  }
  return k;
}

EigenPair make_pair_for(const LinearOperator& apply_b, DenseVector phi) {
  const double k = checked_production_norm(apply_b(phi));
  fix_sign(phi);
  return EigenPair{std::move(phi), k};
}

}  // namespace

DenseVector newton_residual(const LinearOperator& apply_a,
                            const LinearOperator& apply_b,
                            const DenseVector& phi) {
  if (!apply_a || !apply_b) {
    throw InvalidInputError("newton_residual: missing operator");
  }
  const DenseVector production = apply_b(phi);
  const double k = checked_production_norm(production);
  DenseVector residual = apply_a(phi);
  if (residual.size() != production.size()) {
    throw DimensionError("newton_residual: operator output sizes differ");
  }
  axpy(-1.0 / k, production, residual);
  return residual;
}

EigenResult inverse_power(const LinearOperator& solve_a,
                          const LinearOperator& apply_b,
                          const DenseVector& phi0, int max_iterations,
                          double tol) {
  if (!solve_a || !apply_b) {
    throw InvalidInputError("inverse_power: missing operator");
  }
  if (max_iterations < 1) {
    throw InvalidInputError("inverse_power: max_iterations must be positive");
  }
  if (!(tol >= 0.0)) {
    throw InvalidInputError("inverse_power: tol must be non-negative");
  }
  if (phi0.empty() || norm2(phi0) == 0.0) {
    throw InvalidInputError("inverse_power: initial flux must be nonzero");
  }

  EigenResult result;
  DenseVector phi = phi0;
  DenseVector production = apply_b(phi);
  double k = checked_production_norm(production);
  for (int n = 0; n < max_iterations; ++n) {
    phi = solve_a(scaled(production, 1.0 / k));
    production = apply_b(phi);
    const double k_next = checked_production_norm(production);
    const double change = std::abs(k_next - k) / k_next;
    k = k_next;
    result.report.outer_iterations = n + 1;
    result.report.residual_history.push_back(change);
    if (change <= tol) {
      result.report.converged = true;
      break;
    }
  }
  fix_sign(phi);
  result.pair = EigenPair{std::move(phi), k};
  return result;
}

EigenResult jfnk_eigen(const LinearOperator& apply_a,
                       const LinearOperator& apply_b,
                       const LinearOperator& precondition,
                       const DenseVector& phi0, const JfnkOptions& options) {
  if (!apply_a || !apply_b) {
    throw InvalidInputError("jfnk_eigen: missing operator");
  }
  if (options.init_power_iterations < 0) {
    throw InvalidInputError(
        "jfnk_eigen: init_power_iterations must be non-negative");
  }
  if (options.max_newton < 1) {
    throw InvalidInputError("jfnk_eigen: max_newton must be positive");
  }
  if (!(options.newton_tol > 0.0)) {
    throw InvalidInputError("jfnk_eigen: newton_tol must be positive");
  }
  if (!(options.armijo > 0.0) || options.armijo >= 1.0) {
    throw InvalidInputError("jfnk_eigen: armijo must lie in (0, 1)");
  }
  if (options.max_backtracks < 0) {
    throw InvalidInputError("jfnk_eigen: max_backtracks must be non-negative");
  }
  if (!(options.absolute_tol >= 0.0)) {
    throw InvalidInputError("jfnk_eigen: absolute_tol must be non-negative");
  }
  if (phi0.empty() || norm2(phi0) == 0.0) {
    throw InvalidInputError("jfnk_eigen: initial flux must be nonzero");
  }

  EigenResult result;
  int linear_total = 0;
  DenseVector phi = phi0;

  // Warm start: a few inverse power iterations with GMRES loss-of-accuracy
  // matching the Newton inner solves, each started from the current iterate.
  if (options.init_power_iterations > 0) {
    DenseVector production = apply_b(phi);
    double k = checked_production_norm(production);
    for (int n = 0; n < options.init_power_iterations; ++n) {
      GmresResult sol = gmres(apply_a, scaled(production, 1.0 / k),
                              options.linear, precondition, phi);
      linear_total += sol.report.iterations;
      phi = std::move(sol.x);
      production = apply_b(phi);
      k = checked_production_norm(production);
    }
  }

  auto residual_of = [&](const DenseVector& point) {
    return newton_residual(apply_a, apply_b, point);
  };

  DenseVector f = residual_of(phi);
  const double f0_norm = norm2(f);
  double f_norm = f0_norm;
  if (f0_norm <= options.absolute_tol) {
    result.report.converged = true;
    result.report.linear_iterations = linear_total;
    result.pair = make_pair_for(apply_b, std::move(phi));
    return result;
  }

  for (int n = 0; n < options.max_newton && !result.report.converged; ++n) {
    // Directional finite difference approximating the Jacobian action at phi.
    const double phi_norm = norm2(phi);
    auto apply_jacobian = [&](const DenseVector& v) {
      const double v_norm = norm2(v);
      if (v_norm == 0.0) {
        return DenseVector(v.size());
      }
      const double beta = std::sqrt(std::numeric_limits<double>::epsilon()) *
                          std::sqrt(1.0 + phi_norm) / v_norm;
      DenseVector shifted = phi;
      axpy(beta, v, shifted);
      DenseVector difference = subtract(residual_of(shifted), f);
      scale(difference, 1.0 / beta);
      return difference;
    };
    const GmresResult step =
        gmres(apply_jacobian, scaled(f, -1.0), options.linear, precondition);
    linear_total += step.report.iterations;

    // Halving line search with an Armijo sufficient-decrease test.
    double step_fraction = 1.0;
    bool accepted = false;
    for (int attempt = 0; attempt <= options.max_backtracks; ++attempt) {
      DenseVector trial = phi;
      axpy(step_fraction, step.x, trial);
      DenseVector trial_f;
      double trial_norm = std::numeric_limits<double>::infinity();
      try {
        trial_f = residual_of(trial);
        trial_norm = norm2(trial_f);
      } catch (const DegenerateProblemError&) {
        // The step overshot into a region with no production; shrink it.
      }
      if (trial_norm <= (1.0 - options.armijo * step_fraction) * f_norm) {
        phi = std::move(trial);
        f = std::move(trial_f);
        f_norm = trial_norm;
        accepted = true;
        break;
      }
      step_fraction *= 0.5;
    }
    result.report.outer_iterations = n + 1;
    if (!accepted) {
      throw StagnationError(
          "jfnk_eigen: line search exhausted without sufficient decrease",
          make_pair_for(apply_b, std::move(phi)));
    }
    const double ratio = f_norm / f0_norm;
    result.report.residual_history.push_back(ratio);
    if (ratio <= options.newton_tol || f_norm <= options.absolute_tol) {
      result.report.converged = true;
    }
  }

  result.report.linear_iterations = linear_total;
  result.pair = make_pair_for(apply_b, std::move(phi));
  return result;
}

}  // namespace critkit
