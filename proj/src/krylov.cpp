#include "critkit/krylov.hpp"

#include <cmath>

namespace critkit {

namespace {

DenseVector true_residual(const LinearOperator& apply_a, const DenseVector& b,
                          const DenseVector& x) {
  DenseVector ax = apply_a(x);
  if (ax.size() != b.size()) {
    throw DimensionError("gmres: operator changed the vector size");
  }
  return subtract(b, ax);
}

}  // namespace

GmresResult gmres(const LinearOperator& apply_a, const DenseVector& b,
                  const GmresOptions& options,
                  const LinearOperator& precondition, const DenseVector& x0) {
  if (!apply_a) {
    throw InvalidInputError("gmres: missing operator");
  }
  if (options.restart < 1) {
    throw InvalidInputError("gmres: restart must be positive");
  }
  if (!(options.rtol > 0.0)) {
    throw InvalidInputError("gmres: rtol must be positive");
  }
  const std::size_t n = b.size();
  const int restart = options.restart;
  const int max_its =
      options.max_iterations > 0 ? options.max_iterations : 10 * restart;

  GmresResult result;
  const double norm_b = norm2(b);
  if (norm_b == 0.0) {
    result.x = DenseVector(n);
    result.report.converged = true;
    result.report.residual_history = {0.0};
    return result;
  }
  const double tol = options.rtol * norm_b;

  DenseVector x = x0.empty() ? DenseVector(n) : x0;
  if (x.size() != n) {
    throw DimensionError("gmres: initial guess size mismatch");
  }

  SolveReport& report = result.report;
  DenseVector r = true_residual(apply_a, b, x);
  double beta = norm2(r);
  report.residual_history.push_back(beta);

  std::vector<DenseVector> basis;
  std::vector<double> hess((restart + 1) * restart, 0.0);
  std::vector<double> cs(restart, 0.0);
  std::vector<double> sn(restart, 0.0);
  std::vector<double> g(restart + 1, 0.0);
  auto h = [&](int i, int j) -> double& { return hess[i * restart + j]; };

  bool happy = false;
  while (beta > tol && !happy && report.iterations < max_its) {
    basis.assign(1, r);
    scale(basis[0], 1.0 / beta);
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    int j = 0;
    for (; j < restart && report.iterations < max_its; ++j) {
      DenseVector z = precondition ? precondition(basis[j]) : basis[j];
      DenseVector w = apply_a(z);
      if (w.size() != n) {
        throw DimensionError("gmres: operator changed the vector size");
      }
      for (int i = 0; i <= j; ++i) {
        const double hij = dot(w, basis[i]);
        h(i, j) = hij;
        axpy(-hij, basis[i], w);
      }
      double col_scale = 0.0;
      for (int i = 0; i <= j; ++i) col_scale = std::max(col_scale, std::abs(h(i, j)));
      const double hj1 = norm2(w);
      h(j + 1, j) = hj1;
      if (hj1 <= 1e-14 * std::max(col_scale, 1e-300)) {
        happy = true;  // exact breakdown: the subspace already contains x
      } else {
        DenseVector v = w;
        scale(v, 1.0 / hj1);
        basis.push_back(std::move(v));
      }
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
        h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
        h(i, j) = t;
      }
      const double denom = std::hypot(h(j, j), h(j + 1, j));
      if (denom == 0.0) {
        cs[j] = 1.0;
        sn[j] = 0.0;
      } else {
        cs[j] = h(j, j) / denom;
        sn[j] = h(j + 1, j) / denom;
      }
      h(j, j) = cs[j] * h(j, j) + sn[j] * h(j + 1, j);
      h(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      ++report.iterations;
      report.residual_history.push_back(std::abs(g[j + 1]));
      if (std::abs(g[j + 1]) <= tol || happy) {
        ++j;
        break;
      }
    }
    // y solves the leading j x j triangular system.
    std::vector<double> y(j, 0.0);
    for (int i = j - 1; i >= 0; --i) {
      double s = g[i];
      for (int t = i + 1; t < j; ++t) s -= h(i, t) * y[t];
      y[i] = s / h(i, i);
    }
    DenseVector update(n);
    for (int i = 0; i < j; ++i) axpy(y[i], basis[i], update);
    if (precondition) update = precondition(update);
    axpy(1.0, update, x);
    r = true_residual(apply_a, b, x);
    beta = norm2(r);
  }
  report.converged = beta <= tol || happy;
  report.final_residual = beta;
  result.x = std::move(x);
  return result;
}

}  // namespace critkit
