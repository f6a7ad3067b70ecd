#include "critkit/slab.hpp"

#include <cmath>

#include "critkit/errors.hpp"

namespace critkit {

SlabMesh SlabMesh::uniform(std::size_t n_cells, double total_width,
                           std::int32_t material_id, BoundaryCondition left,
                           BoundaryCondition right) {
  if (n_cells == 0 || !(total_width > 0.0) || !std::isfinite(total_width)) {
    throw InvalidInputError("SlabMesh::uniform: need n_cells > 0 and a "
                            "positive finite width");
  }
  SlabMesh mesh;
  mesh.widths.assign(n_cells, total_width / static_cast<double>(n_cells));
  mesh.material.assign(n_cells, material_id);
  mesh.bc_left = left;
  mesh.bc_right = right;
  return mesh;
}

void SlabMesh::validate(std::size_t n_materials) const {
  if (widths.empty()) {
    throw InvalidInputError("SlabMesh: no cells");
  }
  if (material.size() != widths.size()) {
    throw InvalidInputError("SlabMesh: material map size mismatch");
  }
  for (double h : widths) {
    if (!std::isfinite(h) || h <= 0.0) {
      throw InvalidInputError("SlabMesh: cell widths must be positive");
    }
  }
  for (std::int32_t m : material) {
    if (m < 0 || static_cast<std::size_t>(m) >= n_materials) {
      throw InvalidInputError("SlabMesh: material id out of range");
    }
  }
}

AngularQuadrature AngularQuadrature::gauss_legendre(std::size_t n) {
  if (n < 2 || n % 2 != 0) {
    throw InvalidInputError(
        "gauss_legendre: direction count must be even and >= 2");
  }
  AngularQuadrature q;
  q.mu.assign(n, 0.0);
  q.w.assign(n, 0.0);
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Largest positive root first; Newton on the Legendre recurrence.
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        // One last derivative refresh at the converged abscissa.
        p0 = 1.0;
        p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
          const double kk = static_cast<double>(k);
          const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
          p0 = p1;
          p1 = p2;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        break;
      }
    }
    const double weight = 2.0 / ((1.0 - x * x) * dp * dp);
    q.mu[n - 1 - i] = x;
    q.w[n - 1 - i] = weight;
    q.mu[i] = -x;
    q.w[i] = weight;
  }
  return q;
}

}  // namespace critkit
