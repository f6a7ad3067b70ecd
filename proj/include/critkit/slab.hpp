#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace critkit {

enum class BoundaryCondition { vacuum, reflective };

/// 1D slab mesh: cell widths, per-cell material ids, and boundary
/// conditions at the left/right faces.
struct SlabMesh {
  std::vector<double> widths;
  std::vector<std::int32_t> material;
  BoundaryCondition bc_left = BoundaryCondition::vacuum;
  BoundaryCondition bc_right = BoundaryCondition::vacuum;

  std::size_t n_cells() const { return widths.size(); }

  static SlabMesh uniform(std::size_t n_cells, double total_width,
                          std::int32_t material_id, BoundaryCondition left,
                          BoundaryCondition right);

  /// Checks positive widths and material ids within [0, n_materials).
  void validate(std::size_t n_materials) const;
};

/// Symmetric Gauss-Legendre quadrature on (-1, 1): directions mu ascending
/// (negative half first), mirror-symmetric with equal weights, no zero
/// direction, weights summing to 2.
struct AngularQuadrature {
  std::vector<double> mu;
  std::vector<double> w;

  std::size_t size() const { return mu.size(); }
  /// Index of the direction with opposite mu.
  std::size_t mirror(std::size_t n) const { return mu.size() - 1 - n; }

  static AngularQuadrature gauss_legendre(std::size_t n_directions);
};

}  // namespace critkit
