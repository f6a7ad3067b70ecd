#include "critkit/discretization.hpp"

#include <cmath>

#include "critkit/errors.hpp"

namespace critkit {

double tau_stabilization(double sigma_t, double h, double c, double zeta) {
  if (!(h > 0.0) || !(c > 0.0) || !(zeta > 0.0) || sigma_t < 0.0 ||
      !std::isfinite(sigma_t) || !std::isfinite(h)) {
    throw InvalidInputError("tau_stabilization: invalid arguments");
  }
  if (c * h * sigma_t >= zeta) return 1.0 / (c * sigma_t);
  return h / zeta;
}

ClosureCoefficients ClosureCoefficients::zero(std::size_t n_groups,
                                              std::size_t n_cells) {
  ClosureCoefficients z;
  z.n_groups = n_groups;
  z.n_cells = n_cells;
  z.dhat.assign(n_groups * (n_cells + 1), 0.0);
  z.gamma_left.assign(n_groups, 0.0);
  z.gamma_right.assign(n_groups, 0.0);
  return z;
}

double face_conductance(double h_left, double d_left, double h_right,
                        double d_right) {
  return 1.0 / (h_left / (2.0 * d_left) + h_right / (2.0 * d_right));
}

double boundary_conductance(double h, double d) {
  return 1.0 / (h / (2.0 * d) + 4.0);
}

namespace {

void check_closure(const ClosureCoefficients& closure, std::size_t n_groups,
                   std::size_t n_cells) {
  if (closure.n_groups != n_groups || closure.n_cells != n_cells ||
      closure.dhat.size() != n_groups * (n_cells + 1) ||
      closure.gamma_left.size() != n_groups ||
      closure.gamma_right.size() != n_groups) {
    throw DimensionError("closure coefficients do not match the problem");
  }
}

/// One group's diffusion block: face leakage + removal + closure drift.
/// Returns the per-cell diagonal and the within-group off-diagonal triplets
/// with local (cell) indices.
void group_block_entries(const SlabMesh& mesh, const XsLibrary& lib,
                         std::size_t g, const ClosureCoefficients& closure,
                         std::vector<double>& diag,
                         std::vector<Triplet>& off_diag) {
  const std::size_t n = mesh.n_cells();
  diag.assign(n, 0.0);
  off_diag.clear();
  for (std::size_t c = 0; c < n; ++c) {
    const CrossSections& xs = lib.material(mesh.material[c]);
    diag[c] += xs.removal(g) * mesh.widths[c];
  }
  for (std::size_t f = 1; f < n; ++f) {
    const std::size_t cl = f - 1;
    const std::size_t cr = f;
    const double dl = lib.material(mesh.material[cl]).diffusion[g];
    const double dr = lib.material(mesh.material[cr]).diffusion[g];
    const double kappa =
        face_conductance(mesh.widths[cl], dl, mesh.widths[cr], dr);
    const double dhat = closure.dhat_at(g, f);
    // Face flux (positive rightward): -kappa (phi_R - phi_L)
    //                                 - dhat (phi_L + phi_R).
    diag[cl] += kappa - dhat;
    off_diag.push_back({static_cast<std::int64_t>(cl),
                        static_cast<std::int64_t>(cr), -(kappa + dhat)});
    diag[cr] += kappa + dhat;
    off_diag.push_back({static_cast<std::int64_t>(cr),
                        static_cast<std::int64_t>(cl), -(kappa - dhat)});
  }
  if (mesh.bc_left == BoundaryCondition::vacuum) {
    const double d0 = lib.material(mesh.material[0]).diffusion[g];
    diag[0] += boundary_conductance(mesh.widths[0], d0) +
               closure.dhat_at(g, 0);
  }
  if (mesh.bc_right == BoundaryCondition::vacuum) {
    const double dn = lib.material(mesh.material[n - 1]).diffusion[g];
    diag[n - 1] += boundary_conductance(mesh.widths[n - 1], dn) +
                   closure.dhat_at(g, n);
  }
}

}  // namespace

DiffusionOperators assemble_diffusion_operators(const SlabMesh& mesh,
                                                const XsLibrary& lib) {
  return assemble_diffusion_operators(
      mesh, lib, ClosureCoefficients::zero(lib.n_groups(), mesh.n_cells()));
}

DiffusionOperators assemble_diffusion_operators(
    const SlabMesh& mesh, const XsLibrary& lib,
    const ClosureCoefficients& closure) {
  mesh.validate(lib.n_materials());
  const std::size_t n = mesh.n_cells();
  const std::size_t groups = lib.n_groups();
  check_closure(closure, groups, n);
  const std::size_t total = groups * n;
  std::vector<Triplet> a_entries;
  std::vector<Triplet> b_entries;
  std::vector<double> diag;
  std::vector<Triplet> off_diag;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::int64_t base = static_cast<std::int64_t>(g * n);
    group_block_entries(mesh, lib, g, closure, diag, off_diag);
    for (std::size_t c = 0; c < n; ++c) {
      a_entries.push_back({base + static_cast<std::int64_t>(c),
                           base + static_cast<std::int64_t>(c), diag[c]});
    }
    for (const Triplet& t : off_diag) {
      a_entries.push_back({base + t.row, base + t.col, t.value});
    }
    for (std::size_t c = 0; c < n; ++c) {
      const CrossSections& xs = lib.material(mesh.material[c]);
      const double h = mesh.widths[c];
      for (std::size_t gp = 0; gp < groups; ++gp) {
        if (gp != g && xs.scattering(gp, g) != 0.0) {
          a_entries.push_back({base + static_cast<std::int64_t>(c),
                               static_cast<std::int64_t>(gp * n + c),
                               -xs.scattering(gp, g) * h});
        }
        const double fission = xs.chi[g] * xs.nu_sigma_f[gp] * h;
        if (fission != 0.0) {
          b_entries.push_back({base + static_cast<std::int64_t>(c),
                               static_cast<std::int64_t>(gp * n + c),
                               fission});
        }
      }
    }
  }
  DiffusionOperators ops;
  ops.a = SparseMatrix::from_triplets(total, total, std::move(a_entries));
  ops.b = SparseMatrix::from_triplets(total, total, std::move(b_entries));
  return ops;
}

MultiComponentMatrix assemble_diffusion_preconditioner(
    const SlabMesh& mesh, const XsLibrary& lib,
    const ClosureCoefficients& closure) {
  mesh.validate(lib.n_materials());
  const std::size_t n = mesh.n_cells();
  const std::size_t groups = lib.n_groups();
  check_closure(closure, groups, n);
  std::vector<SparseMatrix> blocks;
  blocks.reserve(groups);
  std::vector<double> diag;
  std::vector<Triplet> off_diag;
  for (std::size_t g = 0; g < groups; ++g) {
    group_block_entries(mesh, lib, g, closure, diag, off_diag);
    std::vector<Triplet> entries = off_diag;
    for (std::size_t c = 0; c < n; ++c) {
      entries.push_back({static_cast<std::int64_t>(c),
                         static_cast<std::int64_t>(c), diag[c]});
    }
    blocks.push_back(SparseMatrix::from_triplets(n, n, std::move(entries)));
  }
  return MultiComponentMatrix::from_blocks(blocks);
}

TransportOperators assemble_transport_operator(const SlabMesh& mesh,
                                               const XsLibrary& lib,
                                               const AngularQuadrature& quad) {
  mesh.validate(lib.n_materials());
  if (quad.size() == 0) {
    throw InvalidInputError("assemble_transport_operator: empty quadrature");
  }
  const std::size_t n = mesh.n_cells();
  const std::size_t groups = lib.n_groups();
  const std::size_t nd = quad.size();
  std::vector<SparseMatrix> blocks;
  blocks.reserve(groups * nd);
  std::vector<Triplet> reflective;
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t dir = 0; dir < nd; ++dir) {
      const double mu = quad.mu[dir];
      std::vector<Triplet> entries;
      entries.reserve(2 * n);
      for (std::size_t c = 0; c < n; ++c) {
        const CrossSections& xs = lib.material(mesh.material[c]);
        entries.push_back({static_cast<std::int64_t>(c),
                           static_cast<std::int64_t>(c),
                           std::abs(mu) + xs.sigma_t[g] * mesh.widths[c]});
        if (mu > 0.0 && c > 0) {
          entries.push_back({static_cast<std::int64_t>(c),
                             static_cast<std::int64_t>(c - 1), -mu});
        }
        if (mu < 0.0 && c + 1 < n) {
          entries.push_back({static_cast<std::int64_t>(c),
                             static_cast<std::int64_t>(c + 1), mu});
        }
      }
      blocks.push_back(SparseMatrix::from_triplets(n, n, std::move(entries)));
      const std::int64_t self =
          static_cast<std::int64_t>((g * nd + dir) * n);
      const std::int64_t image =
          static_cast<std::int64_t>((g * nd + quad.mirror(dir)) * n);
      if (mu > 0.0 && mesh.bc_left == BoundaryCondition::reflective) {
        reflective.push_back({self, image, -mu});
      }
      if (mu < 0.0 && mesh.bc_right == BoundaryCondition::reflective) {
        reflective.push_back({self + static_cast<std::int64_t>(n - 1),
                              image + static_cast<std::int64_t>(n - 1), mu});
      }
    }
  }
  TransportOperators ops;
  ops.streaming_collision = MultiComponentMatrix::from_blocks(blocks);
  const std::size_t total = groups * nd * n;
  ops.reflective =
      SparseMatrix::from_triplets(total, total, std::move(reflective));
  return ops;
}

namespace {

void check_psi(const DenseVector& psi, std::size_t nd, std::size_t n_groups,
               std::size_t n_cells) {
  if (psi.size() != n_groups * nd * n_cells) {
    throw DimensionError("angular flux size does not match (G, N_d, cells)");
  }
}

}  // namespace

DenseVector scalar_flux(const DenseVector& psi, const AngularQuadrature& quad,
                        std::size_t n_groups, std::size_t n_cells) {
  check_psi(psi, quad.size(), n_groups, n_cells);
  DenseVector phi(n_groups * n_cells);
  for (std::size_t g = 0; g < n_groups; ++g) {
    for (std::size_t dir = 0; dir < quad.size(); ++dir) {
      const std::size_t base = (g * quad.size() + dir) * n_cells;
      for (std::size_t c = 0; c < n_cells; ++c) {
        phi[g * n_cells + c] += quad.w[dir] * psi[base + c];
      }
    }
  }
  return phi;
}

DenseVector cell_current(const DenseVector& psi, const AngularQuadrature& quad,
                         std::size_t n_groups, std::size_t n_cells) {
  check_psi(psi, quad.size(), n_groups, n_cells);
  DenseVector current(n_groups * n_cells);
  for (std::size_t g = 0; g < n_groups; ++g) {
    for (std::size_t dir = 0; dir < quad.size(); ++dir) {
      const std::size_t base = (g * quad.size() + dir) * n_cells;
      for (std::size_t c = 0; c < n_cells; ++c) {
        current[g * n_cells + c] += quad.w[dir] * quad.mu[dir] * psi[base + c];
      }
    }
  }
  return current;
}

DenseVector face_current(const DenseVector& psi, const AngularQuadrature& quad,
                         const SlabMesh& mesh, std::size_t n_groups) {
  const std::size_t n = mesh.n_cells();
  check_psi(psi, quad.size(), n_groups, n);
  DenseVector current(n_groups * (n + 1));
  for (std::size_t g = 0; g < n_groups; ++g) {
    for (std::size_t dir = 0; dir < quad.size(); ++dir) {
      const double mu = quad.mu[dir];
      const double wmu = quad.w[dir] * mu;
      const std::size_t base = (g * quad.size() + dir) * n;
      const std::size_t mirror_base = (g * quad.size() + quad.mirror(dir)) * n;
      for (std::size_t f = 0; f <= n; ++f) {
        double face_value = 0.0;
        if (mu > 0.0) {
          if (f > 0) {
            face_value = psi[base + f - 1];
          } else if (mesh.bc_left == BoundaryCondition::reflective) {
            face_value = psi[mirror_base];
          }
        } else {
          if (f < n) {
            face_value = psi[base + f];
          } else if (mesh.bc_right == BoundaryCondition::reflective) {
            face_value = psi[mirror_base + n - 1];
          }
        }
        current[g * (n + 1) + f] += wmu * face_value;
      }
    }
  }
  return current;
}

namespace {

DenseVector isotropic_source(const DenseVector& cell_rate,
                             const SlabMesh& mesh,
                             const AngularQuadrature& quad,
                             std::size_t n_groups) {
  const std::size_t n = mesh.n_cells();
  const std::size_t nd = quad.size();
  DenseVector q(n_groups * nd * n);
  for (std::size_t g = 0; g < n_groups; ++g) {
    for (std::size_t dir = 0; dir < nd; ++dir) {
      const std::size_t base = (g * nd + dir) * n;
      for (std::size_t c = 0; c < n; ++c) {
        q[base + c] = 0.5 * mesh.widths[c] * cell_rate[g * n + c];
      }
    }
  }
  return q;
}

}  // namespace

DenseVector transport_scatter_source(const DenseVector& phi,
                                     const SlabMesh& mesh,
                                     const XsLibrary& lib,
                                     const AngularQuadrature& quad) {
  const std::size_t n = mesh.n_cells();
  const std::size_t groups = lib.n_groups();
  if (phi.size() != groups * n) {
    throw DimensionError("transport_scatter_source: flux size mismatch");
  }
  DenseVector rate(groups * n);
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t c = 0; c < n; ++c) {
      const CrossSections& xs = lib.material(mesh.material[c]);
      double s = 0.0;
      for (std::size_t gp = 0; gp < groups; ++gp) {
        s += xs.scattering(gp, g) * phi[gp * n + c];
      }
      rate[g * n + c] = s;
    }
  }
  return isotropic_source(rate, mesh, quad, groups);
}

DenseVector transport_fission_source(const DenseVector& phi,
                                     const SlabMesh& mesh,
                                     const XsLibrary& lib,
                                     const AngularQuadrature& quad) {
  const std::size_t n = mesh.n_cells();
  const std::size_t groups = lib.n_groups();
  if (phi.size() != groups * n) {
    throw DimensionError("transport_fission_source: flux size mismatch");
  }
  DenseVector rate(groups * n);
  for (std::size_t c = 0; c < n; ++c) {
    const CrossSections& xs = lib.material(mesh.material[c]);
    double production = 0.0;
    for (std::size_t gp = 0; gp < groups; ++gp) {
      production += xs.nu_sigma_f[gp] * phi[gp * n + c];
    }
    for (std::size_t g = 0; g < groups; ++g) {
      rate[g * n + c] = xs.chi[g] * production;
    }
  }
  return isotropic_source(rate, mesh, quad, groups);
}

}  // namespace critkit
