#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "critkit/coarsen.hpp"
#include "critkit/dense_lu.hpp"
#include "critkit/krylov.hpp"
#include "critkit/multicomponent.hpp"
#include "critkit/schwarz.hpp"
#include "critkit/sparse.hpp"

namespace critkit {

/// Block-diagonal interpolation stored as one sub-block replicated n_comp
/// times. Matrix-vector semantics are those of the materialized block
/// diagonal, but the shared values are stored once.
class Interpolation {
 public:
  Interpolation() = default;
  Interpolation(SparseMatrix block, std::size_t n_comp);

  std::size_t n_rows() const { return block_.n_rows() * n_comp_; }
  std::size_t n_cols() const { return block_.n_cols() * n_comp_; }
  std::size_t n_comp() const { return n_comp_; }
  const SparseMatrix& block() const { return block_; }

  /// Prolongation: coarse vector -> fine vector.
  DenseVector apply(const DenseVector& coarse) const;
  /// Restriction: fine vector -> coarse vector (transpose action).
  DenseVector apply_transpose(const DenseVector& fine) const;

  /// Assembles the full block-diagonal matrix.
  SparseMatrix materialize() const;

  /// Bytes actually held: one copy of the sub-block.
  std::size_t storage_bytes() const { return block_.storage_bytes(); }

 private:
  SparseMatrix block_;
  std::size_t n_comp_ = 0;
};

struct SgmasmParams {
  double theta = 0.25;
  int agg = 0;
  int max_levels = 25;
  std::size_t min_coarse = 50;  // per component
  int delta = 1;                // overlap layers on the finest level only
  int sweeps = 1;               // SOR sweeps inside each subdomain solve
  double omega = 1.0;
  bool exact_subdomains = false;  // dense LU subdomain solves instead of SOR
  std::size_t np1 = 1;
  std::size_t np2 = 1;
  std::size_t component_index = 0;
};

struct HierarchyLevel {
  MultiComponentMatrix m;
  std::vector<std::int32_t> owner;  // rank of each row
  std::optional<RasPreconditioner> smoother;  // absent on the coarsest level
  std::optional<Interpolation> interpolation;  // to the next coarser level
};

/// Multilevel Schwarz hierarchy: per-level operators, subdomain smoothers,
/// interpolations, and a dense factorization of the coarsest operator. The
/// Galerkin identity M[l+1] = P[l]^T M[l] P[l] holds by construction.
struct MultilevelHierarchy {
  std::vector<HierarchyLevel> levels;
  DenseLu coarsest;
  CoarsenStats stats;  // splitting work performed during setup

  std::size_t n_levels() const { return levels.size(); }
  std::size_t n_rows() const {
    return levels.empty() ? 0 : levels.front().m.n_rows();
  }
};

/// Subspace-coarsened multilevel Schwarz setup: coarsens only the component
/// selected by params.component_index, replicates its interpolations across
/// components, and builds every coarse operator on the full matrix via the
/// Galerkin product. Coarse rows inherit the rank of their coarse-point fine
/// row; overlap is grown only on the finest level.
MultilevelHierarchy setup_sgmasm(const MultiComponentMatrix& m,
                                 const SgmasmParams& params);

/// Baseline multilevel Schwarz setup: identical pipeline, but the full
/// matrix is coarsened directly (min_coarse applies per component, i.e. the
/// full-row threshold is min_coarse * n_comp).
MultilevelHierarchy setup_masm(const MultiComponentMatrix& m,
                               const SgmasmParams& params);

/// Multilevel V-cycle on a residual: smoother pre-solve, coarse-grid
/// correction through the interpolation transpose, recursive solve, and
/// smoother post-solve; the coarsest level is solved densely. Linear in r.
DenseVector pc_apply(const MultilevelHierarchy& h, const DenseVector& r);

/// Bytes held by the hierarchy: operators, ownership arrays, cached
/// subdomain matrices, interpolations, and the coarsest factorization.
std::size_t estimate_memory(const MultilevelHierarchy& h);

enum class PreconditionerKind { sgmasm, masm, ras, none };

struct PreconditionerParams {
  PreconditionerKind kind = PreconditionerKind::sgmasm;
  /// Hierarchy controls; the one-level RAS kind uses only the partition,
  /// overlap, and smoother fields.
  SgmasmParams multilevel;
};

/// A built preconditioner of any configured kind behind one apply() action.
class Preconditioner {
 public:
  static Preconditioner build(const MultiComponentMatrix& m,
                              const PreconditionerParams& params);

  /// Identity for the `none` kind.
  DenseVector apply(const DenseVector& r) const;

  /// GMRES right-preconditioner action referencing this object (which must
  /// outlive it); empty for the `none` kind.
  LinearOperator make_action() const;

  PreconditionerKind kind() const { return kind_; }
  const MultilevelHierarchy* hierarchy() const {
    return hierarchy_ ? &*hierarchy_ : nullptr;
  }

  std::size_t memory_bytes() const;
  /// Stored entries over all levels relative to the finest; 1 when there is
  /// no hierarchy.
  double complexity() const;
  /// Strength edges examined during setup splitting; 0 when no coarsening.
  std::size_t setup_nnz() const;
  /// Rows fed through splitting passes during setup.
  std::size_t rows_split() const;

 private:
  PreconditionerKind kind_ = PreconditionerKind::none;
  std::optional<MultilevelHierarchy> hierarchy_;
  std::optional<RasPreconditioner> ras_;
};

}  // namespace critkit
