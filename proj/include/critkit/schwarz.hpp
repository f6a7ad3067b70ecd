#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "critkit/dense_lu.hpp"
#include "critkit/partition.hpp"
#include "critkit/sparse.hpp"

namespace critkit {

/// Per-rank owned and overlapped row sets. Owned sets are disjoint and cover
/// every row; each overlap set is a superset of its owned set. All row lists
/// are ascending.
struct OverlapMap {
  std::size_t n_rows = 0;
  std::vector<std::vector<std::int64_t>> owned;
  std::vector<std::vector<std::int64_t>> overlap;

  std::size_t n_ranks() const { return owned.size(); }
  void validate() const;
};

/// Adds delta layers of sparsity neighbors (A or A^T) to `owned`.
std::vector<std::int64_t> grow_overlap(const SparseMatrix& pattern,
                                       std::span<const std::int64_t> owned,
                                       int delta);

/// Overlap map for all ranks of `partition` with `delta` layers of growth.
OverlapMap build_overlap_map(const SparseMatrix& pattern,
                             const Partition& partition, int delta);

/// Forward SOR sweeps from a zero initial guess; the result is linear in b.
/// omega must lie in (0, 2); a zero diagonal raises SingularError.
DenseVector sor_solve(const SparseMatrix& a, const DenseVector& b, int sweeps,
                      double omega);

/// One restricted-additive-Schwarz application: per rank, restrict the
/// residual to the overlap rows, run the subdomain solve on the principal
/// submatrix, and scatter back only the owned rows.
DenseVector ras_apply(const SparseMatrix& m, const OverlapMap& map,
                      const DenseVector& r, int sweeps, double omega);

/// Cached restricted additive Schwarz: subdomain matrices are extracted once
/// at construction. `exact` replaces the SOR sweeps with a dense LU solve on
/// each subdomain. Subdomain solves are independent; CRITKIT_THREADS caps
/// how many run concurrently (default sequential).
class RasPreconditioner {
 public:
  struct Options {
    int sweeps = 1;
    double omega = 1.0;
    bool exact = false;
  };

  RasPreconditioner(const SparseMatrix& m, OverlapMap map, Options options);

  DenseVector apply(const DenseVector& r) const;

  const OverlapMap& map() const { return map_; }
  const Options& options() const { return options_; }

  /// Bytes held by cached subdomain matrices and factorizations.
  std::size_t storage_bytes() const;

 private:
  OverlapMap map_;
  Options options_;
  std::vector<SparseMatrix> sub_matrices_;
  std::vector<DenseLu> sub_factors_;
};

}  // namespace critkit
