#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "critkit/sparse.hpp"

namespace critkit {

/// Strong-dependency graph: `strong[i]` lists the columns row i strongly
/// depends on, ascending. Edge (i, j) exists iff
/// -A(i,j) > theta * max_{k != i}(-A(i,k)); rows whose off-diagonal maximum
/// of -A is non-positive get an empty strong set.
struct StrengthGraph {
  std::size_t n = 0;
  std::vector<std::vector<std::int32_t>> strong;

  std::size_t edge_count() const;
};

StrengthGraph build_strength(const SparseMatrix& a, double theta);

enum class PointType : std::uint8_t { fine, coarse };

/// Coarse/fine labeling. After the first pass every F row keeps at least
/// one strong C neighbor (cf_split enforces it by promotion); the
/// aggressive second pass deliberately gives that guarantee up.
struct CfSplitting {
  std::vector<PointType> type;

  std::size_t n_coarse() const;
  std::vector<std::int64_t> coarse_rows() const;
};

/// Instrumentation shared by the splitting passes and the multilevel setups.
struct CoarsenStats {
  std::size_t rows_split = 0;    // rows fed through a splitting pass
  std::size_t strength_nnz = 0;  // strength edges examined
};

/// Greedy first-pass splitting: measure of i = number of rows strongly
/// depending on i; repeatedly promote the untyped row of maximum measure
/// (ties to the lowest index) to C, mark its strong dependents F, and bump
/// the measures of the untyped rows those new F rows depend on.
CfSplitting cf_split(const StrengthGraph& s, CoarsenStats* stats = nullptr);

/// Second-pass coarsening of the C-set of `base` using distance-two
/// strength (paths of length <= 2 through any point). Demoted C rows become
/// F, even where that leaves F rows without a strong C neighbor; such rows
/// receive no coarse correction and are handled by the smoother alone.
CfSplitting aggressive_split(const StrengthGraph& s, const CfSplitting& base,
                             CoarsenStats* stats = nullptr);

/// Direct interpolation: unit rows at C points; an F row i weights its
/// strong C neighbors j by
///   w_ij = -(sum_k A(i,k)^- / sum_{j in C_i} A(i,j)^-) * A(i,j) / A(i,i)
/// where x^- is the negative part and k runs over all off-diagonals.
/// An F row with no strong C neighbor gets an empty row. Columns are
/// indexed by C points in ascending row order.
SparseMatrix build_interpolation(const SparseMatrix& a,
                                 const StrengthGraph& s,
                                 const CfSplitting& split);

struct CoarsenParams {
  double theta = 0.25;
  int agg = 0;           // aggressive passes applied on the first agg levels
  int max_levels = 25;   // total level cap, finest included
  std::size_t min_coarse = 50;
};

/// Galerkin hierarchy: levels[0] is the input; interpolation[l] maps level
/// l+1 to level l; coarse_to_fine[l] gives the fine row of each coarse row.
/// Coarsening stops at min_coarse rows, at max_levels, or when a level
/// stalls (no coarse rows or no reduction).
struct CoarsenHierarchy {
  std::vector<SparseMatrix> levels;
  std::vector<SparseMatrix> interpolation;
  std::vector<std::vector<std::int64_t>> coarse_to_fine;
  CoarsenStats stats;
};

CoarsenHierarchy coarsen_hierarchy(const SparseMatrix& a,
                                   const CoarsenParams& params);

/// Sum of stored entries over all levels divided by the finest level's.
double operator_complexity(const std::vector<SparseMatrix>& levels);

}  // namespace critkit
