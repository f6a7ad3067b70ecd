#include "critkit/coarsen.hpp"

#include <gtest/gtest.h>

#include <vector>

#include "critkit/errors.hpp"
#include "support/oracles.hpp"

namespace critkit {
namespace {

using testing::from_eigen;
using testing::laplacian_1d;
using testing::laplacian_2d;
using testing::random_banded;
using testing::to_dense;

std::vector<PointType> types_of(const CfSplitting& split) { return split.type; }

/// Every fine row with a nonempty strong set must see at least one coarse
/// strong neighbor.
void expect_covered(const StrengthGraph& s, const CfSplitting& split) {
  for (std::size_t i = 0; i < s.n; ++i) {
    if (split.type[i] == PointType::coarse || s.strong[i].empty()) continue;
    bool covered = false;
    for (std::int32_t j : s.strong[i]) {
      covered = covered || split.type[j] == PointType::coarse;
    }
    EXPECT_TRUE(covered) << "fine row " << i << " has no strong coarse "
                         << "neighbor";
  }
}

TEST(StrengthGraphTest, ThresholdScalesWithRowMaximum) {
  // Row 0 couples with -1, -2, -4 and +3; the threshold is theta * 4.
  std::vector<Triplet> entries{{0, 0, 4.0}, {0, 1, -1.0}, {0, 2, -2.0},
                               {0, 3, -4.0}, {0, 4, 3.0}};
  for (std::int64_t i = 1; i < 5; ++i) entries.push_back({i, i, 1.0});
  const SparseMatrix a = SparseMatrix::from_triplets(5, 5, entries);

  EXPECT_EQ(build_strength(a, 0.0).strong[0],
            (std::vector<std::int32_t>{1, 2, 3}));
  EXPECT_EQ(build_strength(a, 0.25).strong[0],
            (std::vector<std::int32_t>{2, 3}));
  EXPECT_EQ(build_strength(a, 0.5).strong[0],
            (std::vector<std::int32_t>{3}));
  EXPECT_EQ(build_strength(a, 0.75).strong[0],
            (std::vector<std::int32_t>{3}));
  for (std::size_t i = 1; i < 5; ++i) {
    EXPECT_TRUE(build_strength(a, 0.0).strong[i].empty());
  }
}

TEST(StrengthGraphTest, PositiveCouplingsNeverCount) {
  const SparseMatrix a = SparseMatrix::from_triplets(
      2, 2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 2.0}});
  const StrengthGraph s = build_strength(a, 0.0);
  EXPECT_TRUE(s.strong[0].empty());
  EXPECT_TRUE(s.strong[1].empty());
  EXPECT_EQ(s.edge_count(), 0u);
}

TEST(StrengthGraphTest, StrongSetsShrinkMonotonicallyWithTheta) {
  const SparseMatrix a = random_banded(30, 3, 51);
  const std::vector<double> thetas{0.0, 0.25, 0.5, 0.75};
  StrengthGraph prev = build_strength(a, thetas[0]);
  for (std::size_t t = 1; t < thetas.size(); ++t) {
    const StrengthGraph next = build_strength(a, thetas[t]);
    EXPECT_LE(next.edge_count(), prev.edge_count());
    for (std::size_t i = 0; i < a.n_rows(); ++i) {
      for (std::int32_t j : next.strong[i]) {
        EXPECT_TRUE(std::binary_search(prev.strong[i].begin(),
                                       prev.strong[i].end(), j))
            << "theta growth added edge (" << i << ", " << j << ")";
      }
    }
    prev = next;
  }
}

TEST(StrengthGraphTest, ValidatesInput) {
  const SparseMatrix rect =
      SparseMatrix::from_triplets(2, 3, {{0, 0, 1.0}, {1, 1, 1.0}});
  EXPECT_THROW(build_strength(rect, 0.25), DimensionError);
  const SparseMatrix a = laplacian_1d(3);
  EXPECT_THROW(build_strength(a, 1.0), InvalidInputError);
  EXPECT_THROW(build_strength(a, -0.1), InvalidInputError);
}

TEST(CfSplitTest, PathOfSevenSplitsToAlternatingInterior) {
  const StrengthGraph s = build_strength(laplacian_1d(7), 0.25);
  const CfSplitting split = cf_split(s);
  EXPECT_EQ(split.coarse_rows(), (std::vector<std::int64_t>{1, 3, 5}));
  EXPECT_EQ(split.n_coarse(), 3u);
  expect_covered(s, split);
}

TEST(CfSplitTest, FineRowsAlwaysKeepStrongCoarseNeighbor) {
  for (std::uint32_t seed : {7u, 8u, 9u}) {
    const SparseMatrix a = random_banded(40, 2, seed);
    const StrengthGraph s = build_strength(a, 0.25);
    expect_covered(s, cf_split(s));
  }
  const StrengthGraph grid = build_strength(laplacian_2d(9, 7), 0.25);
  expect_covered(grid, cf_split(grid));
}

TEST(CfSplitTest, DisconnectedRowsAllBecomeCoarse) {
  std::vector<Triplet> entries;
  for (std::int64_t i = 0; i < 4; ++i) entries.push_back({i, i, 1.0 + i});
  const SparseMatrix diag = SparseMatrix::from_triplets(4, 4, entries);
  const CfSplitting split = cf_split(build_strength(diag, 0.25));
  EXPECT_EQ(split.n_coarse(), 4u);
}

TEST(CfSplitTest, StatsAccumulateRowsAndEdges) {
  const StrengthGraph s = build_strength(laplacian_1d(7), 0.25);
  CoarsenStats stats;
  cf_split(s, &stats);
  EXPECT_EQ(stats.rows_split, 7u);
  EXPECT_EQ(stats.strength_nnz, 12u);  // 6 undirected path edges, both ways
  cf_split(s, &stats);
  EXPECT_EQ(stats.rows_split, 14u);
}

TEST(AggressiveSplitTest, PathOfNineKeepsDistanceTwoSurvivorsOnly) {
  const StrengthGraph s = build_strength(laplacian_1d(9), 0.25);
  const CfSplitting base = cf_split(s);
  ASSERT_EQ(base.coarse_rows(), (std::vector<std::int64_t>{1, 3, 5, 7}));

  // The distance-two graph over {1, 3, 5, 7} is a four-point path whose
  // greedy split keeps {3, 7}. No coverage promotion follows: rows like 0
  // and 5 end up with all-fine strong sets on purpose.
  const CfSplitting aggressive = aggressive_split(s, base);
  EXPECT_EQ(aggressive.coarse_rows(), (std::vector<std::int64_t>{3, 7}));
}

TEST(AggressiveSplitTest, StatsCountSecondPassGraph) {
  const StrengthGraph s = build_strength(laplacian_1d(9), 0.25);
  CoarsenStats stats;
  const CfSplitting base = cf_split(s, &stats);
  aggressive_split(s, base, &stats);
  // First pass: 9 rows, 16 edges. Second pass runs on the 4 coarse rows
  // whose distance-two graph is a path (6 edges).
  EXPECT_EQ(stats.rows_split, 13u);
  EXPECT_EQ(stats.strength_nnz, 22u);
}

TEST(AggressiveSplitTest, GridResultIsDeterministicAndNoDenser) {
  const StrengthGraph s = build_strength(laplacian_2d(8, 8), 0.25);
  const CfSplitting base = cf_split(s);
  const CfSplitting once = aggressive_split(s, base);
  const CfSplitting twice = aggressive_split(s, base);
  EXPECT_EQ(types_of(once), types_of(twice));
  EXPECT_LT(once.n_coarse(), base.n_coarse());
  EXPECT_GT(once.n_coarse(), 0u);
}

TEST(AggressiveSplitTest, RejectsMismatchedSplitting) {
  const StrengthGraph s = build_strength(laplacian_1d(5), 0.25);
  CfSplitting wrong;
  wrong.type.assign(4, PointType::fine);
  EXPECT_THROW(aggressive_split(s, wrong), DimensionError);
}

TEST(InterpolationTest, PathOfSevenHasHalfWeights) {
  const SparseMatrix a = laplacian_1d(7);
  const StrengthGraph s = build_strength(a, 0.25);
  const SparseMatrix p = build_interpolation(a, s, cf_split(s));
  Eigen::MatrixXd want(7, 3);
  want << 0.5, 0, 0,  //
      1, 0, 0,        //
      0.5, 0.5, 0,    //
      0, 1, 0,        //
      0, 0.5, 0.5,    //
      0, 0, 1,        //
      0, 0, 0.5;
  EXPECT_EQ(to_dense(p), want);
}

TEST(InterpolationTest, WeakCouplingsFoldIntoTheRowRatio) {
  // Row 0: diagonal 2, strong neighbor -1 (coarse), weak neighbor -0.1.
  // The weak mass is redistributed: w = ((1 + 0.1) / 1) * (1 / 2).
  const SparseMatrix a = SparseMatrix::from_triplets(
      3, 3,
      {{0, 0, 2.0}, {0, 1, -1.0}, {0, 2, -0.1},
       {1, 0, -1.0}, {1, 1, 2.0}, {1, 2, -1.0},
       {2, 0, -0.1}, {2, 1, -1.0}, {2, 2, 2.0}});
  const StrengthGraph s = build_strength(a, 0.5);
  const CfSplitting split = cf_split(s);
  ASSERT_EQ(split.coarse_rows(), (std::vector<std::int64_t>{1}));
  const SparseMatrix p = build_interpolation(a, s, split);
  ASSERT_EQ(p.n_cols(), 1u);
  EXPECT_DOUBLE_EQ(to_dense(p)(0, 0), (1.0 + 0.1) / 1.0 * (1.0 / 2.0));
  EXPECT_DOUBLE_EQ(to_dense(p)(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(to_dense(p)(2, 0), (1.0 + 0.1) / 1.0 * (1.0 / 2.0));
}

TEST(InterpolationTest, GalerkinProductMatchesDenseTripleProduct) {
  const SparseMatrix a = laplacian_1d(9);
  const StrengthGraph s = build_strength(a, 0.25);
  const CfSplitting split = cf_split(s);
  const SparseMatrix p = build_interpolation(a, s, split);
  const SparseMatrix coarse = galerkin_triple_product(p, a);
  const Eigen::MatrixXd dp = to_dense(p);
  const Eigen::MatrixXd want = dp.transpose() * to_dense(a) * dp;
  EXPECT_LT((to_dense(coarse) - want).lpNorm<Eigen::Infinity>(), 1e-14);
}

TEST(InterpolationTest, UncoveredFineRowGetsEmptyRow) {
  // Path of three split as {C, F, F}: row 1 interpolates from its strong C
  // neighbor, row 2 sees only fine neighbors and receives no weights.
  const SparseMatrix a = laplacian_1d(3);
  const StrengthGraph s = build_strength(a, 0.25);
  CfSplitting split;
  split.type = {PointType::coarse, PointType::fine, PointType::fine};
  const SparseMatrix p = build_interpolation(a, s, split);
  EXPECT_EQ(p.n_rows(), 3u);
  EXPECT_EQ(p.n_cols(), 1u);
  EXPECT_EQ(p.nnz(), 2u);
  EXPECT_DOUBLE_EQ(p.at(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(p.at(1, 0), 1.0);  // (-2 / -1) * (-(-1) / 2)
  EXPECT_TRUE(p.row_cols(2).empty());

  CfSplitting wrong_size;
  wrong_size.type.assign(4, PointType::fine);
  EXPECT_THROW(build_interpolation(a, s, wrong_size), DimensionError);
}

TEST(InterpolationTest, RejectsZeroDiagonalFineRow) {
  const SparseMatrix a = SparseMatrix::from_triplets(
      2, 2, {{0, 1, -1.0}, {1, 0, -1.0}, {1, 1, 2.0}});
  const StrengthGraph s = build_strength(a, 0.25);
  CfSplitting split;
  split.type = {PointType::fine, PointType::coarse};
  EXPECT_THROW(build_interpolation(a, s, split), SingularError);
}

TEST(HierarchyTest, PathHierarchyKeepsGalerkinInvariants) {
  const SparseMatrix a = laplacian_1d(1025);
  const CoarsenParams params{.theta = 0.25, .agg = 0, .max_levels = 25,
                             .min_coarse = 8};
  const CoarsenHierarchy h = coarsen_hierarchy(a, params);
  ASSERT_GE(h.levels.size(), 4u);
  ASSERT_EQ(h.interpolation.size(), h.levels.size() - 1);
  ASSERT_EQ(h.coarse_to_fine.size(), h.levels.size() - 1);
  EXPECT_LE(h.levels.back().n_rows(), params.min_coarse);

  for (std::size_t l = 0; l + 1 < h.levels.size(); ++l) {
    const SparseMatrix& fine = h.levels[l];
    const SparseMatrix& coarse = h.levels[l + 1];
    const SparseMatrix& p = h.interpolation[l];
    EXPECT_LT(coarse.n_rows(), fine.n_rows());
    EXPECT_EQ(p.n_rows(), fine.n_rows());
    EXPECT_EQ(p.n_cols(), coarse.n_rows());
    ASSERT_EQ(h.coarse_to_fine[l].size(), coarse.n_rows());
    EXPECT_TRUE(std::is_sorted(h.coarse_to_fine[l].begin(),
                               h.coarse_to_fine[l].end()));
    // Rebuilding the Galerkin product reproduces the stored level exactly.
    const SparseMatrix redo = galerkin_triple_product(p, fine);
    EXPECT_EQ(redo.values(), coarse.values());
    EXPECT_EQ(redo.col_indices(), coarse.col_indices());
  }
  EXPECT_GE(operator_complexity(h.levels), 1.0);
  EXPECT_EQ(h.stats.rows_split, [&h] {
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < h.levels.size(); ++l) {
      total += h.levels[l].n_rows();
    }
    return total;
  }());
}

TEST(HierarchyTest, StallsOnDiagonalMatrix) {
  std::vector<Triplet> entries;
  for (std::int64_t i = 0; i < 6; ++i) entries.push_back({i, i, 2.0});
  const SparseMatrix diag = SparseMatrix::from_triplets(6, 6, entries);
  const CoarsenHierarchy h = coarsen_hierarchy(
      diag, {.theta = 0.25, .agg = 0, .max_levels = 10, .min_coarse = 2});
  EXPECT_EQ(h.levels.size(), 1u);
  EXPECT_TRUE(h.interpolation.empty());
}

TEST(HierarchyTest, RespectsLevelAndSizeCaps) {
  const SparseMatrix a = laplacian_1d(101);
  const CoarsenHierarchy capped = coarsen_hierarchy(
      a, {.theta = 0.25, .agg = 0, .max_levels = 2, .min_coarse = 1});
  EXPECT_EQ(capped.levels.size(), 2u);

  const CoarsenHierarchy sized = coarsen_hierarchy(
      a, {.theta = 0.25, .agg = 0, .max_levels = 25, .min_coarse = 60});
  EXPECT_EQ(sized.levels.size(), 2u);
  EXPECT_LE(sized.levels.back().n_rows(), 60u);

  EXPECT_THROW(
      coarsen_hierarchy(
          a, {.theta = 0.25, .agg = 0, .max_levels = 0, .min_coarse = 1}),
      InvalidInputError);
}

TEST(HierarchyTest, AggressiveLevelsCoarsenAtLeastAsHard) {
  const SparseMatrix a = laplacian_2d(12, 12);
  const CoarsenHierarchy standard = coarsen_hierarchy(
      a, {.theta = 0.25, .agg = 0, .max_levels = 25, .min_coarse = 8});
  const CoarsenHierarchy aggressive = coarsen_hierarchy(
      a, {.theta = 0.25, .agg = 1, .max_levels = 25, .min_coarse = 8});
  ASSERT_GE(standard.levels.size(), 2u);
  ASSERT_GE(aggressive.levels.size(), 2u);
  EXPECT_LE(aggressive.levels[1].n_rows(), standard.levels[1].n_rows());
}

TEST(HierarchyTest, OperatorComplexityIsTotalOverFinest) {
  const std::vector<SparseMatrix> levels{laplacian_1d(9), laplacian_1d(4)};
  // 25 and 10 stored entries.
  EXPECT_DOUBLE_EQ(operator_complexity(levels), 35.0 / 25.0);
  EXPECT_THROW(operator_complexity({}), InvalidInputError);
}

}  // namespace
}  // namespace critkit
