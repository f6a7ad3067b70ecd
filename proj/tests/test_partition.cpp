#include "critkit/partition.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "critkit/errors.hpp"
#include "support/oracles.hpp"

namespace critkit {
namespace {

using testing::laplacian_1d;
using testing::laplacian_2d;

void expect_valid_partition(const Partition& p, std::size_t n) {
  ASSERT_EQ(p.owner.size(), n);
  std::vector<std::size_t> counts(p.n_parts(), 0);
  for (std::int32_t rank : p.owner) {
    ASSERT_GE(rank, 0);
    ASSERT_LT(static_cast<std::size_t>(rank), p.n_parts());
    ++counts[static_cast<std::size_t>(rank)];
  }
  const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
  // Balanced within one row per bisection stage.
  EXPECT_LE(*hi - *lo, p.np1 + p.np2);
  // rows_of enumerates each rank's rows ascending and disjointly.
  std::size_t total = 0;
  for (std::size_t rank = 0; rank < p.n_parts(); ++rank) {
    const auto rows = p.rows_of(rank);
    EXPECT_EQ(rows.size(), counts[rank]);
    EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end()));
    total += rows.size();
  }
  EXPECT_EQ(total, n);
}

TEST(PartitionTest, PathGraphSplitsContiguously) {
  const Partition p = hierarchical_partition(laplacian_1d(8), 2, 1);
  EXPECT_EQ(p.owner,
            (std::vector<std::int32_t>{0, 0, 0, 0, 1, 1, 1, 1}));
}

TEST(PartitionTest, OddPathPutsExtraRowInFirstPart) {
  const Partition p = hierarchical_partition(laplacian_1d(7), 2, 1);
  EXPECT_EQ(p.owner, (std::vector<std::int32_t>{0, 0, 0, 0, 1, 1, 1}));
}

TEST(PartitionTest, TwoStageRanksNestWithinFirstStage) {
  const Partition p = hierarchical_partition(laplacian_1d(8), 2, 2);
  EXPECT_EQ(p.np1, 2u);
  EXPECT_EQ(p.np2, 2u);
  EXPECT_EQ(p.owner,
            (std::vector<std::int32_t>{0, 0, 1, 1, 2, 2, 3, 3}));
}

TEST(PartitionTest, DisconnectedBlocksSplitAlongComponents) {
  // Block-diagonal pair of 4-vertex paths: the bisection keeps each block
  // whole, which is what makes replicated per-component partitions line up
  // with a full-matrix partition of identical blocks.
  const SparseMatrix block = laplacian_1d(4);
  std::vector<Triplet> entries;
  for (std::size_t b = 0; b < 2; ++b) {
    const auto off = static_cast<std::int64_t>(b * 4);
    for (std::size_t i = 0; i < 4; ++i) {
      const auto cols = block.row_cols(i);
      const auto vals = block.row_values(i);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        entries.push_back(
            {off + static_cast<std::int64_t>(i), off + cols[k], vals[k]});
      }
    }
  }
  const SparseMatrix pair = SparseMatrix::from_triplets(8, 8, entries);
  const Partition p = hierarchical_partition(pair, 2, 1);
  EXPECT_EQ(p.owner,
            (std::vector<std::int32_t>{0, 0, 0, 0, 1, 1, 1, 1}));
}

TEST(PartitionTest, GridPartitionIsBalancedAndDeterministic) {
  const SparseMatrix grid = laplacian_2d(6, 6);
  const Partition p1 = hierarchical_partition(grid, 2, 2);
  const Partition p2 = hierarchical_partition(grid, 2, 2);
  EXPECT_EQ(p1.owner, p2.owner);
  expect_valid_partition(p1, 36);
  const Partition deep = hierarchical_partition(grid, 3, 2);
  expect_valid_partition(deep, 36);
}

TEST(PartitionTest, SinglePartOwnsEverything) {
  const Partition p = hierarchical_partition(laplacian_1d(5), 1, 1);
  EXPECT_EQ(p.n_parts(), 1u);
  for (std::int32_t rank : p.owner) EXPECT_EQ(rank, 0);
}

TEST(PartitionTest, RejectsInvalidCounts) {
  EXPECT_THROW(hierarchical_partition(laplacian_1d(4), 0, 1),
               InvalidInputError);
  EXPECT_THROW(hierarchical_partition(laplacian_1d(4), 1, 0),
               InvalidInputError);
  // More parts than rows cannot be satisfied.
  EXPECT_THROW(hierarchical_partition(laplacian_1d(3), 4, 1),
               PartitionError);
}

TEST(PartitionTest, RejectsNonSquarePattern) {
  const SparseMatrix rect =
      SparseMatrix::from_triplets(2, 3, {{0, 0, 1.0}, {1, 2, 1.0}});
  EXPECT_THROW(hierarchical_partition(rect, 2, 1), DimensionError);
}

}  // namespace
}  // namespace critkit
