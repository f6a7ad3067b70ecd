#include "critkit/schwarz.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <vector>

#include "critkit/errors.hpp"
#include "support/oracles.hpp"

namespace critkit {
namespace {

using testing::from_eigen;
using testing::laplacian_1d;
using testing::random_banded;
using testing::random_vector;
using testing::to_dense;
using testing::to_eigen;

/// Seven-row tridiagonal fixture with recognizable values: entry (i, j)
/// holds 10 (i+1) + (j+1), e.g. 34 at row 2, column 3.
SparseMatrix tridiagonal_7() {
  std::vector<Triplet> entries;
  for (std::int64_t i = 0; i < 7; ++i) {
    for (std::int64_t j = std::max<std::int64_t>(0, i - 1);
         j <= std::min<std::int64_t>(6, i + 1); ++j) {
      entries.push_back({i, j, 10.0 * (i + 1) + (j + 1)});
    }
  }
  return SparseMatrix::from_triplets(7, 7, entries);
}

TEST(GrowOverlapTest, TridiagonalLayersGrowOneNeighborPerDelta) {
  const SparseMatrix m = tridiagonal_7();
  const std::vector<std::int64_t> left{0, 1, 2, 3};
  const std::vector<std::int64_t> right{4, 5, 6};

  EXPECT_EQ(grow_overlap(m, left, 0), left);
  EXPECT_EQ(grow_overlap(m, right, 0), right);
  EXPECT_EQ(grow_overlap(m, left, 1),
            (std::vector<std::int64_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(grow_overlap(m, right, 1),
            (std::vector<std::int64_t>{3, 4, 5, 6}));
  EXPECT_EQ(grow_overlap(m, left, 2),
            (std::vector<std::int64_t>{0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(grow_overlap(m, right, 2),
            (std::vector<std::int64_t>{2, 3, 4, 5, 6}));
}

TEST(GrowOverlapTest, SubmatricesMatchHandValues) {
  const SparseMatrix m = tridiagonal_7();
  const std::vector<std::int64_t> right{4, 5, 6};
  // delta = 1 block over rows {3, 4, 5, 6}.
  const SparseMatrix sub =
      extract_principal_submatrix(m, grow_overlap(m, right, 1));
  Eigen::MatrixXd want(4, 4);
  want << 44, 45, 0, 0,  //
      54, 55, 56, 0,     //
      0, 65, 66, 67,     //
      0, 0, 76, 77;
  EXPECT_EQ(to_dense(sub), want);
  // Pattern exactness: the tridiagonal profile survives extraction.
  EXPECT_EQ(sub.nnz(), 10u);
}

TEST(GrowOverlapTest, ValidatesArguments) {
  const SparseMatrix m = tridiagonal_7();
  EXPECT_THROW(grow_overlap(m, std::vector<std::int64_t>{9}, 1),
               DimensionError);
  EXPECT_THROW(grow_overlap(m, std::vector<std::int64_t>{0}, -1),
               InvalidInputError);
}

TEST(OverlapMapTest, BuildsValidatedPerRankSets) {
  const SparseMatrix m = tridiagonal_7();
  const Partition p = hierarchical_partition(m, 2, 1);
  const OverlapMap map = build_overlap_map(m, p, 1);
  ASSERT_EQ(map.n_ranks(), 2u);
  EXPECT_EQ(map.owned[0], (std::vector<std::int64_t>{0, 1, 2, 3}));
  EXPECT_EQ(map.owned[1], (std::vector<std::int64_t>{4, 5, 6}));
  EXPECT_EQ(map.overlap[0], (std::vector<std::int64_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(map.overlap[1], (std::vector<std::int64_t>{3, 4, 5, 6}));
  EXPECT_NO_THROW(map.validate());

  OverlapMap broken = map;
  broken.owned[1] = {3, 4, 5, 6};  // rows 3 owned twice
  EXPECT_THROW(broken.validate(), InvalidInputError);
}

TEST(SorSolveTest, OneSweepHandValue) {
  // [4 1; 2 5] x = (9, 19), one forward sweep from zero:
  // x0 = 9/4, x1 = (19 - 2 x0) / 5.
  const SparseMatrix a = SparseMatrix::from_triplets(
      2, 2, {{0, 0, 4.0}, {0, 1, 1.0}, {1, 0, 2.0}, {1, 1, 5.0}});
  const DenseVector x = sor_solve(a, DenseVector{9.0, 19.0}, 1, 1.0);
  EXPECT_DOUBLE_EQ(x[0], 2.25);
  EXPECT_DOUBLE_EQ(x[1], (19.0 - 2.0 * 2.25) / 5.0);
}

TEST(SorSolveTest, ManySweepsApproachDirectSolve) {
  const SparseMatrix a = random_banded(12, 2, 88);
  const DenseVector b = random_vector(12, 89);
  const DenseVector x = sor_solve(a, b, 400, 1.2);
  const Eigen::VectorXd want = to_dense(a).partialPivLu().solve(to_eigen(b));
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_NEAR(x[i], want(static_cast<Eigen::Index>(i)), 1e-9);
  }
}

TEST(SorSolveTest, IsLinearInRightHandSide) {
  const SparseMatrix a = random_banded(10, 3, 90);
  const DenseVector b1 = random_vector(10, 91);
  const DenseVector b2 = random_vector(10, 92);
  DenseVector combo(10);
  for (std::size_t i = 0; i < 10; ++i) combo[i] = 2.0 * b1[i] - 3.0 * b2[i];
  const DenseVector x1 = sor_solve(a, b1, 3, 1.0);
  const DenseVector x2 = sor_solve(a, b2, 3, 1.0);
  const DenseVector xc = sor_solve(a, combo, 3, 1.0);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_NEAR(xc[i], 2.0 * x1[i] - 3.0 * x2[i], 1e-12);
  }
}

TEST(SorSolveTest, ValidatesInput) {
  const SparseMatrix a = laplacian_1d(3);
  EXPECT_THROW(sor_solve(a, DenseVector(3), 1, 0.0), InvalidInputError);
  EXPECT_THROW(sor_solve(a, DenseVector(3), 1, 2.0), InvalidInputError);
  EXPECT_THROW(sor_solve(a, DenseVector(3), 0, 1.0), InvalidInputError);
  const SparseMatrix zero_diag =
      SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}});
  EXPECT_THROW(sor_solve(zero_diag, DenseVector(2), 1, 1.0), SingularError);
}

TEST(RasTest, ExactSubdomainSolvesMatchDenseComposition) {
  const SparseMatrix m = random_banded(20, 2, 314);
  const Partition p = hierarchical_partition(m, 2, 2);
  const OverlapMap map = build_overlap_map(m, p, 1);
  const RasPreconditioner ras(m, map, {.sweeps = 1, .omega = 1.0,
                                       .exact = true});
  const DenseVector r = random_vector(20, 315);
  const DenseVector got = ras.apply(r);

  // Independent composition: sum over ranks of scatter(owned) of the dense
  // subdomain solve of gather(overlap).
  const Eigen::MatrixXd full = to_dense(m);
  Eigen::VectorXd want = Eigen::VectorXd::Zero(20);
  for (std::size_t rank = 0; rank < map.n_ranks(); ++rank) {
    const auto& rows = map.overlap[rank];
    Eigen::MatrixXd sub(rows.size(), rows.size());
    Eigen::VectorXd local(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      local(static_cast<Eigen::Index>(i)) = r[rows[i]];
      for (std::size_t j = 0; j < rows.size(); ++j) {
        sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            full(rows[i], rows[j]);
      }
    }
    const Eigen::VectorXd solved = sub.partialPivLu().solve(local);
    for (const std::int64_t row : map.owned[rank]) {
      const auto it = std::lower_bound(rows.begin(), rows.end(), row);
      want(row) = solved(it - rows.begin());
    }
  }
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(got[i], want(static_cast<Eigen::Index>(i)), 1e-12);
  }
}

TEST(RasTest, CachedPreconditionerMatchesOneShotApply) {
  const SparseMatrix m = random_banded(16, 2, 316);
  const Partition p = hierarchical_partition(m, 4, 1);
  const OverlapMap map = build_overlap_map(m, p, 1);
  const RasPreconditioner ras(m, map, {.sweeps = 2, .omega = 1.1,
                                       .exact = false});
  const DenseVector r = random_vector(16, 317);
  const DenseVector cached = ras.apply(r);
  const DenseVector direct = ras_apply(m, map, r, 2, 1.1);
  EXPECT_EQ(cached.values(), direct.values());
}

TEST(RasTest, ThreadCapDoesNotChangeResults) {
  const SparseMatrix m = random_banded(24, 3, 999);
  const Partition p = hierarchical_partition(m, 4, 1);
  const OverlapMap map = build_overlap_map(m, p, 1);
  const DenseVector r = random_vector(24, 998);

  ::setenv("CRITKIT_THREADS", "1", 1);
  const RasPreconditioner sequential(m, map, {.sweeps = 1, .omega = 1.0,
                                              .exact = true});
  const DenseVector serial = sequential.apply(r);

  ::setenv("CRITKIT_THREADS", "4", 1);
  const RasPreconditioner threaded(m, map, {.sweeps = 1, .omega = 1.0,
                                            .exact = true});
  const DenseVector parallel = threaded.apply(r);
  ::unsetenv("CRITKIT_THREADS");

  // Owned rows are disjoint, so the scatter is race-free and bitwise stable.
  EXPECT_EQ(serial.values(), parallel.values());
}

TEST(RasTest, StorageBytesCoversCachedBlocks) {
  const SparseMatrix m = laplacian_1d(10);
  const Partition p = hierarchical_partition(m, 2, 1);
  const OverlapMap map = build_overlap_map(m, p, 1);
  const RasPreconditioner sor_based(m, map, {.sweeps = 1, .omega = 1.0,
                                             .exact = false});
  std::size_t want = 0;
  for (const auto& rows : map.overlap) {
    want += extract_principal_submatrix(m, rows).storage_bytes();
  }
  EXPECT_EQ(sor_based.storage_bytes(), want);
  const RasPreconditioner exact(m, map, {.sweeps = 1, .omega = 1.0,
                                         .exact = true});
  EXPECT_GT(exact.storage_bytes(), want);  // adds dense factors
}

}  // namespace
}  // namespace critkit
