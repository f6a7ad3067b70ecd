#include "critkit/sparse.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "critkit/errors.hpp"
#include "support/oracles.hpp"

namespace critkit {
namespace {

using testing::from_dense;
using testing::laplacian_1d;
using testing::random_banded;
using testing::random_vector;
using testing::to_dense;
using testing::to_eigen;

void expect_matrix_near(const SparseMatrix& a, const Eigen::MatrixXd& want,
                        double tol) {
  const Eigen::MatrixXd got = to_dense(a);
  ASSERT_EQ(got.rows(), want.rows());
  ASSERT_EQ(got.cols(), want.cols());
  EXPECT_LE((got - want).lpNorm<Eigen::Infinity>(), tol)
      << "max |difference| = " << (got - want).lpNorm<Eigen::Infinity>();
}

TEST(DenseVectorTest, BlasHelpers) {
  DenseVector x{1.0, -2.0, 3.0};
  const DenseVector y{4.0, 5.0, 6.0};
  EXPECT_DOUBLE_EQ(dot(x, y), 1.0 * 4.0 - 2.0 * 5.0 + 3.0 * 6.0);
  EXPECT_DOUBLE_EQ(norm2(y), std::sqrt(16.0 + 25.0 + 36.0));
  axpy(2.0, y, x);
  EXPECT_DOUBLE_EQ(x[0], 9.0);
  EXPECT_DOUBLE_EQ(x[2], 15.0);
  scale(x, 0.5);
  EXPECT_DOUBLE_EQ(x[1], 4.0);
  const DenseVector d = subtract(x, x);
  EXPECT_DOUBLE_EQ(norm2(d), 0.0);
}

TEST(SparseMatrixTest, FromTripletsSortsRowsAndColumns) {
  const SparseMatrix a = SparseMatrix::from_triplets(
      2, 3, {{1, 2, 6.0}, {0, 1, 2.0}, {1, 0, 4.0}, {0, 0, 1.0}});
  EXPECT_EQ(a.n_rows(), 2u);
  EXPECT_EQ(a.n_cols(), 3u);
  EXPECT_EQ(a.nnz(), 4u);
  EXPECT_EQ(a.row_offsets(), (std::vector<std::int64_t>{0, 2, 4}));
  EXPECT_EQ(a.col_indices(), (std::vector<std::int32_t>{0, 1, 0, 2}));
  EXPECT_DOUBLE_EQ(a.at(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(a.at(1, 1), 0.0);  // not stored
}

TEST(SparseMatrixTest, RejectsDuplicateTriplets) {
  EXPECT_THROW(
      SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}}),
      InvalidInputError);
}

TEST(SparseMatrixTest, RejectsMalformedCsr) {
  // Non-monotone offsets.
  EXPECT_THROW(SparseMatrix::from_csr(2, 2, {0, 2, 1}, {0, 1}, {1.0, 2.0}),
               InvalidInputError);
  // Columns not strictly increasing within a row.
  EXPECT_THROW(SparseMatrix::from_csr(1, 3, {0, 2}, {2, 1}, {1.0, 2.0}),
               InvalidInputError);
  EXPECT_THROW(SparseMatrix::from_csr(1, 3, {0, 2}, {1, 1}, {1.0, 2.0}),
               InvalidInputError);
  // Column out of range.
  EXPECT_THROW(SparseMatrix::from_csr(1, 2, {0, 1}, {2}, {1.0}),
               InvalidInputError);
  // Non-finite value.
  EXPECT_THROW(
      SparseMatrix::from_csr(1, 1, {0, 1}, {0},
                             {std::numeric_limits<double>::quiet_NaN()}),
      InvalidInputError);
}

TEST(SparseMatrixTest, ExplicitZerosAreStored) {
  const SparseMatrix a =
      SparseMatrix::from_csr(1, 2, {0, 2}, {0, 1}, {0.0, 3.0});
  EXPECT_EQ(a.nnz(), 2u);
  EXPECT_DOUBLE_EQ(a.at(0, 0), 0.0);
}

TEST(SparseMatrixTest, StorageBytesFormula) {
  // 10x10 fully stored: 100 entries at 12 bytes plus 11 offsets at 8.
  const SparseMatrix a = from_dense(Eigen::MatrixXd::Constant(10, 10, 1.0));
  ASSERT_EQ(a.nnz(), 100u);
  EXPECT_EQ(a.storage_bytes(), 100u * 12u + 11u * 8u);
  EXPECT_EQ(laplacian_1d(4).storage_bytes(), 10u * 12u + 5u * 8u);
}

TEST(SparseMatrixTest, SpmvMatchesDenseOracle) {
  const SparseMatrix a = random_banded(40, 3, 101);
  const DenseVector x = random_vector(40, 202);
  const DenseVector y = spmv(a, x);
  const Eigen::VectorXd want = to_dense(a) * to_eigen(x);
  for (std::size_t i = 0; i < y.size(); ++i) {
    EXPECT_NEAR(y[i], want(static_cast<Eigen::Index>(i)), 1e-12);
  }
}

TEST(SparseMatrixTest, SpmvAddAccumulatesScaled) {
  const SparseMatrix a = laplacian_1d(5);
  const DenseVector x = random_vector(5, 303);
  DenseVector y = random_vector(5, 404);
  const DenseVector y0 = y;
  spmv_add(a, x, -2.0, y);
  const DenseVector ax = spmv(a, x);
  for (std::size_t i = 0; i < y.size(); ++i) {
    EXPECT_NEAR(y[i], y0[i] - 2.0 * ax[i], 1e-14);
  }
}

TEST(SparseMatrixTest, SpmvRejectsDimensionMismatch) {
  EXPECT_THROW(spmv(laplacian_1d(4), DenseVector(3)), DimensionError);
}

TEST(SparseMatrixTest, TransposeIsExact) {
  const SparseMatrix a = random_banded(25, 4, 505);
  const SparseMatrix at = transpose(a);
  expect_matrix_near(at, to_dense(a).transpose().eval(), 0.0);
  // Round trip restores the original layout exactly.
  const SparseMatrix att = transpose(at);
  EXPECT_EQ(att.row_offsets(), a.row_offsets());
  EXPECT_EQ(att.col_indices(), a.col_indices());
  EXPECT_EQ(att.values(), a.values());
}

TEST(SparseMatrixTest, MultiplyMatchesDenseOracle) {
  const SparseMatrix a = random_banded(30, 2, 606);
  const SparseMatrix b = random_banded(30, 5, 707);
  const SparseMatrix c = multiply(a, b);
  expect_matrix_near(c, to_dense(a) * to_dense(b), 1e-12);
  // Result columns are strictly ascending in every row.
  for (std::size_t i = 0; i < c.n_rows(); ++i) {
    const auto cols = c.row_cols(i);
    for (std::size_t k = 1; k < cols.size(); ++k) {
      EXPECT_LT(cols[k - 1], cols[k]);
    }
  }
}

TEST(SparseMatrixTest, MultiplyIsBitwiseDeterministic) {
  const SparseMatrix a = random_banded(30, 4, 808);
  const SparseMatrix b = random_banded(30, 4, 909);
  const SparseMatrix c1 = multiply(a, b);
  const SparseMatrix c2 = multiply(a, b);
  EXPECT_EQ(c1.values(), c2.values());
  EXPECT_EQ(c1.col_indices(), c2.col_indices());
}

TEST(SparseMatrixTest, MultiplyRejectsDimensionMismatch) {
  EXPECT_THROW(multiply(laplacian_1d(4), laplacian_1d(5)), DimensionError);
}

TEST(SparseMatrixTest, GalerkinTripleProductMatchesDenseOracle) {
  const SparseMatrix a = random_banded(24, 3, 111);
  // Piecewise-constant interpolation onto 8 coarse columns.
  std::vector<Triplet> entries;
  for (std::int64_t i = 0; i < 24; ++i) {
    entries.push_back({i, i / 3, 1.0});
  }
  const SparseMatrix p = SparseMatrix::from_triplets(24, 8, entries);
  const SparseMatrix coarse = galerkin_triple_product(p, a);
  const Eigen::MatrixXd pd = to_dense(p);
  expect_matrix_near(coarse, pd.transpose() * to_dense(a) * pd, 1e-12);
}

TEST(SparseMatrixTest, ExtractPrincipalSubmatrix) {
  const SparseMatrix a = laplacian_1d(6);
  const std::vector<std::int64_t> rows{1, 2, 4};
  const SparseMatrix sub = extract_principal_submatrix(a, rows);
  Eigen::MatrixXd want(3, 3);
  want << 2.0, -1.0, 0.0,  //
      -1.0, 2.0, 0.0,      //
      0.0, 0.0, 2.0;
  expect_matrix_near(sub, want, 0.0);

  EXPECT_THROW(
      extract_principal_submatrix(a, std::vector<std::int64_t>{2, 1}),
      InvalidInputError);
  EXPECT_THROW(
      extract_principal_submatrix(a, std::vector<std::int64_t>{5, 6}),
      DimensionError);
}

TEST(SparseMatrixTest, CoordinateRoundTrip) {
  const SparseMatrix a = random_banded(12, 2, 121);
  std::stringstream stream;
  write_coordinate(a, stream);
  std::string header;
  std::getline(stream, header);
  EXPECT_EQ(header, "12 12 " + std::to_string(a.nnz()));
  stream.seekg(0);
  const SparseMatrix back = read_coordinate(stream);
  EXPECT_EQ(back.row_offsets(), a.row_offsets());
  EXPECT_EQ(back.col_indices(), a.col_indices());
  EXPECT_EQ(back.values(), a.values());
}

}  // namespace
}  // namespace critkit
