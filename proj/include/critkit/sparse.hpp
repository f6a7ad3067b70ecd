#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace critkit {

/// Dense vector of finite doubles. Constructors taking values reject NaN/Inf;
/// in-place mutation through data()/operator[] is the caller's responsibility.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t n) : v_(n, 0.0) {}
  DenseVector(std::size_t n, double fill);
  explicit DenseVector(std::vector<double> values);
  DenseVector(std::initializer_list<double> values);

  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  double& operator[](std::size_t i) { return v_[i]; }
  const double& operator[](std::size_t i) const { return v_[i]; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  const std::vector<double>& values() const { return v_; }

  auto begin() { return v_.begin(); }
  auto end() { return v_.end(); }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

 private:
  std::vector<double> v_;
};

double dot(const DenseVector& a, const DenseVector& b);
double norm2(const DenseVector& a);
/// y += alpha * x
void axpy(double alpha, const DenseVector& x, DenseVector& y);
void scale(DenseVector& x, double alpha);
DenseVector subtract(const DenseVector& a, const DenseVector& b);

/// One (row, col, value) entry used to assemble a sparse matrix.
struct Triplet {
  std::int64_t row = 0;
  std::int64_t col = 0;
  double value = 0.0;
};

/// Compressed-sparse-row matrix. Invariants, enforced at construction:
/// offsets are monotone with row_offsets[0] == 0; column indices within each
/// row are strictly increasing (so duplicates cannot exist); all values are
/// finite. Explicitly stored zeros are retained.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  static SparseMatrix from_csr(std::size_t n_rows, std::size_t n_cols,
                               std::vector<std::int64_t> row_offsets,
                               std::vector<std::int32_t> col_indices,
                               std::vector<double> values);

  /// Assembles from unordered triplets; duplicate (row, col) pairs are
  /// rejected rather than summed.
  static SparseMatrix from_triplets(std::size_t n_rows, std::size_t n_cols,
                                    std::vector<Triplet> entries);

  static SparseMatrix identity(std::size_t n);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return n_cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<std::int64_t>& row_offsets() const { return row_offsets_; }
  const std::vector<std::int32_t>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }

  std::span<const std::int32_t> row_cols(std::size_t i) const {
    return {col_indices_.data() + row_offsets_[i],
            col_indices_.data() + row_offsets_[i + 1]};
  }
  std::span<const double> row_values(std::size_t i) const {
    return {values_.data() + row_offsets_[i],
            values_.data() + row_offsets_[i + 1]};
  }

  /// Stored value at (i, j), or 0.0 when the entry is not in the pattern.
  double at(std::size_t i, std::size_t j) const;

  /// Bytes used by the CSR arrays: 8 per value, 4 per column index, 8 per
  /// row offset. This is the figure reported by the memory estimator.
  std::size_t storage_bytes() const {
    return values_.size() * (sizeof(double) + sizeof(std::int32_t)) +
           row_offsets_.size() * sizeof(std::int64_t);
  }

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<std::int64_t> row_offsets_{0};
  std::vector<std::int32_t> col_indices_;
  std::vector<double> values_;
};

/// y = A x. Accumulation within a row runs in ascending column order, so the
/// result is bitwise deterministic.
DenseVector spmv(const SparseMatrix& a, const DenseVector& x);
/// y += alpha * A x
void spmv_add(const SparseMatrix& a, const DenseVector& x, double alpha,
              DenseVector& y);

SparseMatrix transpose(const SparseMatrix& a);

/// C = A B via a sparse row accumulator; result columns sorted ascending.
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);

/// P^T A P, staged as (P^T A) P. P maps coarse columns to fine rows, so P is
/// n_fine x n_coarse and A is n_fine x n_fine.
SparseMatrix galerkin_triple_product(const SparseMatrix& p,
                                     const SparseMatrix& a);

/// Principal submatrix A(rows, rows); `rows` must be strictly increasing and
/// in range. Entry order within rows is preserved.
SparseMatrix extract_principal_submatrix(const SparseMatrix& a,
                                         std::span<const std::int64_t> rows);

/// Coordinate text format: header "n_rows n_cols nnz", then one
/// "row col value" line per stored entry, 0-based indices.
void write_coordinate(const SparseMatrix& a, std::ostream& out);
SparseMatrix read_coordinate(std::istream& in);
void write_matrix_file(const SparseMatrix& a, const std::string& path);
SparseMatrix read_matrix_file(const std::string& path);

}  // namespace critkit
