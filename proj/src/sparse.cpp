#include "critkit/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "critkit/errors.hpp"

namespace critkit {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw InvalidInputError(std::string(what) + ": non-finite value");
    }
  }
}

}  // namespace

DenseVector::DenseVector(std::size_t n, double fill) : v_(n, fill) {
  if (!std::isfinite(fill)) {
    throw InvalidInputError("DenseVector: non-finite fill value");
  }
}

DenseVector::DenseVector(std::vector<double> values) : v_(std::move(values)) {
  require_finite(v_, "DenseVector");
}

DenseVector::DenseVector(std::initializer_list<double> values)
    : DenseVector(std::vector<double>(values)) {}

double dot(const DenseVector& a, const DenseVector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("dot: size mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const DenseVector& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const DenseVector& x, DenseVector& y) {
  if (x.size() != y.size()) {
    throw DimensionError("axpy: size mismatch");
  }
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(DenseVector& x, double alpha) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] *= alpha;
}

DenseVector subtract(const DenseVector& a, const DenseVector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("subtract: size mismatch");
  }
  DenseVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

SparseMatrix SparseMatrix::from_csr(std::size_t n_rows, std::size_t n_cols,
                                    std::vector<std::int64_t> row_offsets,
                                    std::vector<std::int32_t> col_indices,
                                    std::vector<double> values) {
  if (row_offsets.size() != n_rows + 1) {
    throw InvalidInputError("from_csr: row_offsets must have n_rows + 1 entries");
  }
  if (row_offsets.front() != 0) {
    throw InvalidInputError("from_csr: row_offsets[0] must be 0");
  }
  if (col_indices.size() != values.size()) {
    throw InvalidInputError("from_csr: col_indices/values length mismatch");
  }
  if (row_offsets.back() != static_cast<std::int64_t>(values.size())) {
    throw InvalidInputError("from_csr: last offset must equal nnz");
  }
  for (std::size_t i = 0; i < n_rows; ++i) {
    if (row_offsets[i] > row_offsets[i + 1]) {
      throw InvalidInputError("from_csr: offsets not monotone");
    }
    for (std::int64_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
      if (col_indices[k] < 0 ||
          col_indices[k] >= static_cast<std::int64_t>(n_cols)) {
        throw InvalidInputError("from_csr: column index out of range");
      }
      if (k > row_offsets[i] && col_indices[k] <= col_indices[k - 1]) {
        throw InvalidInputError(
            "from_csr: column indices must be strictly increasing per row");
      }
    }
  }
  require_finite(values, "from_csr");
  SparseMatrix m;
  m.n_rows_ = n_rows;
  m.n_cols_ = n_cols;
  m.row_offsets_ = std::move(row_offsets);
  m.col_indices_ = std::move(col_indices);
  m.values_ = std::move(values);
  return m;
}

SparseMatrix SparseMatrix::from_triplets(std::size_t n_rows,
                                         std::size_t n_cols,
                                         std::vector<Triplet> entries) {
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= static_cast<std::int64_t>(n_rows) || t.col < 0 ||
        t.col >= static_cast<std::int64_t>(n_cols)) {
      throw InvalidInputError("from_triplets: entry out of range");
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  for (std::size_t k = 1; k < entries.size(); ++k) {
    if (entries[k].row == entries[k - 1].row &&
        entries[k].col == entries[k - 1].col) {
      throw InvalidInputError(
          "from_triplets: duplicate entry at (" +
          std::to_string(entries[k].row) + ", " +
          std::to_string(entries[k].col) + ")");
    }
  }
  std::vector<std::int64_t> offsets(n_rows + 1, 0);
  std::vector<std::int32_t> cols(entries.size());
  std::vector<double> vals(entries.size());
  for (const Triplet& t : entries) ++offsets[t.row + 1];
  for (std::size_t i = 0; i < n_rows; ++i) offsets[i + 1] += offsets[i];
  for (std::size_t k = 0; k < entries.size(); ++k) {
    cols[k] = static_cast<std::int32_t>(entries[k].col);
    vals[k] = entries[k].value;
  }
  return from_csr(n_rows, n_cols, std::move(offsets), std::move(cols),
                  std::move(vals));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::int64_t> offsets(n + 1);
  std::vector<std::int32_t> cols(n);
  std::vector<double> vals(n, 1.0);
  for (std::size_t i = 0; i <= n; ++i) offsets[i] = static_cast<std::int64_t>(i);
  for (std::size_t i = 0; i < n; ++i) cols[i] = static_cast<std::int32_t>(i);
  return from_csr(n, n, std::move(offsets), std::move(cols), std::move(vals));
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= n_rows_ || j >= n_cols_) {
    throw DimensionError("at: index out of range");
  }
  auto cols = row_cols(i);
  auto it = std::lower_bound(cols.begin(), cols.end(),
                             static_cast<std::int32_t>(j));
  if (it == cols.end() || *it != static_cast<std::int32_t>(j)) return 0.0;
  return values_[row_offsets_[i] + (it - cols.begin())];
}

DenseVector spmv(const SparseMatrix& a, const DenseVector& x) {
  DenseVector y(a.n_rows());
  spmv_add(a, x, 1.0, y);
  return y;
}

void spmv_add(const SparseMatrix& a, const DenseVector& x, double alpha,
              DenseVector& y) {
  if (x.size() != a.n_cols() || y.size() != a.n_rows()) {
    throw DimensionError("spmv: shape mismatch");
  }
  const auto& offsets = a.row_offsets();
  const auto& cols = a.col_indices();
  const auto& vals = a.values();
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    double s = 0.0;
    for (std::int64_t k = offsets[i]; k < offsets[i + 1]; ++k) {
      s += vals[k] * x[cols[k]];
    }
    y[i] += alpha * s;
  }
}

SparseMatrix transpose(const SparseMatrix& a) {
  std::vector<std::int64_t> offsets(a.n_cols() + 1, 0);
  std::vector<std::int32_t> cols(a.nnz());
  std::vector<double> vals(a.nnz());
  for (std::int32_t c : a.col_indices()) ++offsets[c + 1];
  for (std::size_t j = 0; j < a.n_cols(); ++j) offsets[j + 1] += offsets[j];
  std::vector<std::int64_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    auto rc = a.row_cols(i);
    auto rv = a.row_values(i);
    for (std::size_t k = 0; k < rc.size(); ++k) {
      std::int64_t slot = cursor[rc[k]]++;
      cols[slot] = static_cast<std::int32_t>(i);
      vals[slot] = rv[k];
    }
  }
  return SparseMatrix::from_csr(a.n_cols(), a.n_rows(), std::move(offsets),
                                std::move(cols), std::move(vals));
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.n_cols() != b.n_rows()) {
    throw DimensionError("multiply: inner dimension mismatch");
  }
  std::vector<std::int64_t> offsets(a.n_rows() + 1, 0);
  std::vector<std::int32_t> out_cols;
  std::vector<double> out_vals;
  std::vector<double> acc(b.n_cols(), 0.0);
  std::vector<std::int64_t> stamp(b.n_cols(), -1);
  std::vector<std::int32_t> touched;
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    touched.clear();
    auto ac = a.row_cols(i);
    auto av = a.row_values(i);
    for (std::size_t ka = 0; ka < ac.size(); ++ka) {
      const double aik = av[ka];
      auto bc = b.row_cols(ac[ka]);
      auto bv = b.row_values(ac[ka]);
      for (std::size_t kb = 0; kb < bc.size(); ++kb) {
        const std::int32_t j = bc[kb];
        if (stamp[j] != static_cast<std::int64_t>(i)) {
          stamp[j] = static_cast<std::int64_t>(i);
          acc[j] = 0.0;
          touched.push_back(j);
        }
        acc[j] += aik * bv[kb];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (std::int32_t j : touched) {
      out_cols.push_back(j);
      out_vals.push_back(acc[j]);
    }
    offsets[i + 1] = static_cast<std::int64_t>(out_cols.size());
  }
  return SparseMatrix::from_csr(a.n_rows(), b.n_cols(), std::move(offsets),
                                std::move(out_cols), std::move(out_vals));
}

SparseMatrix galerkin_triple_product(const SparseMatrix& p,
                                     const SparseMatrix& a) {
  if (a.n_rows() != a.n_cols()) {
    throw DimensionError("galerkin_triple_product: A must be square");
  }
  if (p.n_rows() != a.n_rows()) {
    throw DimensionError(
        "galerkin_triple_product: P rows must match A dimension");
  }
  SparseMatrix pt_a = multiply(transpose(p), a);
  return multiply(pt_a, p);
}

SparseMatrix extract_principal_submatrix(const SparseMatrix& a,
                                         std::span<const std::int64_t> rows) {
  if (a.n_rows() != a.n_cols()) {
    throw DimensionError("extract_principal_submatrix: matrix must be square");
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= static_cast<std::int64_t>(a.n_rows())) {
      throw DimensionError("extract_principal_submatrix: row out of range");
    }
    if (k > 0 && rows[k] <= rows[k - 1]) {
      throw InvalidInputError(
          "extract_principal_submatrix: rows must be strictly increasing");
    }
  }
  std::vector<std::int32_t> local(a.n_rows(), -1);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    local[rows[k]] = static_cast<std::int32_t>(k);
  }
  std::vector<std::int64_t> offsets(rows.size() + 1, 0);
  std::vector<std::int32_t> cols;
  std::vector<double> vals;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    auto rc = a.row_cols(rows[k]);
    auto rv = a.row_values(rows[k]);
    for (std::size_t t = 0; t < rc.size(); ++t) {
      if (local[rc[t]] >= 0) {
        cols.push_back(local[rc[t]]);
        vals.push_back(rv[t]);
      }
    }
    offsets[k + 1] = static_cast<std::int64_t>(cols.size());
  }
  return SparseMatrix::from_csr(rows.size(), rows.size(), std::move(offsets),
                                std::move(cols), std::move(vals));
}

void write_coordinate(const SparseMatrix& a, std::ostream& out) {
  out << a.n_rows() << ' ' << a.n_cols() << ' ' << a.nnz() << '\n';
  std::ostringstream line;
  line.precision(17);
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    auto rc = a.row_cols(i);
    auto rv = a.row_values(i);
    for (std::size_t k = 0; k < rc.size(); ++k) {
      line.str("");
      line << i << ' ' << rc[k] << ' ' << rv[k] << '\n';
      out << line.str();
    }
  }
}

SparseMatrix read_coordinate(std::istream& in) {
  std::int64_t n_rows = -1;
  std::int64_t n_cols = -1;
  std::int64_t nnz = -1;
  if (!(in >> n_rows >> n_cols >> nnz) || n_rows < 0 || n_cols < 0 || nnz < 0) {
    throw IoError("read_coordinate: malformed header");
  }
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  for (std::int64_t k = 0; k < nnz; ++k) {
    Triplet t;
    if (!(in >> t.row >> t.col >> t.value)) {
      throw IoError("read_coordinate: truncated entry list");
    }
    entries.push_back(t);
  }
  try {
    return SparseMatrix::from_triplets(static_cast<std::size_t>(n_rows),
                                       static_cast<std::size_t>(n_cols),
                                       std::move(entries));
  } catch (const InvalidInputError& e) {
    throw IoError(std::string("read_coordinate: ") + e.what());
  }
}

void write_matrix_file(const SparseMatrix& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_coordinate(a, out);
  if (!out) throw IoError("write failed: " + path);
}

SparseMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  return read_coordinate(in);
}

}  // namespace critkit
