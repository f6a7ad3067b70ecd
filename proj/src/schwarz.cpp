#include "critkit/schwarz.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "critkit/errors.hpp"

namespace critkit {

void OverlapMap::validate() const {
  if (owned.size() != overlap.size()) {
    throw InvalidInputError("OverlapMap: owned/overlap rank count mismatch");
  }
  std::vector<char> covered(n_rows, 0);
  for (std::size_t r = 0; r < owned.size(); ++r) {
    for (std::size_t k = 0; k < owned[r].size(); ++k) {
      const std::int64_t row = owned[r][k];
      if (row < 0 || row >= static_cast<std::int64_t>(n_rows)) {
        throw InvalidInputError("OverlapMap: owned row out of range");
      }
      if (k > 0 && owned[r][k - 1] >= row) {
        throw InvalidInputError("OverlapMap: owned rows must be ascending");
      }
      if (covered[row]) {
        throw InvalidInputError("OverlapMap: owned sets must be disjoint");
      }
      covered[row] = 1;
    }
    if (!std::is_sorted(overlap[r].begin(), overlap[r].end())) {
      throw InvalidInputError("OverlapMap: overlap rows must be ascending");
    }
    if (!std::includes(overlap[r].begin(), overlap[r].end(), owned[r].begin(),
                       owned[r].end())) {
      throw InvalidInputError("OverlapMap: overlap must contain owned rows");
    }
  }
  for (std::size_t i = 0; i < n_rows; ++i) {
    if (!covered[i]) {
      throw InvalidInputError("OverlapMap: owned sets must cover all rows");
    }
  }
}

namespace {

std::vector<std::int64_t> grow_with_transpose(
    const SparseMatrix& pattern, const SparseMatrix& pattern_t,
    std::span<const std::int64_t> owned, int delta) {
  const std::size_t n = pattern.n_rows();
  std::vector<char> in_set(n, 0);
  std::vector<std::int64_t> frontier;
  for (std::int64_t row : owned) {
    if (row < 0 || row >= static_cast<std::int64_t>(n)) {
      throw DimensionError("grow_overlap: owned row out of range");
    }
    in_set[row] = 1;
    frontier.push_back(row);
  }
  for (int step = 0; step < delta; ++step) {
    std::vector<std::int64_t> next;
    for (std::int64_t row : frontier) {
      for (std::int32_t j : pattern.row_cols(row)) {
        if (!in_set[j]) {
          in_set[j] = 1;
          next.push_back(j);
        }
      }
      for (std::int32_t j : pattern_t.row_cols(row)) {
        if (!in_set[j]) {
          in_set[j] = 1;
          next.push_back(j);
        }
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  std::vector<std::int64_t> result;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_set[i]) result.push_back(static_cast<std::int64_t>(i));
  }
  return result;
}

int thread_cap() {
  const char* env = std::getenv("CRITKIT_THREADS");
  if (env == nullptr) return 1;
  const int v = std::atoi(env);
  return v > 0 ? v : 1;
}

}  // namespace

std::vector<std::int64_t> grow_overlap(const SparseMatrix& pattern,
                                       std::span<const std::int64_t> owned,
                                       int delta) {
  if (pattern.n_rows() != pattern.n_cols()) {
    throw DimensionError("grow_overlap: pattern must be square");
  }
  if (delta < 0) {
    throw InvalidInputError("grow_overlap: delta must be non-negative");
  }
  const SparseMatrix pattern_t = transpose(pattern);
  return grow_with_transpose(pattern, pattern_t, owned, delta);
}

OverlapMap build_overlap_map(const SparseMatrix& pattern,
                             const Partition& partition, int delta) {
  if (pattern.n_rows() != partition.n_rows()) {
    throw DimensionError("build_overlap_map: partition size mismatch");
  }
  if (delta < 0) {
    throw InvalidInputError("build_overlap_map: delta must be non-negative");
  }
  const SparseMatrix pattern_t = transpose(pattern);
  OverlapMap map;
  map.n_rows = pattern.n_rows();
  map.owned.resize(partition.n_parts());
  map.overlap.resize(partition.n_parts());
  for (std::size_t r = 0; r < partition.n_parts(); ++r) {
    map.owned[r] = partition.rows_of(r);
    map.overlap[r] =
        grow_with_transpose(pattern, pattern_t, map.owned[r], delta);
  }
  map.validate();
  return map;
}

DenseVector sor_solve(const SparseMatrix& a, const DenseVector& b, int sweeps,
                      double omega) {
  if (a.n_rows() != a.n_cols() || b.size() != a.n_rows()) {
    throw DimensionError("sor_solve: shape mismatch");
  }
  if (sweeps < 1) {
    throw InvalidInputError("sor_solve: need at least one sweep");
  }
  if (!(omega > 0.0) || !(omega < 2.0)) {
    throw InvalidInputError("sor_solve: omega must lie in (0, 2)");
  }
  DenseVector x(a.n_rows());
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t i = 0; i < a.n_rows(); ++i) {
      auto cols = a.row_cols(i);
      auto vals = a.row_values(i);
      double diag = 0.0;
      double sum = b[i];
      for (std::size_t k = 0; k < cols.size(); ++k) {
        if (cols[k] == static_cast<std::int32_t>(i)) {
          diag = vals[k];
        } else {
          sum -= vals[k] * x[cols[k]];
        }
      }
      if (diag == 0.0) {
        throw SingularError("sor_solve: zero diagonal at row " +
                            std::to_string(i));
      }
      x[i] = (1.0 - omega) * x[i] + omega * sum / diag;
    }
  }
  return x;
}

namespace {

// Scatter the owned entries of a subdomain solution into the global vector.
void scatter_owned(const std::vector<std::int64_t>& owned,
                   const std::vector<std::int64_t>& overlap,
                   const DenseVector& local, DenseVector& global) {
  std::size_t k = 0;
  for (std::int64_t row : owned) {
    while (overlap[k] != row) ++k;  // owned is a sorted subset of overlap
    global[row] = local[k];
  }
}

}  // namespace

DenseVector ras_apply(const SparseMatrix& m, const OverlapMap& map,
                      const DenseVector& r, int sweeps, double omega) {
  if (m.n_rows() != map.n_rows || r.size() != map.n_rows) {
    throw DimensionError("ras_apply: shape mismatch");
  }
  DenseVector e(map.n_rows);
  for (std::size_t rank = 0; rank < map.n_ranks(); ++rank) {
    if (map.owned[rank].empty()) continue;
    const auto& rows = map.overlap[rank];
    const SparseMatrix sub = extract_principal_submatrix(m, rows);
    DenseVector local_r(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) local_r[k] = r[rows[k]];
    const DenseVector local_e = sor_solve(sub, local_r, sweeps, omega);
    scatter_owned(map.owned[rank], rows, local_e, e);
  }
  return e;
}

RasPreconditioner::RasPreconditioner(const SparseMatrix& m, OverlapMap map,
                                     Options options)
    : map_(std::move(map)), options_(options) {
  if (m.n_rows() != map_.n_rows) {
    throw DimensionError("RasPreconditioner: shape mismatch");
  }
  map_.validate();
  sub_matrices_.reserve(map_.n_ranks());
  for (std::size_t rank = 0; rank < map_.n_ranks(); ++rank) {
    sub_matrices_.push_back(
        extract_principal_submatrix(m, map_.overlap[rank]));
  }
  if (options_.exact) {
    sub_factors_.reserve(sub_matrices_.size());
    for (const SparseMatrix& sub : sub_matrices_) {
      sub_factors_.emplace_back(sub);
    }
  }
}

DenseVector RasPreconditioner::apply(const DenseVector& r) const {
  if (r.size() != map_.n_rows) {
    throw DimensionError("RasPreconditioner::apply: size mismatch");
  }
  DenseVector e(map_.n_rows);
  auto solve_rank = [&](std::size_t rank) {
    if (map_.owned[rank].empty()) return;
    const auto& rows = map_.overlap[rank];
    DenseVector local_r(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) local_r[k] = r[rows[k]];
    const DenseVector local_e =
        options_.exact ? sub_factors_[rank].solve(local_r)
                       : sor_solve(sub_matrices_[rank], local_r,
                                   options_.sweeps, options_.omega);
    scatter_owned(map_.owned[rank], rows, local_e, e);
  };
  const std::size_t n_ranks = map_.n_ranks();
  const std::size_t threads =
      std::min<std::size_t>(static_cast<std::size_t>(thread_cap()), n_ranks);
  if (threads <= 1) {
    for (std::size_t rank = 0; rank < n_ranks; ++rank) solve_rank(rank);
  } else {
    // Ranks write disjoint owned rows, so the result does not depend on the
    // thread count.
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t]() {
        for (std::size_t rank = t; rank < n_ranks; rank += threads) {
          solve_rank(rank);
        }
      });
    }
    for (std::thread& th : pool) th.join();
  }
  return e;
}

std::size_t RasPreconditioner::storage_bytes() const {
  std::size_t bytes = 0;
  for (const SparseMatrix& sub : sub_matrices_) bytes += sub.storage_bytes();
  for (const DenseLu& lu : sub_factors_) bytes += lu.storage_bytes();
  return bytes;
}

}  // namespace critkit
