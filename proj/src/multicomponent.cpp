#include "critkit/multicomponent.hpp"

#include <numeric>

#include "critkit/errors.hpp"

namespace critkit {

MultiComponentMatrix MultiComponentMatrix::wrap(SparseMatrix full,
                                                std::size_t n_comp) {
  if (full.n_rows() != full.n_cols()) {
    throw DimensionError("MultiComponentMatrix: matrix must be square");
  }
  if (n_comp == 0 || full.n_rows() % n_comp != 0) {
    throw InvalidInputError(
        "MultiComponentMatrix: rows must divide evenly into components");
  }
  const std::size_t npc = full.n_rows() / n_comp;
  for (std::size_t i = 0; i < full.n_rows(); ++i) {
    const std::size_t comp = i / npc;
    for (std::int32_t j : full.row_cols(i)) {
      if (static_cast<std::size_t>(j) / npc != comp) {
        throw InvalidInputError(
            "MultiComponentMatrix: entry links different components");
      }
    }
  }
  MultiComponentMatrix m;
  m.full_ = std::move(full);
  m.n_comp_ = n_comp;
  return m;
}

MultiComponentMatrix MultiComponentMatrix::from_blocks(
    const std::vector<SparseMatrix>& blocks) {
  if (blocks.empty()) {
    throw InvalidInputError("MultiComponentMatrix: no blocks");
  }
  const std::size_t npc = blocks.front().n_rows();
  std::size_t nnz = 0;
  for (const SparseMatrix& b : blocks) {
    if (b.n_rows() != npc || b.n_cols() != npc) {
      throw InvalidInputError(
          "MultiComponentMatrix: blocks must be square and equal-sized");
    }
    nnz += b.nnz();
  }
  const std::size_t n = npc * blocks.size();
  std::vector<std::int64_t> offsets;
  offsets.reserve(n + 1);
  offsets.push_back(0);
  std::vector<std::int32_t> cols;
  cols.reserve(nnz);
  std::vector<double> vals;
  vals.reserve(nnz);
  for (std::size_t comp = 0; comp < blocks.size(); ++comp) {
    const SparseMatrix& b = blocks[comp];
    const std::int32_t shift = static_cast<std::int32_t>(comp * npc);
    for (std::size_t i = 0; i < npc; ++i) {
      auto rc = b.row_cols(i);
      auto rv = b.row_values(i);
      for (std::size_t k = 0; k < rc.size(); ++k) {
        cols.push_back(rc[k] + shift);
        vals.push_back(rv[k]);
      }
      offsets.push_back(static_cast<std::int64_t>(cols.size()));
    }
  }
  SparseMatrix full = SparseMatrix::from_csr(n, n, std::move(offsets),
                                             std::move(cols), std::move(vals));
  MultiComponentMatrix m;
  m.full_ = std::move(full);
  m.n_comp_ = blocks.size();
  return m;
}

MultiComponentMatrix MultiComponentMatrix::single(SparseMatrix a) {
  return wrap(std::move(a), 1);
}

SparseMatrix MultiComponentMatrix::extract_component(std::size_t comp) const {
  if (comp >= n_comp_) {
    throw DimensionError("extract_component: component out of range");
  }
  const std::size_t npc = rows_per_comp();
  std::vector<std::int64_t> rows(npc);
  std::iota(rows.begin(), rows.end(),
            static_cast<std::int64_t>(comp * npc));
  return extract_principal_submatrix(full_, rows);
}

}  // namespace critkit
