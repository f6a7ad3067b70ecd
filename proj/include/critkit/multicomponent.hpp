#pragma once

#include <cstddef>
#include <vector>

#include "critkit/sparse.hpp"

namespace critkit {

/// Square block-diagonal matrix whose blocks ("components") all have the
/// same size. Rows are component-major: global row = comp * rows_per_comp +
/// local row. Construction rejects entries linking different components.
class MultiComponentMatrix {
 public:
  MultiComponentMatrix() = default;

  /// Wraps an assembled block-diagonal matrix; validates the block structure.
  static MultiComponentMatrix wrap(SparseMatrix full, std::size_t n_comp);

  /// Assembles the block diagonal of equally sized component blocks.
  static MultiComponentMatrix from_blocks(
      const std::vector<SparseMatrix>& blocks);

  /// A single-component view of an arbitrary square matrix.
  static MultiComponentMatrix single(SparseMatrix a);

  const SparseMatrix& full() const { return full_; }
  std::size_t n_comp() const { return n_comp_; }
  std::size_t rows_per_comp() const {
    return n_comp_ == 0 ? 0 : full_.n_rows() / n_comp_;
  }
  std::size_t n_rows() const { return full_.n_rows(); }

  SparseMatrix extract_component(std::size_t comp) const;

 private:
  SparseMatrix full_;
  std::size_t n_comp_ = 0;
};

}  // namespace critkit
