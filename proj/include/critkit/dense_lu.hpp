#pragma once

#include <cstddef>
#include <vector>

#include "critkit/sparse.hpp"

namespace critkit {

/// Dense LU factorization with partial pivoting, factored once at
/// construction. Used for the coarsest level of a multilevel hierarchy and
/// for exact subdomain solves; matrices there are small by construction.
class DenseLu {
 public:
  DenseLu() = default;
  explicit DenseLu(const SparseMatrix& a);

  std::size_t n() const { return n_; }

  DenseVector solve(const DenseVector& b) const;

  /// Bytes held by the factorization (n^2 values + n pivots).
  std::size_t storage_bytes() const {
    return n_ * n_ * sizeof(double) + n_ * sizeof(std::int32_t);
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> lu_;          // row-major, L below diagonal, U on/above
  std::vector<std::int32_t> piv_;   // row permutation
};

}  // namespace critkit
