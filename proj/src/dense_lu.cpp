#include "critkit/dense_lu.hpp"

#include <cmath>
#include <utility>

#include "critkit/errors.hpp"

namespace critkit {

DenseLu::DenseLu(const SparseMatrix& a) : n_(a.n_rows()) {
  if (a.n_rows() != a.n_cols()) {
    throw DimensionError("DenseLu: matrix must be square");
  }
  lu_.assign(n_ * n_, 0.0);
  piv_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    auto rc = a.row_cols(i);
    auto rv = a.row_values(i);
    for (std::size_t k = 0; k < rc.size(); ++k) {
      lu_[i * n_ + rc[k]] = rv[k];
    }
  }
  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_[k * n_ + k]);
    for (std::size_t i = k + 1; i < n_; ++i) {
      const double cand = std::abs(lu_[i * n_ + k]);
      if (cand > best) {
        best = cand;
        p = i;
      }
    }
    if (best == 0.0) {
      throw SingularError("DenseLu: zero pivot at column " + std::to_string(k));
    }
    piv_[k] = static_cast<std::int32_t>(p);
    if (p != k) {
      for (std::size_t j = 0; j < n_; ++j) {
        std::swap(lu_[k * n_ + j], lu_[p * n_ + j]);
      }
    }
    const double pivot = lu_[k * n_ + k];
    for (std::size_t i = k + 1; i < n_; ++i) {
      const double m = lu_[i * n_ + k] / pivot;
      lu_[i * n_ + k] = m;
      for (std::size_t j = k + 1; j < n_; ++j) {
        lu_[i * n_ + j] -= m * lu_[k * n_ + j];
      }
    }
  }
}

DenseVector DenseLu::solve(const DenseVector& b) const {
  if (b.size() != n_) {
    throw DimensionError("DenseLu::solve: size mismatch");
  }
  DenseVector x(b);
  for (std::size_t k = 0; k < n_; ++k) {
    if (piv_[k] != static_cast<std::int32_t>(k)) {
      std::swap(x[k], x[piv_[k]]);
    }
    for (std::size_t i = k + 1; i < n_; ++i) {
      x[i] -= lu_[i * n_ + k] * x[k];
    }
  }
  for (std::size_t i = n_; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n_; ++j) {
      s -= lu_[i * n_ + j] * x[j];
    }
    x[i] = s / lu_[i * n_ + i];
  }
  return x;
}

}  // namespace critkit
