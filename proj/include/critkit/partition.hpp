#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "critkit/sparse.hpp"

namespace critkit {

/// Row-to-rank assignment from the two-stage partitioner. Ranks are
/// rank = part1 * np2 + part2.
struct Partition {
  std::size_t np1 = 1;
  std::size_t np2 = 1;
  std::vector<std::int32_t> owner;

  std::size_t n_parts() const { return np1 * np2; }
  std::size_t n_rows() const { return owner.size(); }

  /// Rows owned by `rank`, ascending.
  std::vector<std::int64_t> rows_of(std::size_t rank) const;
};

/// Two-stage partition of the symmetrized adjacency of `pattern`: recursive
/// breadth-first level-structure bisection into np1 parts, then into np2
/// parts within each. Deterministic: each bisection orders vertices by BFS
/// level from the lowest-index peripheral vertex (ties by index), and
/// disconnected pieces are processed in order of their lowest vertex.
Partition hierarchical_partition(const SparseMatrix& pattern, std::size_t np1,
                                 std::size_t np2);

}  // namespace critkit
