#include "critkit/partition.hpp"

#include <algorithm>
#include <cmath>

#include "critkit/errors.hpp"

namespace critkit {

std::vector<std::int64_t> Partition::rows_of(std::size_t rank) const {
  std::vector<std::int64_t> rows;
  for (std::size_t i = 0; i < owner.size(); ++i) {
    if (owner[i] == static_cast<std::int32_t>(rank)) {
      rows.push_back(static_cast<std::int64_t>(i));
    }
  }
  return rows;
}

namespace {

// Symmetrized adjacency lists (A or A^T nonzero), self-loops dropped,
// neighbor lists ascending.
std::vector<std::vector<std::int32_t>> build_adjacency(
    const SparseMatrix& pattern) {
  const std::size_t n = pattern.n_rows();
  std::vector<std::vector<std::int32_t>> adj(n);
  const SparseMatrix t = transpose(pattern);
  for (std::size_t i = 0; i < n; ++i) {
    auto a = pattern.row_cols(i);
    auto b = t.row_cols(i);
    std::vector<std::int32_t> merged;
    merged.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(),
               std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    std::erase(merged, static_cast<std::int32_t>(i));
    adj[i] = std::move(merged);
  }
  return adj;
}

// BFS levels from `seed` over the vertices with in_set != 0; each level is
// emitted in ascending index order. Returns visited vertices in level order
// and their count.
std::vector<std::int32_t> bfs_order(
    const std::vector<std::vector<std::int32_t>>& adj,
    const std::vector<char>& in_set, std::int32_t seed,
    std::vector<std::int32_t>* depth_out = nullptr) {
  std::vector<std::int32_t> order;
  std::vector<char> seen(adj.size(), 0);
  std::vector<std::int32_t> level{seed};
  seen[seed] = 1;
  std::int32_t depth = 0;
  while (!level.empty()) {
    for (std::int32_t v : level) order.push_back(v);
    if (depth_out) {
      for (std::int32_t v : level) (*depth_out)[v] = depth;
    }
    std::vector<std::int32_t> next;
    for (std::int32_t v : level) {
      for (std::int32_t u : adj[v]) {
        if (in_set[u] && !seen[u]) {
          seen[u] = 1;
          next.push_back(u);
        }
      }
    }
    std::sort(next.begin(), next.end());
    level = std::move(next);
    ++depth;
  }
  return order;
}

// Vertices of one connected component reachable from `start`.
std::vector<std::int32_t> component_of(
    const std::vector<std::vector<std::int32_t>>& adj,
    const std::vector<char>& in_set, std::int32_t start) {
  return bfs_order(adj, in_set, start);
}

// Lowest-index vertex of maximum eccentricity within one connected
// component (exhaustive scan; inputs are desk-scale).
std::int32_t peripheral_vertex(
    const std::vector<std::vector<std::int32_t>>& adj,
    const std::vector<char>& in_set,
    const std::vector<std::int32_t>& component) {
  std::vector<std::int32_t> depth(adj.size(), 0);
  std::int32_t best = component.front();
  std::int32_t best_ecc = -1;
  for (std::int32_t v : component) {
    bfs_order(adj, in_set, v, &depth);
    std::int32_t ecc = 0;
    for (std::int32_t u : component) ecc = std::max(ecc, depth[u]);
    if (ecc > best_ecc) {
      best_ecc = ecc;
      best = v;
    }
  }
  return best;
}

// Level-structure order of `rows`: connected components in order of their
// lowest vertex, each traversed breadth-first from its lowest-index
// peripheral vertex.
std::vector<std::int32_t> level_structure_order(
    const std::vector<std::vector<std::int32_t>>& adj,
    const std::vector<std::int32_t>& rows) {
  std::vector<char> in_set(adj.size(), 0);
  for (std::int32_t v : rows) in_set[v] = 1;
  std::vector<char> remaining = in_set;
  std::vector<std::int32_t> order;
  order.reserve(rows.size());
  for (std::int32_t v : rows) {  // rows ascending => components by lowest vertex
    if (!remaining[v]) continue;
    std::vector<std::int32_t> component = component_of(adj, remaining, v);
    std::sort(component.begin(), component.end());
    std::vector<char> comp_set(adj.size(), 0);
    for (std::int32_t u : component) comp_set[u] = 1;
    const std::int32_t seed = peripheral_vertex(adj, comp_set, component);
    std::vector<std::int32_t> comp_order = bfs_order(adj, comp_set, seed);
    for (std::int32_t u : comp_order) {
      order.push_back(u);
      remaining[u] = 0;
    }
  }
  return order;
}

// Recursive level-structure bisection of `rows` into `parts` parts; writes
// part ids part_base .. part_base + parts - 1.
void bisect(const std::vector<std::vector<std::int32_t>>& adj,
            const std::vector<std::int32_t>& rows, std::size_t parts,
            std::int32_t part_base, std::vector<std::int32_t>& part_of) {
  if (parts == 1) {
    for (std::int32_t v : rows) part_of[v] = part_base;
    return;
  }
  const std::size_t left_parts = (parts + 1) / 2;
  const std::size_t right_parts = parts - left_parts;
  const std::vector<std::int32_t> order = level_structure_order(adj, rows);
  std::size_t left_size = static_cast<std::size_t>(std::llround(
      static_cast<double>(order.size()) * static_cast<double>(left_parts) /
      static_cast<double>(parts)));
  left_size = std::clamp(left_size, left_parts, order.size() - right_parts);
  std::vector<std::int32_t> left(order.begin(),
                                 order.begin() + static_cast<std::ptrdiff_t>(
                                                     left_size));
  std::vector<std::int32_t> right(order.begin() + static_cast<std::ptrdiff_t>(
                                                      left_size),
                                  order.end());
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  bisect(adj, left, left_parts, part_base, part_of);
  bisect(adj, right, right_parts,
         part_base + static_cast<std::int32_t>(left_parts), part_of);
}

std::vector<std::int32_t> partition_stage(
    const std::vector<std::vector<std::int32_t>>& adj,
    const std::vector<std::int32_t>& rows, std::size_t parts) {
  std::vector<std::int32_t> part_of(adj.size(), -1);
  bisect(adj, rows, parts, 0, part_of);
  return part_of;
}

}  // namespace

Partition hierarchical_partition(const SparseMatrix& pattern, std::size_t np1,
                                 std::size_t np2) {
  if (pattern.n_rows() != pattern.n_cols()) {
    throw DimensionError("hierarchical_partition: pattern must be square");
  }
  if (np1 == 0 || np2 == 0) {
    throw InvalidInputError("hierarchical_partition: part counts must be "
                            "positive");
  }
  const std::size_t n = pattern.n_rows();
  if (np1 * np2 > n) {
    throw PartitionError("hierarchical_partition: more parts than rows");
  }
  const auto adj = build_adjacency(pattern);
  std::vector<std::int32_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<std::int32_t>(i);

  // Stage one: np1 parts over all rows. The row counts per first-stage part
  // must admit np2 sub-parts each; the clamp in bisect guarantees that as
  // long as n >= np1 * np2 and sizes stay proportional.
  const std::vector<std::int32_t> stage1 = partition_stage(adj, all, np1);

  Partition result;
  result.np1 = np1;
  result.np2 = np2;
  result.owner.assign(n, -1);
  for (std::size_t p = 0; p < np1; ++p) {
    std::vector<std::int32_t> rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (stage1[i] == static_cast<std::int32_t>(p)) {
        rows.push_back(static_cast<std::int32_t>(i));
      }
    }
    if (rows.size() < np2) {
      throw PartitionError(
          "hierarchical_partition: first-stage part too small for np2");
    }
    const std::vector<std::int32_t> stage2 = partition_stage(adj, rows, np2);
    for (std::int32_t v : rows) {
      result.owner[v] =
          static_cast<std::int32_t>(p * np2) + stage2[v];
    }
  }
  return result;
}

}  // namespace critkit
