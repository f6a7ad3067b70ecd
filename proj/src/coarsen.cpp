#include "critkit/coarsen.hpp"

#include <algorithm>
#include <cmath>

#include "critkit/errors.hpp"

namespace critkit {

std::size_t StrengthGraph::edge_count() const {
  std::size_t edges = 0;
  for (const auto& row : strong) edges += row.size();
  return edges;
}

StrengthGraph build_strength(const SparseMatrix& a, double theta) {
  if (a.n_rows() != a.n_cols()) {
    throw DimensionError("build_strength: matrix must be square");
  }
  if (!(theta >= 0.0) || !(theta < 1.0)) {
    throw InvalidInputError("build_strength: theta must lie in [0, 1)");
  }
  StrengthGraph s;
  s.n = a.n_rows();
  s.strong.resize(s.n);
  for (std::size_t i = 0; i < s.n; ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    double max_neg = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] != static_cast<std::int32_t>(i)) {
        max_neg = std::max(max_neg, -vals[k]);
      }
    }
    if (max_neg <= 0.0) continue;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] != static_cast<std::int32_t>(i) &&
          -vals[k] > theta * max_neg) {
        s.strong[i].push_back(cols[k]);
      }
    }
  }
  return s;
}

std::size_t CfSplitting::n_coarse() const {
  std::size_t n = 0;
  for (PointType t : type) {
    if (t == PointType::coarse) ++n;
  }
  return n;
}

std::vector<std::int64_t> CfSplitting::coarse_rows() const {
  std::vector<std::int64_t> rows;
  for (std::size_t i = 0; i < type.size(); ++i) {
    if (type[i] == PointType::coarse) {
      rows.push_back(static_cast<std::int64_t>(i));
    }
  }
  return rows;
}

namespace {

enum class Mark : std::uint8_t { untyped, fine, coarse };

std::vector<std::vector<std::int32_t>> transpose_strength(
    const StrengthGraph& s) {
  std::vector<std::vector<std::int32_t>> dependents(s.n);
  for (std::size_t i = 0; i < s.n; ++i) {
    for (std::int32_t j : s.strong[i]) {
      dependents[j].push_back(static_cast<std::int32_t>(i));
    }
  }
  return dependents;
}

CfSplitting run_greedy(const StrengthGraph& s) {
  const std::size_t n = s.n;
  const auto dependents = transpose_strength(s);
  std::vector<std::int64_t> measure(n);
  for (std::size_t i = 0; i < n; ++i) {
    measure[i] = static_cast<std::int64_t>(dependents[i].size());
  }
  std::vector<Mark> mark(n, Mark::untyped);
  std::size_t untyped = n;
  while (untyped > 0) {
    std::size_t pick = n;
    std::int64_t best = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (mark[i] == Mark::untyped && measure[i] > best) {
        best = measure[i];
        pick = i;
      }
    }
    mark[pick] = Mark::coarse;
    --untyped;
    for (std::int32_t j : dependents[pick]) {
      if (mark[j] != Mark::untyped) continue;
      mark[j] = Mark::fine;
      --untyped;
      for (std::int32_t k : s.strong[j]) {
        if (mark[k] == Mark::untyped) ++measure[k];
      }
    }
  }
  CfSplitting split;
  split.type.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    split.type[i] =
        mark[i] == Mark::coarse ? PointType::coarse : PointType::fine;
  }
  return split;
}

// Promote, in ascending order, any F row whose strong set holds no C point.
// Promotions become visible to later rows.
void promote_uncovered(const StrengthGraph& s, CfSplitting& split) {
  for (std::size_t i = 0; i < s.n; ++i) {
    if (split.type[i] == PointType::coarse || s.strong[i].empty()) continue;
    bool covered = false;
    for (std::int32_t j : s.strong[i]) {
      if (split.type[j] == PointType::coarse) {
        covered = true;
        break;
      }
    }
    if (!covered) split.type[i] = PointType::coarse;
  }
}

}  // namespace

CfSplitting cf_split(const StrengthGraph& s, CoarsenStats* stats) {
  if (stats != nullptr) {
    stats->rows_split += s.n;
    stats->strength_nnz += s.edge_count();
  }
  CfSplitting split = run_greedy(s);
  promote_uncovered(s, split);
  return split;
}

CfSplitting aggressive_split(const StrengthGraph& s, const CfSplitting& base,
                             CoarsenStats* stats) {
  if (base.type.size() != s.n) {
    throw DimensionError("aggressive_split: splitting size mismatch");
  }
  const std::vector<std::int64_t> coarse = base.coarse_rows();
  std::vector<std::int32_t> local(s.n, -1);
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    local[coarse[k]] = static_cast<std::int32_t>(k);
  }
  // Distance-two strength between C points: direct edges plus two-hop paths
  // through any point.
  StrengthGraph s2;
  s2.n = coarse.size();
  s2.strong.resize(s2.n);
  std::vector<char> seen(s.n, 0);
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    const std::size_t i = static_cast<std::size_t>(coarse[k]);
    std::vector<std::int32_t> reach;
    for (std::int32_t x : s.strong[i]) {
      if (local[x] >= 0 && !seen[x] && x != coarse[k]) {
        seen[x] = 1;
        reach.push_back(x);
      }
      for (std::int32_t j : s.strong[x]) {
        if (local[j] >= 0 && !seen[j] && j != coarse[k]) {
          seen[j] = 1;
          reach.push_back(j);
        }
      }
    }
    std::sort(reach.begin(), reach.end());
    for (std::int32_t j : reach) {
      s2.strong[k].push_back(local[j]);
      seen[j] = 0;
    }
  }
  if (stats != nullptr) {
    stats->rows_split += s2.n;
    stats->strength_nnz += s2.edge_count();
  }
  const CfSplitting sub = run_greedy(s2);
  CfSplitting result;
  result.type.assign(s.n, PointType::fine);
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    if (sub.type[k] == PointType::coarse) {
      result.type[coarse[k]] = PointType::coarse;
    }
  }
  return result;
}

SparseMatrix build_interpolation(const SparseMatrix& a,
                                 const StrengthGraph& s,
                                 const CfSplitting& split) {
  const std::size_t n = a.n_rows();
  if (s.n != n || split.type.size() != n) {
    throw DimensionError("build_interpolation: size mismatch");
  }
  std::vector<std::int32_t> coarse_index(n, -1);
  std::int32_t nc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (split.type[i] == PointType::coarse) coarse_index[i] = nc++;
  }
  std::vector<std::int64_t> offsets;
  offsets.reserve(n + 1);
  offsets.push_back(0);
  std::vector<std::int32_t> cols;
  std::vector<double> vals;
  for (std::size_t i = 0; i < n; ++i) {
    if (split.type[i] == PointType::coarse) {
      cols.push_back(coarse_index[i]);
      vals.push_back(1.0);
      offsets.push_back(static_cast<std::int64_t>(cols.size()));
      continue;
    }
    double sum_all = 0.0;
    double sum_coarse = 0.0;
    double diag = 0.0;
    auto rc = a.row_cols(i);
    auto rv = a.row_values(i);
    std::size_t k_strong = 0;
    for (std::size_t k = 0; k < rc.size(); ++k) {
      if (rc[k] == static_cast<std::int32_t>(i)) {
        diag = rv[k];
        continue;
      }
      sum_all += std::min(rv[k], 0.0);
      while (k_strong < s.strong[i].size() && s.strong[i][k_strong] < rc[k]) {
        ++k_strong;
      }
      const bool strong = k_strong < s.strong[i].size() &&
                          s.strong[i][k_strong] == rc[k];
      if (strong && coarse_index[rc[k]] >= 0) {
        sum_coarse += std::min(rv[k], 0.0);
      }
    }
    if (sum_coarse == 0.0) {
      // No strong C neighbor (possible after an aggressive pass): the row
      // gets no coarse correction and is left to the smoother.
      offsets.push_back(static_cast<std::int64_t>(cols.size()));
      continue;
    }
    if (diag == 0.0) {
      throw SingularError("build_interpolation: zero diagonal at row " +
                          std::to_string(i));
    }
    const double ratio = sum_all / sum_coarse;
    k_strong = 0;
    for (std::size_t k = 0; k < rc.size(); ++k) {
      if (rc[k] == static_cast<std::int32_t>(i)) continue;
      while (k_strong < s.strong[i].size() && s.strong[i][k_strong] < rc[k]) {
        ++k_strong;
      }
      const bool strong = k_strong < s.strong[i].size() &&
                          s.strong[i][k_strong] == rc[k];
      if (strong && coarse_index[rc[k]] >= 0) {
        cols.push_back(coarse_index[rc[k]]);
        vals.push_back(-ratio * rv[k] / diag);
      }
    }
    offsets.push_back(static_cast<std::int64_t>(cols.size()));
  }
  return SparseMatrix::from_csr(n, static_cast<std::size_t>(nc),
                                std::move(offsets), std::move(cols),
                                std::move(vals));
}

CoarsenHierarchy coarsen_hierarchy(const SparseMatrix& a,
                                   const CoarsenParams& params) {
  if (params.max_levels < 1) {
    throw InvalidInputError("coarsen_hierarchy: max_levels must be positive");
  }
  CoarsenHierarchy h;
  h.levels.push_back(a);
  while (static_cast<int>(h.levels.size()) < params.max_levels &&
         h.levels.back().n_rows() > params.min_coarse) {
    const SparseMatrix& current = h.levels.back();
    const StrengthGraph s = build_strength(current, params.theta);
    CfSplitting split = cf_split(s, &h.stats);
    if (static_cast<int>(h.levels.size()) <= params.agg) {
      split = aggressive_split(s, split, &h.stats);
    }
    const std::size_t nc = split.n_coarse();
    if (nc == 0 || nc >= current.n_rows()) break;  // stalled
    SparseMatrix p = build_interpolation(current, s, split);
    SparseMatrix coarse = galerkin_triple_product(p, current);
    h.coarse_to_fine.push_back(split.coarse_rows());
    h.interpolation.push_back(std::move(p));
    h.levels.push_back(std::move(coarse));
  }
  return h;
}

double operator_complexity(const std::vector<SparseMatrix>& levels) {
  if (levels.empty() || levels.front().nnz() == 0) {
    throw InvalidInputError("operator_complexity: empty hierarchy");
  }
  double total = 0.0;
  for (const SparseMatrix& m : levels) {
    total += static_cast<double>(m.nnz());
  }
  return total / static_cast<double>(levels.front().nnz());
}

}  // namespace critkit
