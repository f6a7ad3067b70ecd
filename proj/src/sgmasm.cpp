#include "critkit/sgmasm.hpp"

#include <cstdint>
#include <utility>

#include "critkit/errors.hpp"

namespace critkit {

Interpolation::Interpolation(SparseMatrix block, std::size_t n_comp)
    : block_(std::move(block)), n_comp_(n_comp) {
  if (n_comp_ == 0) {
    throw InvalidInputError("Interpolation: n_comp must be positive");
  }
}

DenseVector Interpolation::apply(const DenseVector& coarse) const {
  if (coarse.size() != n_cols()) {
    throw DimensionError("Interpolation::apply: coarse vector size mismatch");
  }
  const std::size_t nf = block_.n_rows();
  const std::size_t nc = block_.n_cols();
  DenseVector fine(n_rows());
  for (std::size_t j = 0; j < n_comp_; ++j) {
    for (std::size_t i = 0; i < nf; ++i) {
      const auto cols = block_.row_cols(i);
      const auto vals = block_.row_values(i);
      double acc = 0.0;
      for (std::size_t k = 0; k < cols.size(); ++k) {
        acc += vals[k] * coarse[j * nc + static_cast<std::size_t>(cols[k])];
      }
      fine[j * nf + i] = acc;
    }
  }
  return fine;
}

DenseVector Interpolation::apply_transpose(const DenseVector& fine) const {
  if (fine.size() != n_rows()) {
    throw DimensionError(
        "Interpolation::apply_transpose: fine vector size mismatch");
  }
  const std::size_t nf = block_.n_rows();
  const std::size_t nc = block_.n_cols();
  DenseVector coarse(n_cols());
  for (std::size_t j = 0; j < n_comp_; ++j) {
    for (std::size_t i = 0; i < nf; ++i) {
      const auto cols = block_.row_cols(i);
      const auto vals = block_.row_values(i);
      const double f = fine[j * nf + i];
      for (std::size_t k = 0; k < cols.size(); ++k) {
        coarse[j * nc + static_cast<std::size_t>(cols[k])] += vals[k] * f;
      }
    }
  }
  return coarse;
}

SparseMatrix Interpolation::materialize() const {
  const std::size_t nf = block_.n_rows();
  const std::size_t nc = block_.n_cols();
  std::vector<Triplet> entries;
  entries.reserve(block_.nnz() * n_comp_);
  for (std::size_t j = 0; j < n_comp_; ++j) {
    for (std::size_t i = 0; i < nf; ++i) {
      const auto cols = block_.row_cols(i);
      const auto vals = block_.row_values(i);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        entries.push_back(
            Triplet{static_cast<std::int64_t>(j * nf + i),
                    static_cast<std::int64_t>(j * nc) + cols[k], vals[k]});
      }
    }
  }
  return SparseMatrix::from_triplets(n_rows(), n_cols(), std::move(entries));
}

namespace {

void validate_params(const MultiComponentMatrix& m, const SgmasmParams& p) {
  if (m.n_rows() == 0) {
    throw InvalidInputError("multilevel setup: matrix must be non-empty");
  }
  if (p.component_index >= m.n_comp()) {
    throw InvalidInputError("multilevel setup: component_index out of range");
  }
  if (p.delta < 0) {
    throw InvalidInputError("multilevel setup: delta must be non-negative");
  }
  if (p.min_coarse == 0) {
    throw InvalidInputError("multilevel setup: min_coarse must be positive");
  }
}

std::vector<std::int32_t> replicate_owner(
    const std::vector<std::int32_t>& sub, std::size_t n_comp) {
  std::vector<std::int32_t> owner;
  owner.reserve(sub.size() * n_comp);
  for (std::size_t j = 0; j < n_comp; ++j) {
    owner.insert(owner.end(), sub.begin(), sub.end());
  }
  return owner;
}

MultilevelHierarchy build_hierarchy(const MultiComponentMatrix& m,
                                    const SgmasmParams& params,
                                    bool subspace) {
  validate_params(m, params);
  const std::size_t n_comp = m.n_comp();

  // Subdomains are spatial: partition the selected component's connectivity
  // and give every rank the same local rows in every component.
  const SparseMatrix comp = m.extract_component(params.component_index);
  const Partition sub_partition =
      hierarchical_partition(comp, params.np1, params.np2);

  CoarsenParams cp;
  cp.theta = params.theta;
  cp.agg = params.agg;
  cp.max_levels = params.max_levels;
  cp.min_coarse = subspace ? params.min_coarse : params.min_coarse * n_comp;
  const CoarsenHierarchy ch = coarsen_hierarchy(subspace ? comp : m.full(), cp);
  const std::size_t n_levels = ch.levels.size();

  // Per-level operators, interpolations, and row ownership.
  std::vector<MultiComponentMatrix> ops;
  std::vector<Interpolation> interps;
  std::vector<std::vector<std::int32_t>> owners;
  ops.reserve(n_levels);
  owners.push_back(replicate_owner(sub_partition.owner, n_comp));
  if (subspace) {
    ops.push_back(m);
    for (std::size_t l = 0; l + 1 < n_levels; ++l) {
      const SparseMatrix& p_sub = ch.interpolation[l];
      std::vector<SparseMatrix> blocks;
      blocks.reserve(n_comp);
      for (std::size_t j = 0; j < n_comp; ++j) {
        blocks.push_back(
            galerkin_triple_product(p_sub, ops[l].extract_component(j)));
      }
      ops.push_back(MultiComponentMatrix::from_blocks(blocks));
      interps.emplace_back(p_sub, n_comp);

      const std::vector<std::int64_t>& c2f = ch.coarse_to_fine[l];
      const std::size_t fine_per_comp = p_sub.n_rows();
      const std::vector<std::int32_t>& fine_owner = owners[l];
      std::vector<std::int32_t> coarse_owner(c2f.size() * n_comp);
      for (std::size_t j = 0; j < n_comp; ++j) {
        for (std::size_t c = 0; c < c2f.size(); ++c) {
          coarse_owner[j * c2f.size() + c] =
              fine_owner[j * fine_per_comp + static_cast<std::size_t>(c2f[c])];
        }
      }
      owners.push_back(std::move(coarse_owner));
    }
  } else {
    for (std::size_t l = 0; l < n_levels; ++l) {
      ops.push_back(MultiComponentMatrix::single(ch.levels[l]));
      if (l + 1 < n_levels) {
        interps.emplace_back(ch.interpolation[l], 1);
        const std::vector<std::int64_t>& c2f = ch.coarse_to_fine[l];
        const std::vector<std::int32_t>& fine_owner = owners[l];
        std::vector<std::int32_t> coarse_owner(c2f.size());
        for (std::size_t c = 0; c < c2f.size(); ++c) {
          coarse_owner[c] = fine_owner[static_cast<std::size_t>(c2f[c])];
        }
        owners.push_back(std::move(coarse_owner));
      }
    }
  }

  MultilevelHierarchy h;
  h.stats = ch.stats;
  h.levels.reserve(n_levels);
  for (std::size_t l = 0; l < n_levels; ++l) {
    HierarchyLevel level;
    level.m = std::move(ops[l]);
    level.owner = std::move(owners[l]);
    if (l + 1 < n_levels) {
      Partition part;
      part.np1 = params.np1;
      part.np2 = params.np2;
      part.owner = level.owner;
      const int delta = (l == 0) ? params.delta : 0;
      OverlapMap map = build_overlap_map(level.m.full(), part, delta);
      RasPreconditioner::Options smoother_options;
      smoother_options.sweeps = params.sweeps;
      smoother_options.omega = params.omega;
      smoother_options.exact = params.exact_subdomains;
      level.smoother.emplace(level.m.full(), std::move(map), smoother_options);
      level.interpolation = std::move(interps[l]);
    }
    h.levels.push_back(std::move(level));
  }
  h.coarsest = DenseLu(h.levels.back().m.full());
  return h;
}

DenseVector v_cycle(const MultilevelHierarchy& h, std::size_t l,
                    const DenseVector& r) {
  const HierarchyLevel& level = h.levels[l];
  if (l + 1 == h.levels.size()) {
    return h.coarsest.solve(r);
  }
  const SparseMatrix& m = level.m.full();

  // One RAS-preconditioned Richardson iteration from a zero guess.
  DenseVector e = level.smoother->apply(r);

  // Coarse-grid correction of the smoothed residual.
  DenseVector residual = r;
  spmv_add(m, e, -1.0, residual);
  const DenseVector coarse =
      v_cycle(h, l + 1, level.interpolation->apply_transpose(residual));
  axpy(1.0, level.interpolation->apply(coarse), e);

  // One more smoother iteration on the corrected iterate.
  residual = r;
  spmv_add(m, e, -1.0, residual);
  axpy(1.0, level.smoother->apply(residual), e);
  return e;
}

}  // namespace

MultilevelHierarchy setup_sgmasm(const MultiComponentMatrix& m,
                                 const SgmasmParams& params) {
  return build_hierarchy(m, params, true);
}

MultilevelHierarchy setup_masm(const MultiComponentMatrix& m,
                               const SgmasmParams& params) {
  return build_hierarchy(m, params, false);
}

DenseVector pc_apply(const MultilevelHierarchy& h, const DenseVector& r) {
  if (h.levels.empty()) {
    throw InvalidInputError("pc_apply: hierarchy has no levels");
  }
  if (r.size() != h.n_rows()) {
    throw DimensionError("pc_apply: residual size mismatch");
  }
  return v_cycle(h, 0, r);
}

Preconditioner Preconditioner::build(const MultiComponentMatrix& m,
                                     const PreconditionerParams& params) {
  Preconditioner pc;
  pc.kind_ = params.kind;
  switch (params.kind) {
    case PreconditionerKind::sgmasm:
      pc.hierarchy_ = setup_sgmasm(m, params.multilevel);
      break;
    case PreconditionerKind::masm:
      pc.hierarchy_ = setup_masm(m, params.multilevel);
      break;
    case PreconditionerKind::ras: {
      const SgmasmParams& p = params.multilevel;
      validate_params(m, p);
      const Partition sub = hierarchical_partition(
          m.extract_component(p.component_index), p.np1, p.np2);
      Partition part;
      part.np1 = p.np1;
      part.np2 = p.np2;
      part.owner = replicate_owner(sub.owner, m.n_comp());
      OverlapMap map = build_overlap_map(m.full(), part, p.delta);
      RasPreconditioner::Options options;
      options.sweeps = p.sweeps;
      options.omega = p.omega;
      options.exact = p.exact_subdomains;
      pc.ras_.emplace(m.full(), std::move(map), options);
      break;
    }
    case PreconditionerKind::none:
      break;
  }
  return pc;
}

DenseVector Preconditioner::apply(const DenseVector& r) const {
  switch (kind_) {
    case PreconditionerKind::sgmasm:
    case PreconditionerKind::masm:
      return pc_apply(*hierarchy_, r);
    case PreconditionerKind::ras:
      return ras_->apply(r);
    case PreconditionerKind::none:
      break;
  }
  return r;
}

LinearOperator Preconditioner::make_action() const {
  if (kind_ == PreconditionerKind::none) {
    return {};
  }
  return [this](const DenseVector& r) { return apply(r); };
}

std::size_t Preconditioner::memory_bytes() const {
  if (hierarchy_.has_value()) {
    return estimate_memory(*hierarchy_);
  }
  if (ras_.has_value()) {
    return ras_->storage_bytes();
  }
  return 0;
}

double Preconditioner::complexity() const {
  if (!hierarchy_.has_value() ||
      hierarchy_->levels.front().m.full().nnz() == 0) {
    return 1.0;
  }
  double total = 0.0;
  for (const HierarchyLevel& level : hierarchy_->levels) {
    total += static_cast<double>(level.m.full().nnz());
  }
  return total /
         static_cast<double>(hierarchy_->levels.front().m.full().nnz());
}

std::size_t Preconditioner::setup_nnz() const {
  return hierarchy_.has_value() ? hierarchy_->stats.strength_nnz : 0;
}

std::size_t Preconditioner::rows_split() const {
  return hierarchy_.has_value() ? hierarchy_->stats.rows_split : 0;
}

std::size_t estimate_memory(const MultilevelHierarchy& h) {
  std::size_t total = h.coarsest.storage_bytes();
  for (const HierarchyLevel& level : h.levels) {
    total += level.m.full().storage_bytes();
    total += level.owner.size() * sizeof(std::int32_t);
    if (level.smoother.has_value()) {
      total += level.smoother->storage_bytes();
    }
    if (level.interpolation.has_value()) {
      total += level.interpolation->storage_bytes();
    }
  }
  return total;
}

}  // namespace critkit
