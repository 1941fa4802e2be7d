// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "maxdd/coarse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include "maxdd/parallel.hpp"

namespace maxdd
{

namespace
{

// Writes the position of every entry of `dofs` into `scratch`, leaving other entries as they are.
void bind_local_index(const std::vector<int> &dofs, std::vector<int> &scratch)
{
  for (std::size_t k = 0; k < dofs.size(); ++k)
  {
    scratch[dofs[k]] = static_cast<int>(k);
  }
}

SparseMatrix extract_block(const SparseMatrix &a, const std::vector<int> &dofs,
                           const std::vector<int> &local_of)
{
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t r = 0; r < dofs.size(); ++r)
  {
    for (SparseMatrix::InnerIterator it(a, dofs[r]); it; ++it)
    {
      if (const int c = local_of[it.col()]; c >= 0)
      {
        triplets.emplace_back(static_cast<int>(r), c, it.value());
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(dofs.size());
  SparseMatrix block(n, n);
  block.setFromTriplets(triplets.begin(), triplets.end());
  block.makeCompressed();
  return block;
}

ColSparse columns_from_triplets(int rows, int cols,
                                const std::vector<Eigen::Triplet<double>> &triplets)
{
  ColSparse z(rows, cols);
  z.setFromTriplets(triplets.begin(), triplets.end());
  z.makeCompressed();
  return z;
}

LocalProblem build_one(const DiscreteProblem &problem, const OverlappingDecomposition &decomp,
                       const PartitionOfUnity &pou, int i)
{
  const auto &dofs = decomp.dofs[i];
  const auto &nodes = decomp.node_dofs[i];
  const int n = static_cast<int>(dofs.size());
  if (n == 0)
  {
    throw std::invalid_argument("subdomain " + std::to_string(i) + " has no free dofs");
  }
  LocalProblem lp;
  lp.id = i;
  lp.dofs = &dofs;
  lp.weights = pou.weights[i];

  std::vector<int> local_of(problem.num_dofs(), -1);
  bind_local_index(dofs, local_of);
  lp.dirichlet = extract_block(problem.system, dofs, local_of);

  // Neumann matrix: only the hexes of the overlapping subdomain contribute.
  const auto &mesh = problem.mesh;
  std::vector<int> edge_to_row(mesh.num_edges(), -1);
  for (int e = 0; e < mesh.num_edges(); ++e)
  {
    if (const int f = problem.edge_dofs.entity_to_free[e]; f >= 0)
    {
      edge_to_row[e] = local_of[f];
    }
  }
  lp.neumann =
      assemble_local_system(mesh, problem.coeff, decomp.overlap_hexes[i], edge_to_row, n);

  lp.solver = std::make_shared<LocalSolver>();
  lp.solver->compute(ColSparse(lp.dirichlet));
  if (lp.solver->info() != Eigen::Success)
  {
    throw std::runtime_error("local factorization failed in subdomain " + std::to_string(i));
  }

  // Local near-kernel: rows dofs[i], columns node_dofs[i] of the discrete gradient.
  std::vector<int> node_col(problem.gradient.matrix.cols(), -1);
  bind_local_index(nodes, node_col);
  std::vector<Eigen::Triplet<double>> triplets;
  const auto &c = problem.gradient.matrix;
  for (int r = 0; r < n; ++r)
  {
    for (SparseMatrix::InnerIterator it(c, dofs[r]); it; ++it)
    {
      if (const int col = node_col[it.col()]; col >= 0)
      {
        triplets.emplace_back(r, col, it.value());
      }
    }
  }
  const ColSparse g_all =
      columns_from_triplets(n, static_cast<int>(nodes.size()), triplets);
  lp.kernel_candidates = static_cast<int>(g_all.cols());

  const ColSparse ag_all = ColSparse(lp.dirichlet) * g_all;
  const DenseMatrix gram = DenseMatrix(ColSparse(g_all.transpose()) * ag_all);
  const PivotedCholesky pruned(gram, 1e-10);

  // Keep the selected columns in pivot order so the factor applies directly.
  std::vector<Eigen::Triplet<double>> kept, a_kept;
  for (int k = 0; k < pruned.rank(); ++k)
  {
    const int col = pruned.selected()[k];
    for (ColSparse::InnerIterator it(g_all, col); it; ++it)
    {
      kept.emplace_back(static_cast<int>(it.row()), k, it.value());
    }
    for (ColSparse::InnerIterator it(ag_all, col); it; ++it)
    {
      a_kept.emplace_back(static_cast<int>(it.row()), k, it.value());
    }
  }
  lp.kernel = columns_from_triplets(n, pruned.rank(), kept);
  lp.a_kernel = columns_from_triplets(n, pruned.rank(), a_kept);
  lp.kernel_gram = pruned;
  return lp;
}

}  // namespace

Vector LocalProblem::solve(const Vector &rhs) const { return solver->solve(rhs); }

Vector LocalProblem::apply_xi(const Vector &v) const
{
  if (kernel.cols() == 0)
  {
    return Vector::Zero(v.size());
  }
  Eigen::VectorXd t = a_kernel.transpose() * v;
  kernel_gram.solve_in_place(t);
  return kernel * t;
}

Vector LocalProblem::apply_xi_transpose(const Vector &v) const
{
  if (kernel.cols() == 0)
  {
    return Vector::Zero(v.size());
  }
  Eigen::VectorXd t = kernel.transpose() * v;
  kernel_gram.solve_in_place(t);
  return a_kernel * t;
}

std::vector<LocalProblem> build_local_problems(const DiscreteProblem &problem,
                                               const OverlappingDecomposition &decomp,
                                               const PartitionOfUnity &pou, int threads)
{
  std::vector<LocalProblem> locals(decomp.size());
  parallel_for(decomp.size(), threads,
               [&](int i) { locals[i] = build_one(problem, decomp, pou, i); });
  return locals;
}

DenseMatrix geneo_left_matrix(const LocalProblem &local)
{
  const int n = local.size();
  const int block = 128;
  DenseMatrix left(n, n);
  const ColSparse a = ColSparse(local.dirichlet);
  const auto &d = local.weights;
  for (int c0 = 0; c0 < n; c0 += block)
  {
    const int bs = std::min(block, n - c0);
    DenseMatrix x = DenseMatrix::Zero(n, bs);
    for (int k = 0; k < bs; ++k)
    {
      x(c0 + k, k) = 1.0;
    }
    // Y = D (I - xi) X
    if (local.kernel.cols() > 0)
    {
      DenseMatrix t = DenseMatrix(local.a_kernel.transpose() * x);
      local.kernel_gram.solve_in_place(t);
      x -= local.kernel * t;
    }
    x = d.asDiagonal() * x;
    // (I - xi^T) D A Y
    DenseMatrix u = d.asDiagonal() * (a * x);
    if (local.kernel.cols() > 0)
    {
      DenseMatrix t = DenseMatrix(local.kernel.transpose() * u);
      local.kernel_gram.solve_in_place(t);
      u -= local.a_kernel * t;
    }
    left.middleCols(c0, bs) = u;
  }
  return 0.5 * (left + left.transpose());
}

DenseMatrix geneo_right_matrix(const LocalProblem &local, double delta)
{
  DenseMatrix right = DenseMatrix(ColSparse(local.neumann));
  const int n = local.size();
  const double shift = delta * right.trace() / n;
  right.diagonal().array() += shift;
  return right;
}

GenEOResult geneo_gevp(const LocalProblem &local, double tau, double delta)
{
  if (!(tau > 0.0))
  {
    throw std::invalid_argument("GenEO threshold must be positive");
  }
  GenEOResult res;
  res.subdomain = local.id;
  res.tau = tau;
  GeneralizedEigenpairs pairs;
  try
  {
    pairs = symmetric_pencil_above(geneo_left_matrix(local), geneo_right_matrix(local, delta),
                                   tau);
  }
  catch (const std::runtime_error &e)
  {
    throw std::runtime_error("GenEO eigensolve failed in subdomain " +
                             std::to_string(local.id) + ": " + e.what());
  }
  const int m = static_cast<int>(pairs.values.size());
  res.values = pairs.values.reverse();
  res.vectors = pairs.vectors.rowwise().reverse();
  // Guard against pairs reported at the threshold itself.
  int keep = 0;
  while (keep < m && res.values[keep] > tau)
  {
    ++keep;
  }
  res.values.conservativeResize(keep);
  res.vectors.conservativeResize(Eigen::NoChange, keep);
  return res;
}

std::vector<GenEOResult> solve_geneo(const std::vector<LocalProblem> &locals, double tau,
                                     double delta, int threads)
{
  std::vector<GenEOResult> out(locals.size());
  parallel_for(static_cast<int>(locals.size()), threads,
               [&](int j) { out[j] = geneo_gevp(locals[j], tau, delta); });
  return out;
}

ColSparse build_nk(const DiscreteProblem &problem) { return ColSparse(problem.gradient.matrix); }

ColSparse build_snk(const std::vector<LocalProblem> &locals, int num_dofs, double drop_tol)
{
  std::vector<Eigen::Triplet<double>> triplets;
  int col = 0;
  for (const auto &lp : locals)
  {
    const auto &dofs = *lp.dofs;
    for (int k = 0; k < lp.kernel.cols(); ++k)
    {
      double norm2 = 0.0;
      for (ColSparse::InnerIterator it(lp.kernel, k); it; ++it)
      {
        const double v = lp.weights[it.row()] * it.value();
        norm2 += v * v;
      }
      if (std::sqrt(norm2) < drop_tol)
      {
        continue;
      }
      for (ColSparse::InnerIterator it(lp.kernel, k); it; ++it)
      {
        const double v = lp.weights[it.row()] * it.value();
        if (v != 0.0)
        {
          triplets.emplace_back(dofs[it.row()], col, v);
        }
      }
      ++col;
    }
  }
  return columns_from_triplets(num_dofs, col, triplets);
}

ColSparse build_geneo_columns(const std::vector<GenEOResult> &geneo,
                              const std::vector<LocalProblem> &locals, int num_dofs)
{
  std::vector<Eigen::Triplet<double>> triplets;
  int col = 0;
  for (const auto &res : geneo)
  {
    const auto &lp = locals[res.subdomain];
    const auto &dofs = *lp.dofs;
    for (int k = 0; k < res.selected(); ++k)
    {
      const Vector v = res.vectors.col(k);
      const Vector w = lp.weights.cwiseProduct(v - lp.apply_xi(v));
      for (int r = 0; r < w.size(); ++r)
      {
        if (w[r] != 0.0)
        {
          triplets.emplace_back(dofs[r], col, w[r]);
        }
      }
      ++col;
    }
  }
  return columns_from_triplets(num_dofs, col, triplets);
}

std::string_view coarse_kind_name(CoarseKind kind)
{
  switch (kind)
  {
    case CoarseKind::None:
      return "none";
    case CoarseKind::NK:
      return "NK";
    case CoarseKind::SNK:
      return "SNK";
    case CoarseKind::NKGenEO:
      return "NK+GenEO";
    case CoarseKind::SNKGenEO:
      return "SNK+GenEO";
  }
  return "unknown";
}

Eigen::VectorXd CoarseSpace::coarse_coefficients(const Vector &r) const
{
  Eigen::VectorXd t = basis_.transpose() * r;
  factor_.solve_in_place(t);
  return t;
}

Vector CoarseSpace::solve(const Vector &r) const
{
  if (empty())
  {
    return Vector::Zero(r.size());
  }
  return basis_ * coarse_coefficients(r);
}

Vector CoarseSpace::project(const Vector &v) const
{
  if (empty())
  {
    return Vector::Zero(v.size());
  }
  Eigen::VectorXd t = a_basis_.transpose() * v;
  factor_.solve_in_place(t);
  return basis_ * t;
}

Vector CoarseSpace::complement(const Vector &v) const { return v - project(v); }

Vector CoarseSpace::complement_transpose(const Vector &r) const
{
  if (empty())
  {
    return r;
  }
  return r - a_basis_ * coarse_coefficients(r);
}

DenseMatrix CoarseSpace::solve_block(const DenseMatrix &r) const
{
  if (empty())
  {
    return DenseMatrix::Zero(r.rows(), r.cols());
  }
  DenseMatrix t = basis_.transpose() * r;
  factor_.solve_in_place(t);
  return basis_ * t;
}

DenseMatrix CoarseSpace::complement_block(const DenseMatrix &v) const
{
  if (empty())
  {
    return v;
  }
  DenseMatrix t = a_basis_.transpose() * v;
  factor_.solve_in_place(t);
  return v - basis_ * t;
}

DenseMatrix CoarseSpace::complement_transpose_block(const DenseMatrix &r) const
{
  if (empty())
  {
    return r;
  }
  DenseMatrix t = basis_.transpose() * r;
  factor_.solve_in_place(t);
  return r - a_basis_ * t;
}

CoarseSpace assemble_coarse(CoarseKind kind, const std::vector<ColSparse> &blocks,
                            const SparseMatrix &system, double rel_tol)
{
  CoarseSpace cs;
  cs.kind = kind;
  const auto n = system.rows();
  int total = 0;
  for (const auto &b : blocks)
  {
    if (b.rows() != n)
    {
      throw std::invalid_argument("coarse block has the wrong number of rows");
    }
    total += static_cast<int>(b.cols());
  }
  cs.candidates = total;
  if (total == 0)
  {
    cs.basis_.resize(n, 0);
    cs.a_basis_.resize(n, 0);
    return cs;
  }

  // Concatenate, then scale every column to unit energy so the drop tolerance is relative.
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<int> origin;
  int offset = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b)
  {
    for (int k = 0; k < blocks[b].cols(); ++k)
    {
      for (ColSparse::InnerIterator it(blocks[b], k); it; ++it)
      {
        triplets.emplace_back(static_cast<int>(it.row()), offset + k, it.value());
      }
      origin.push_back(static_cast<int>(b));
    }
    offset += static_cast<int>(blocks[b].cols());
  }
  ColSparse z = columns_from_triplets(static_cast<int>(n), total, triplets);
  const ColSparse a = ColSparse(system);
  ColSparse az = a * z;
  Eigen::VectorXd scale(total);
  for (int k = 0; k < total; ++k)
  {
    const double energy = z.col(k).dot(az.col(k));
    if (!(energy >= 0.0) || !std::isfinite(energy))
    {
      throw std::runtime_error("coarse matrix is indefinite: column " + std::to_string(k) +
                               " has energy " + std::to_string(energy));
    }
    scale[k] = energy > 0.0 ? 1.0 / std::sqrt(energy) : 0.0;
  }
  z = z * scale.asDiagonal();
  az = az * scale.asDiagonal();

  DenseMatrix e = DenseMatrix(ColSparse(z.transpose()) * az);
  e = 0.5 * (e + e.transpose());
  cs.factor_ = PivotedCholesky(e, rel_tol);
  const int rank = cs.factor_.rank();
  cs.dropped = total - rank;
  cs.e_condition = rank > 0 ? cs.factor_.max_pivot() / cs.factor_.min_pivot() : 1.0;

  std::vector<Eigen::Triplet<double>> kept, a_kept;
  std::array<int, 2> per_block{0, 0};
  for (int k = 0; k < rank; ++k)
  {
    const int col = cs.factor_.selected()[k];
    per_block[std::min(origin[col], 1)]++;
    for (ColSparse::InnerIterator it(z, col); it; ++it)
    {
      kept.emplace_back(static_cast<int>(it.row()), k, it.value());
    }
    for (ColSparse::InnerIterator it(az, col); it; ++it)
    {
      a_kept.emplace_back(static_cast<int>(it.row()), k, it.value());
    }
  }
  cs.basis_ = columns_from_triplets(static_cast<int>(n), rank, kept);
  cs.a_basis_ = columns_from_triplets(static_cast<int>(n), rank, a_kept);

  // Kernel-type block first, GenEO block second.
  switch (kind)
  {
    case CoarseKind::NK:
    case CoarseKind::NKGenEO:
      cs.nk_size = per_block[0];
      break;
    case CoarseKind::SNK:
    case CoarseKind::SNKGenEO:
      cs.snk_size = per_block[0];
      break;
    case CoarseKind::None:
      break;
  }
  if (kind == CoarseKind::NKGenEO || kind == CoarseKind::SNKGenEO)
  {
    cs.geneo_size = blocks.size() > 1 ? static_cast<int>(blocks[1].cols()) : 0;
  }
  return cs;
}

}  // namespace maxdd
