// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXDD_COARSE_HPP
#define MAXDD_COARSE_HPP

#include <memory>
#include <string_view>
#include <vector>
#include <Eigen/SparseCholesky>
#include "maxdd/assembly.hpp"
#include "maxdd/decomposition.hpp"
#include "maxdd/dense.hpp"

namespace maxdd
{

using ColSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using LocalSolver = Eigen::SimplicialLDLT<ColSparse, Eigen::Lower, Eigen::AMDOrdering<int>>;

//
// Subdomain operators. The Dirichlet block is factorized for the one-level solves; the
// Neumann matrix is the bilinear form re-assembled over the overlapping hexes only. The local
// near-kernel columns are the discrete gradient restricted to the subdomain, pruned so that
// their Gram matrix in the Dirichlet energy is nonsingular.
//
struct LocalProblem
{
  int id = 0;
  const std::vector<int> *dofs = nullptr;
  Vector weights;
  SparseMatrix dirichlet;
  SparseMatrix neumann;
  std::shared_ptr<LocalSolver> solver;

  // Pruned near-kernel columns G_i and A_i G_i, plus the factorization of G_i^T A_i G_i.
  ColSparse kernel;
  ColSparse a_kernel;
  PivotedCholesky kernel_gram;
  int kernel_candidates = 0;

  int size() const { return static_cast<int>(weights.size()); }

  Vector solve(const Vector &rhs) const;

  // xi v = G (G^T A_i G)^{-1} G^T A_i v and its transpose.
  Vector apply_xi(const Vector &v) const;
  Vector apply_xi_transpose(const Vector &v) const;
};

std::vector<LocalProblem> build_local_problems(const DiscreteProblem &problem,
                                               const OverlappingDecomposition &decomp,
                                               const PartitionOfUnity &pou, int threads = 1);

struct GenEOResult
{
  int subdomain = 0;
  double tau = 0.0;
  Eigen::VectorXd values;  // retained eigenvalues, descending, all > tau
  DenseMatrix vectors;     // matching eigenvectors in local coordinates

  int selected() const { return static_cast<int>(values.size()); }
};

// Left matrix (I - xi^T) D A_j D (I - xi), assembled densely in column blocks.
DenseMatrix geneo_left_matrix(const LocalProblem &local);
// A_j^Neu + delta * (trace / n) * I.
DenseMatrix geneo_right_matrix(const LocalProblem &local, double delta);

GenEOResult geneo_gevp(const LocalProblem &local, double tau, double delta = 1e-12);
std::vector<GenEOResult> solve_geneo(const std::vector<LocalProblem> &locals, double tau,
                                     double delta = 1e-12, int threads = 1);

// Candidate coarse columns in the global free-dof numbering.
ColSparse build_nk(const DiscreteProblem &problem);
ColSparse build_snk(const std::vector<LocalProblem> &locals, int num_dofs,
                    double drop_tol = 1e-14);
ColSparse build_geneo_columns(const std::vector<GenEOResult> &geneo,
                              const std::vector<LocalProblem> &locals, int num_dofs);

enum class CoarseKind
{
  None,
  NK,
  SNK,
  NKGenEO,
  SNKGenEO
};

std::string_view coarse_kind_name(CoarseKind kind);

//
// Coarse basis Z with every column scaled to unit energy, the retained (independent) subset
// found by a pivoted factorization of E = Z^T A Z, and A Z for the deflation projections.
//
class CoarseSpace
{
public:
  CoarseKind kind = CoarseKind::None;
  int nk_size = 0;
  int snk_size = 0;
  int geneo_size = 0;
  int candidates = 0;
  int dropped = 0;
  double e_condition = 1.0;

  int dim() const { return static_cast<int>(basis_.cols()); }
  bool empty() const { return dim() == 0; }
  const ColSparse &basis() const { return basis_; }
  const ColSparse &a_basis() const { return a_basis_; }

  // E^{-1} Z^T r on the retained columns.
  Eigen::VectorXd coarse_coefficients(const Vector &r) const;
  // Z E^{-1} Z^T r.
  Vector solve(const Vector &r) const;
  // P0 v = Z E^{-1} Z^T A v, and (I - P0) v, (I - P0^T) r.
  Vector project(const Vector &v) const;
  Vector complement(const Vector &v) const;
  Vector complement_transpose(const Vector &r) const;

  // Same, column by column on a block.
  DenseMatrix solve_block(const DenseMatrix &r) const;
  DenseMatrix complement_block(const DenseMatrix &v) const;
  DenseMatrix complement_transpose_block(const DenseMatrix &r) const;

  friend CoarseSpace assemble_coarse(CoarseKind kind, const std::vector<ColSparse> &blocks,
                                     const SparseMatrix &system, double rel_tol);

private:
  ColSparse basis_;
  ColSparse a_basis_;
  PivotedCholesky factor_;
};

// Concatenates the candidate blocks (in order), normalizes, and prunes dependent columns.
// Throws if E is numerically indefinite.
CoarseSpace assemble_coarse(CoarseKind kind, const std::vector<ColSparse> &blocks,
                            const SparseMatrix &system, double rel_tol = 1e-10);

}  // namespace maxdd

#endif  // MAXDD_COARSE_HPP
