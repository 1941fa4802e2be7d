// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXDD_DENSE_HPP
#define MAXDD_DENSE_HPP

#include <vector>
#include <Eigen/Core>

namespace maxdd
{

using DenseMatrix = Eigen::MatrixXd;

//
// Rank-revealing Cholesky factorization with diagonal pivoting of a symmetric positive
// semidefinite matrix S. The first `rank` pivots form an index set `selected` such that
// S(selected, selected) = L L^T with L lower triangular and well conditioned relative to the
// drop tolerance; remaining indices are numerically dependent.
//
class PivotedCholesky
{
public:
  PivotedCholesky() = default;

  // Factorization stops once the largest remaining Schur complement diagonal drops to
  // rel_tol * (largest diagonal of S) or below.
  PivotedCholesky(const DenseMatrix &spsd, double rel_tol);

  int rank() const { return static_cast<int>(selected_.size()); }
  const std::vector<int> &selected() const { return selected_; }
  const DenseMatrix &factor() const { return factor_; }
  double max_pivot() const { return max_pivot_; }
  double min_pivot() const { return min_pivot_; }

  // Solves S(selected, selected) X = B in place, column by column.
  void solve_in_place(Eigen::Ref<DenseMatrix> b) const;

private:
  std::vector<int> selected_;
  DenseMatrix factor_;
  double max_pivot_ = 0.0;
  double min_pivot_ = 0.0;
};

struct GeneralizedEigenpairs
{
  Eigen::VectorXd values;   // ascending
  DenseMatrix vectors;      // B-orthonormal columns
};

// Eigenpairs of the symmetric-definite pencil A v = lambda B v with lambda > lower. B must be
// positive definite. Throws std::runtime_error if LAPACK reports failure.
GeneralizedEigenpairs symmetric_pencil_above(DenseMatrix a, DenseMatrix b, double lower);

// All eigenvalues of a symmetric matrix, ascending.
Eigen::VectorXd symmetric_eigenvalues(DenseMatrix s);

}  // namespace maxdd

#endif  // MAXDD_DENSE_HPP
