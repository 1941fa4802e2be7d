// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "maxdd/dense.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <lapacke.h>

namespace maxdd
{

PivotedCholesky::PivotedCholesky(const DenseMatrix &spsd, double rel_tol)
{
  const auto n = static_cast<lapack_int>(spsd.rows());
  if (spsd.rows() != spsd.cols())
  {
    throw std::invalid_argument("pivoted Cholesky needs a square matrix");
  }
  if (n == 0)
  {
    return;
  }
  const double max_diag = spsd.diagonal().maxCoeff();
  if (!(max_diag > 0.0))
  {
    return;
  }
  DenseMatrix work = spsd;
  std::vector<lapack_int> piv(n);
  lapack_int rank = 0;
  const lapack_int info = LAPACKE_dpstrf(LAPACK_COL_MAJOR, 'L', n, work.data(), n, piv.data(),
                                         &rank, rel_tol * max_diag);
  if (info < 0)
  {
    throw std::runtime_error("dpstrf: illegal argument " + std::to_string(-info));
  }
  selected_.resize(rank);
  for (lapack_int k = 0; k < rank; ++k)
  {
    selected_[k] = piv[k] - 1;
  }
  factor_ = work.topLeftCorner(rank, rank).triangularView<Eigen::Lower>();
  const Eigen::VectorXd d = factor_.diagonal().array().square();
  max_pivot_ = rank > 0 ? d.maxCoeff() : 0.0;
  min_pivot_ = rank > 0 ? d.minCoeff() : 0.0;
}

void PivotedCholesky::solve_in_place(Eigen::Ref<DenseMatrix> b) const
{
  const auto l = factor_.triangularView<Eigen::Lower>();
  l.solveInPlace(b);
  l.transpose().solveInPlace(b);
}

GeneralizedEigenpairs symmetric_pencil_above(DenseMatrix a, DenseMatrix b, double lower)
{
  const auto n = static_cast<lapack_int>(a.rows());
  GeneralizedEigenpairs out;
  if (n == 0)
  {
    out.values.resize(0);
    out.vectors.resize(0, 0);
    return out;
  }
  lapack_int found = 0;
  Eigen::VectorXd w(n);
  DenseMatrix z(n, n);
  std::vector<lapack_int> ifail(n);
  const lapack_int info = LAPACKE_dsygvx(
      LAPACK_COL_MAJOR, 1, 'V', 'V', 'L', n, a.data(), n, b.data(), n, lower,
      std::numeric_limits<double>::max(), 0, 0, 0.0, &found, w.data(), z.data(), n, ifail.data());
  if (info != 0)
  {
    throw std::runtime_error("dsygvx failed with info = " + std::to_string(info));
  }
  out.values = w.head(found);
  out.vectors = z.leftCols(found);
  return out;
}

Eigen::VectorXd symmetric_eigenvalues(DenseMatrix s)
{
  const auto n = static_cast<lapack_int>(s.rows());
  Eigen::VectorXd w(n);
  if (n == 0)
  {
    return w;
  }
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, s.data(), n, w.data());
  if (info != 0)
  {
    throw std::runtime_error("dsyevd failed with info = " + std::to_string(info));
  }
  return w;
}

}  // namespace maxdd
