// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "maxdd/backend.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <unistd.h>
#include <Eigen/Core>
#include <lapacke.h>

namespace maxdd
{

bool dense_backend_selftest()
{
  const int n = 256;
  Eigen::MatrixXd x(n, n);
  for (int j = 0; j < n; ++j)
  {
    for (int i = 0; i < n; ++i)
    {
      x(i, j) = std::sin(0.37 * i + 1.91 * j + 0.1 * i * j);
    }
  }
  const Eigen::MatrixXd a = x * x.transpose() / n + Eigen::MatrixXd::Identity(n, n);

  Eigen::MatrixXd l = a;
  if (LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', n, l.data(), n) != 0)
  {
    return false;
  }
  l = l.triangularView<Eigen::Lower>();
  if ((l * l.transpose() - a).norm() > 1e-10 * a.norm())
  {
    return false;
  }

  // Eigenvalues must reproduce the trace and the Frobenius norm.
  Eigen::MatrixXd s = a;
  Eigen::VectorXd w(n);
  if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, s.data(), n, w.data()) != 0)
  {
    return false;
  }
  return std::abs(w.sum() - a.trace()) <= 1e-10 * a.trace() &&
         std::abs(w.squaredNorm() - a.squaredNorm()) <= 1e-10 * a.squaredNorm();
}

void ensure_dense_backend(char **argv)
{
  if (dense_backend_selftest())
  {
    return;
  }
  if (std::getenv("OPENBLAS_CORETYPE") != nullptr)
  {
    throw std::runtime_error(
        "LAPACK/BLAS self-test failed; the selected OPENBLAS_CORETYPE produces wrong results");
  }
  __builtin_cpu_init();
  const char *core = __builtin_cpu_supports("avx512f") ? "SkylakeX"
                     : __builtin_cpu_supports("avx2")  ? "Haswell"
                                                       : "Nehalem";
  setenv("OPENBLAS_CORETYPE", core, 1);
  execv("/proc/self/exe", argv);
  throw std::runtime_error("LAPACK/BLAS self-test failed and re-execution was not possible");
}

}  // namespace maxdd
