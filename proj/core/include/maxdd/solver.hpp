// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXDD_SOLVER_HPP
#define MAXDD_SOLVER_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>
#include "maxdd/coarse.hpp"

namespace maxdd
{

class LinearOperator
{
public:
  virtual ~LinearOperator() = default;
  virtual int size() const = 0;
  virtual void apply(const Vector &x, Vector &y) const = 0;
  // Applies the operator to every column. Override when a blocked kernel is cheaper.
  virtual void apply_block(const DenseMatrix &x, DenseMatrix &y) const;

  Vector operator()(const Vector &x) const
  {
    Vector y(size());
    apply(x, y);
    return y;
  }
};

class MatrixOperator : public LinearOperator
{
public:
  explicit MatrixOperator(const SparseMatrix &a) : a_(a) {}
  int size() const override { return static_cast<int>(a_.rows()); }
  void apply(const Vector &x, Vector &y) const override { y.noalias() = a_ * x; }

private:
  const SparseMatrix &a_;
};

class IdentityOperator : public LinearOperator
{
public:
  explicit IdentityOperator(int n) : n_(n) {}
  int size() const override { return n_; }
  void apply(const Vector &x, Vector &y) const override { y = x; }

private:
  int n_;
};

enum class Method
{
  Identity,
  AS,
  ASNK,
  ASSNK,
  ASNKGenEO,
  ASSNKGenEO
};

std::string_view method_name(Method m);
Method method_from_name(std::string_view name);
CoarseKind coarse_kind_of(Method m);
bool uses_geneo(Method m);

//
// One-level additive Schwarz, sum_i R_i^T A_i^{-1} R_i, optionally wrapped by the deflated
// two-level form Z E^{-1} Z^T + (I - P0) M_AS^{-1} (I - P0^T). Local contributions are summed
// in subdomain order whatever the thread count, so results are bitwise reproducible.
//
class SchwarzPreconditioner : public LinearOperator
{
public:
  SchwarzPreconditioner(const std::vector<LocalProblem> &locals, const CoarseSpace *coarse,
                        int num_dofs, int threads = 1);

  int size() const override { return n_; }
  void apply(const Vector &r, Vector &z) const override;
  void apply_block(const DenseMatrix &r, DenseMatrix &z) const override;
  void apply_one_level(const Vector &r, Vector &z) const;
  void apply_one_level_block(const DenseMatrix &r, DenseMatrix &z) const;

private:
  const std::vector<LocalProblem> &locals_;
  const CoarseSpace *coarse_;
  int n_;
  int threads_;
};

struct GmresOptions
{
  double tol = 1e-6;
  int max_iterations = 1000;
  int restart = 0;  // 0 = full GMRES
};

struct SolveReport
{
  int iterations = 0;
  bool converged = false;
  std::vector<double> residuals;  // relative residual estimates, starting at 1
  double final_residual = 0.0;    // true relative residual of the returned iterate
  double solve_seconds = 0.0;
  Vector solution;
};

// Right-preconditioned GMRES on A x = b from x = 0, modified Gram-Schmidt with selective
// reorthogonalization.
SolveReport gmres_solve(const LinearOperator &a, const Vector &b, const LinearOperator &m,
                        const GmresOptions &opts = {});

struct SpectrumEstimate
{
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa = 0.0;
  bool dense = true;
  int lanczos_steps = 0;
};

struct SpectrumOptions
{
  int dense_limit = 4000;
  int lanczos_steps = 200;
  std::uint64_t seed = 1;
};

// Extreme eigenvalues of M^{-1} A for symmetric positive definite A and M^{-1}. The dense path
// forms A = L L^T and the spectrum of L^T M^{-1} L; above `dense_limit` dofs Lanczos runs in the
// A inner product.
SpectrumEstimate estimate_extremes(const SparseMatrix &a, const LinearOperator &m,
                                   const SpectrumOptions &opts = {});

// All eigenvalues of L^T M^{-1} L, ascending (dense path only).
Eigen::VectorXd preconditioned_spectrum(const SparseMatrix &a, const LinearOperator &m);

}  // namespace maxdd

#endif  // MAXDD_SOLVER_HPP
