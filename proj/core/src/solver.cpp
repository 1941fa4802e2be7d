// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "maxdd/solver.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include "maxdd/parallel.hpp"

namespace maxdd
{

std::string_view method_name(Method m)
{
  switch (m)
  {
    case Method::Identity:
      return "none";
    case Method::AS:
      return "AS";
    case Method::ASNK:
      return "AS-NK";
    case Method::ASSNK:
      return "AS-SNK";
    case Method::ASNKGenEO:
      return "AS-NK-GenEO";
    case Method::ASSNKGenEO:
      return "AS-SNK-GenEO";
  }
  return "unknown";
}

Method method_from_name(std::string_view name)
{
  for (Method m : {Method::Identity, Method::AS, Method::ASNK, Method::ASSNK, Method::ASNKGenEO,
                   Method::ASSNKGenEO})
  {
    if (name == method_name(m))
    {
      return m;
    }
  }
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

CoarseKind coarse_kind_of(Method m)
{
  switch (m)
  {
    case Method::ASNK:
      return CoarseKind::NK;
    case Method::ASSNK:
      return CoarseKind::SNK;
    case Method::ASNKGenEO:
      return CoarseKind::NKGenEO;
    case Method::ASSNKGenEO:
      return CoarseKind::SNKGenEO;
    default:
      return CoarseKind::None;
  }
}

bool uses_geneo(Method m) { return m == Method::ASNKGenEO || m == Method::ASSNKGenEO; }

void LinearOperator::apply_block(const DenseMatrix &x, DenseMatrix &y) const
{
  y.resize(size(), x.cols());
  Vector out(size());
  for (Eigen::Index j = 0; j < x.cols(); ++j)
  {
    apply(x.col(j), out);
    y.col(j) = out;
  }
}

SchwarzPreconditioner::SchwarzPreconditioner(const std::vector<LocalProblem> &locals,
                                             const CoarseSpace *coarse, int num_dofs,
                                             int threads)
  : locals_(locals), coarse_(coarse), n_(num_dofs), threads_(threads)
{
  for (const auto &lp : locals_)
  {
    if (!lp.solver)
    {
      throw std::invalid_argument("subdomain " + std::to_string(lp.id) + " is not factorized");
    }
  }
}

void SchwarzPreconditioner::apply_one_level(const Vector &r, Vector &z) const
{
  const int n_sub = static_cast<int>(locals_.size());
  std::vector<Vector> local(n_sub);
  parallel_for(n_sub, threads_,
               [&](int i) { local[i] = locals_[i].solve(restrict_to(*locals_[i].dofs, r)); });
  z.setZero(n_);
  for (int i = 0; i < n_sub; ++i)
  {
    prolong_add(*locals_[i].dofs, local[i], z);
  }
}

void SchwarzPreconditioner::apply(const Vector &r, Vector &z) const
{
  if (coarse_ == nullptr || coarse_->empty())
  {
    apply_one_level(r, z);
    return;
  }
  Vector local;
  apply_one_level(coarse_->complement_transpose(r), local);
  z = coarse_->solve(r) + coarse_->complement(local);
}

void SchwarzPreconditioner::apply_one_level_block(const DenseMatrix &r, DenseMatrix &z) const
{
  const int n_sub = static_cast<int>(locals_.size());
  std::vector<DenseMatrix> local(n_sub);
  parallel_for(n_sub, threads_,
               [&](int i)
               {
                 const auto &dofs = *locals_[i].dofs;
                 DenseMatrix rl(static_cast<Eigen::Index>(dofs.size()), r.cols());
                 for (std::size_t k = 0; k < dofs.size(); ++k)
                 {
                   rl.row(static_cast<Eigen::Index>(k)) = r.row(dofs[k]);
                 }
                 local[i] = locals_[i].solver->solve(rl);
               });
  z.setZero(n_, r.cols());
  for (int i = 0; i < n_sub; ++i)
  {
    const auto &dofs = *locals_[i].dofs;
    for (std::size_t k = 0; k < dofs.size(); ++k)
    {
      z.row(dofs[k]) += local[i].row(static_cast<Eigen::Index>(k));
    }
  }
}

void SchwarzPreconditioner::apply_block(const DenseMatrix &r, DenseMatrix &z) const
{
  if (coarse_ == nullptr || coarse_->empty())
  {
    apply_one_level_block(r, z);
    return;
  }
  DenseMatrix local;
  apply_one_level_block(coarse_->complement_transpose_block(r), local);
  z = coarse_->solve_block(r) + coarse_->complement_block(local);
}

namespace
{

using Clock = std::chrono::steady_clock;

struct Givens
{
  double c = 1.0, s = 0.0;
};

Givens make_givens(double a, double b)
{
  if (b == 0.0)
  {
    return {1.0, 0.0};
  }
  const double r = std::hypot(a, b);
  return {a / r, b / r};
}

}  // namespace

SolveReport gmres_solve(const LinearOperator &a, const Vector &b, const LinearOperator &m,
                        const GmresOptions &opts)
{
  const auto start = Clock::now();
  const int n = a.size();
  SolveReport rep;
  rep.solution = Vector::Zero(n);
  const double bnorm = b.norm();
  rep.residuals.push_back(1.0);
  if (bnorm == 0.0)
  {
    rep.converged = true;
    return rep;
  }
  const int cycle = opts.restart > 0 ? opts.restart : opts.max_iterations;
  Vector x = Vector::Zero(n);
  Vector r = b;
  Vector w(n), pw(n);

  while (rep.iterations < opts.max_iterations)
  {
    const double beta = r.norm();
    const int k_max = std::min(cycle, opts.max_iterations - rep.iterations);
    DenseMatrix v(n, k_max + 1);
    DenseMatrix h = DenseMatrix::Zero(k_max + 1, k_max);
    std::vector<Givens> rot(k_max);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(k_max + 1);
    g[0] = beta;
    v.col(0) = r / beta;
    int k = 0;
    bool done = false;
    while (k < k_max && !done)
    {
      m.apply(v.col(k), pw);
      a.apply(pw, w);
      for (int i = 0; i <= k; ++i)
      {
        h(i, k) = v.col(i).dot(w);
        w.noalias() -= h(i, k) * v.col(i);
      }
      double wnorm = w.norm();
      // Second pass only when the first one left a measurable component behind.
      Eigen::VectorXd check = v.leftCols(k + 1).transpose() * w;
      if (wnorm > 0.0 && check.cwiseAbs().maxCoeff() > 1e-8 * wnorm)
      {
        w.noalias() -= v.leftCols(k + 1) * check;
        h.col(k).head(k + 1) += check;
        wnorm = w.norm();
      }
      h(k + 1, k) = wnorm;
      for (int i = 0; i < k; ++i)
      {
        const double t = rot[i].c * h(i, k) + rot[i].s * h(i + 1, k);
        h(i + 1, k) = -rot[i].s * h(i, k) + rot[i].c * h(i + 1, k);
        h(i, k) = t;
      }
      rot[k] = make_givens(h(k, k), h(k + 1, k));
      h(k, k) = rot[k].c * h(k, k) + rot[k].s * h(k + 1, k);
      h(k + 1, k) = 0.0;
      g[k + 1] = -rot[k].s * g[k];
      g[k] = rot[k].c * g[k];
      ++k;
      ++rep.iterations;
      const double rel = std::abs(g[k]) / bnorm;
      rep.residuals.push_back(rel);
      if (rel <= opts.tol)
      {
        done = true;
      }
      else if (wnorm == 0.0)
      {
        done = true;  // lucky breakdown
      }
      else
      {
        v.col(k) = w / wnorm;
      }
    }
    const Eigen::VectorXd y =
        h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    m.apply(v.leftCols(k) * y, pw);
    x += pw;
    a.apply(x, w);
    r = b - w;
    rep.final_residual = r.norm() / bnorm;
    // A converged estimate with a true residual above tol restarts from the current iterate.
    if (rep.final_residual <= opts.tol)
    {
      break;
    }
  }
  rep.converged = rep.final_residual <= opts.tol;
  rep.solution = std::move(x);
  rep.solve_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return rep;
}

namespace
{

DenseMatrix dense_cholesky_factor(const SparseMatrix &a)
{
  const DenseMatrix dense = DenseMatrix(ColSparse(a));
  Eigen::LLT<DenseMatrix> llt(dense);
  if (llt.info() != Eigen::Success)
  {
    throw std::runtime_error("system matrix is not positive definite");
  }
  return llt.matrixL();
}

}  // namespace

Eigen::VectorXd preconditioned_spectrum(const SparseMatrix &a, const LinearOperator &m)
{
  const int n = static_cast<int>(a.rows());
  const DenseMatrix l = dense_cholesky_factor(a);
  DenseMatrix s(n, n);
  // Blocks of columns keep the workspace small while still using level-3 kernels.
  const int block = 256;
  DenseMatrix ml;
  for (int j0 = 0; j0 < n; j0 += block)
  {
    const int nb = std::min(block, n - j0);
    m.apply_block(l.middleCols(j0, nb), ml);
    s.middleCols(j0, nb).noalias() = l.transpose() * ml;
  }
  s = 0.5 * (s + s.transpose());
  return symmetric_eigenvalues(std::move(s));
}

SpectrumEstimate estimate_extremes(const SparseMatrix &a, const LinearOperator &m,
                                   const SpectrumOptions &opts)
{
  const int n = static_cast<int>(a.rows());
  SpectrumEstimate est;
  if (n == 0)
  {
    return est;
  }
  if (n <= opts.dense_limit)
  {
    const Eigen::VectorXd ev = preconditioned_spectrum(a, m);
    est.lambda_min = ev[0];
    est.lambda_max = ev[n - 1];
    est.kappa = est.lambda_max / est.lambda_min;
    return est;
  }

  // Lanczos for M^{-1} A, self-adjoint in the A inner product, with full reorthogonalization.
  est.dense = false;
  const int steps = std::min(opts.lanczos_steps, n);
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  Vector q(n);
  for (int i = 0; i < n; ++i)
  {
    q[i] = normal(rng);
  }
  DenseMatrix basis(n, steps), a_basis(n, steps);
  Vector aq = a * q;
  double nq = std::sqrt(q.dot(aq));
  q /= nq;
  aq /= nq;
  std::vector<double> alpha, beta;
  Vector w(n);
  int k = 0;
  for (; k < steps; ++k)
  {
    basis.col(k) = q;
    a_basis.col(k) = aq;
    m.apply(aq, w);
    alpha.push_back(w.dot(aq));
    for (int pass = 0; pass < 2; ++pass)
    {
      const Eigen::VectorXd c = a_basis.leftCols(k + 1).transpose() * w;
      w.noalias() -= basis.leftCols(k + 1) * c;
    }
    const Vector aw = a * w;
    const double b = std::sqrt(std::max(w.dot(aw), 0.0));
    if (b <= 1e-14 * std::abs(alpha.back()))
    {
      ++k;
      break;
    }
    beta.push_back(b);
    q = w / b;
    aq = aw / b;
  }
  est.lanczos_steps = k;
  DenseMatrix t = DenseMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i)
  {
    t(i, i) = alpha[i];
    if (i + 1 < k)
    {
      t(i, i + 1) = t(i + 1, i) = beta[i];
    }
  }
  const Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(t, Eigen::EigenvaluesOnly);
  est.lambda_min = eig.eigenvalues()[0];
  est.lambda_max = eig.eigenvalues()[k - 1];
  est.kappa = est.lambda_max / est.lambda_min;
  return est;
}

}  // namespace maxdd
