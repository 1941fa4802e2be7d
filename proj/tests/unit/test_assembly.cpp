// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstring>
#include <gtest/gtest.h>
#include "maxdd/assembly.hpp"
#include "oracles.hpp"

namespace maxdd
{
namespace
{

BCSpec all_neumann()
{
  BCSpec bc;
  bc.faces.fill(BoundaryKind::Neumann);
  return bc;
}

Mesh small_holes_mesh()
{
  BeamGeometry g;
  g.length = 1;
  g.h = 0.125;
  g.holes = HoleSpec::standard();
  return build_beam_mesh(g);
}

double max_abs(const SparseMatrix &a)
{
  double m = 0.0;
  for (int k = 0; k < a.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
    {
      m = std::max(m, std::abs(it.value()));
    }
  }
  return m;
}

TEST(Element, MatricesMatchClosedForms)
{
  for (const std::array<double, 3> h : {std::array<double, 3>{1.0, 1.0, 1.0},
                                         std::array<double, 3>{0.5, 0.25, 0.125}})
  {
    const auto k = element_curl_curl(h), m = element_mass(h);
    const auto ko = test::closed_form_curl_curl(h), mo = test::closed_form_mass(h);
    EXPECT_LE((k - ko).norm(), 1e-13 * ko.norm());
    EXPECT_LE((m - mo).norm(), 1e-13 * mo.norm());
    const Eigen::Vector3d f(1.0, -2.0, 0.5);
    EXPECT_LE((element_load(h, f) - test::closed_form_load(h, f)).norm(), 1e-14);
  }
}

TEST(Element, CurlCurlKernelIsLocalGradient)
{
  const auto k = element_curl_curl({1.0, 1.0, 1.0});
  const auto g = test::local_gradient();
  EXPECT_LE((k * g).norm(), 1e-14 * k.norm());

  // Rank from a dense eigensolve versus the dimension of the gradient range.
  const auto ev = test::dense_eigenvalues(k);
  int rank = 0;
  for (int i = 0; i < 12; ++i)
  {
    EXPECT_GE(ev[i], -1e-12 * ev[11]);
    rank += ev[i] > 1e-10 * ev[11];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
  svd.setThreshold(1e-10);
  EXPECT_EQ(rank, 12 - static_cast<int>(svd.rank()));
  RecordProperty("element_curl_curl_rank", rank);
}

TEST(Element, MassIsPositiveAndIntegratesConstantField)
{
  const std::array<double, 3> h{0.5, 0.25, 0.125};
  const auto m = element_mass(h);
  EXPECT_GT(test::dense_eigenvalues(m)[0], 0.0);
  // u = (1, 0, 0): x edges carry circulation h_x, others zero.
  ElementVector u = ElementVector::Zero();
  u.head<4>().setConstant(h[0]);
  EXPECT_NEAR(u.dot(m * u), h[0] * h[1] * h[2], 1e-15);
}

TEST(Assembly, TwoHexesWithDifferentMu)
{
  const auto mesh = build_grid_mesh({2, 1, 1}, {1.0, 1.0, 1.0});
  auto coeff = CoefficientField::uniform(2, 1.0, 1.0, 1e-3);
  coeff.mu = {1.0, 10.0};
  const auto tags = tag_boundary(mesh, all_neumann());
  const auto k = test::to_dense(assemble_curl_curl(mesh, coeff, tags));
  const auto oracle = test::dense_assembly(mesh, coeff, all_neumann());
  ASSERT_EQ(k.rows(), oracle.k.rows());
  EXPECT_LE((k - oracle.k).norm(), 1e-14 * oracle.k.norm());
}

TEST(Assembly, MatchesDenseOracleWithHoles)
{
  const auto mesh = small_holes_mesh();
  auto coeff = CoefficientField::uniform(mesh.num_hexes(), 1.0, 1.0, 1e-3);
  for (int t = 0; t < mesh.num_hexes(); ++t)
  {
    coeff.mu[t] = 1.0 + (t % 5);
    coeff.eps[t] = 1.0 + (t % 3) * 0.5;
  }
  for (const auto &bc : {BCSpec::all_dirichlet(), BCSpec::mixed_lateral()})
  {
    const auto tags = tag_boundary(mesh, bc);
    const auto oracle = test::dense_assembly(mesh, coeff, bc);
    const auto k = test::to_dense(assemble_curl_curl(mesh, coeff, tags));
    const auto m = test::to_dense(assemble_mass(mesh, coeff, tags));
    ASSERT_EQ(k.rows(), oracle.k.rows());
    EXPECT_LE((k - oracle.k).norm(), 1e-13 * oracle.k.norm());
    EXPECT_LE((m - oracle.m).norm(), 1e-13 * oracle.m.norm());
  }
}

TEST(Assembly, DefinitenessOnSmallMesh)
{
  const auto mesh = small_holes_mesh();
  auto coeff = CoefficientField::uniform(mesh.num_hexes(), 1.0, 1.0, 1e-3);
  const auto problem = assemble_problem(mesh, BCSpec::mixed_lateral(), coeff);
  ASSERT_LE(problem.num_dofs(), 2000);
  const auto k = test::dense_eigenvalues(test::to_dense(problem.curl_curl));
  const auto m = test::dense_eigenvalues(test::to_dense(problem.mass));
  const auto a = test::dense_eigenvalues(test::to_dense(problem.system));
  EXPECT_GE(k[0], -1e-12 * k[k.size() - 1]);
  EXPECT_GT(m[0], 0.0);
  EXPECT_GT(a[0], 0.0);
}

TEST(Assembly, SystemLowerBoundOnThreeHexes)
{
  BeamGeometry g;
  g.length = 3;
  g.h = 1.0;
  const auto mesh = build_beam_mesh(g);
  for (double gamma : {1e-3, 1.0})
  {
    const auto problem =
        assemble_problem(mesh, all_neumann(), CoefficientField::uniform(3, 1.0, 1.0, gamma));
    const double a_min = test::dense_eigenvalues(test::to_dense(problem.system))[0];
    const double m_min = test::dense_eigenvalues(test::to_dense(problem.mass))[0];
    EXPECT_GE(a_min, gamma * m_min * (1.0 - 1e-12));
  }
}

TEST(Assembly, LinearityAndLimits)
{
  const auto mesh = small_holes_mesh();
  const auto tags = tag_boundary(mesh, BCSpec::mixed_lateral());
  auto c1 = CoefficientField::uniform(mesh.num_hexes(), 1.0, 1.0, 1e-3);
  auto c2 = CoefficientField::uniform(mesh.num_hexes(), 1.0, 2.0, 1e-3);
  const auto m1 = assemble_mass(mesh, c1, tags);
  const auto m2 = assemble_mass(mesh, c2, tags);
  EXPECT_EQ(test::to_dense(m2), test::to_dense(m1) * 2.0);

  const auto k = assemble_curl_curl(mesh, c1, tags);
  // A / gamma - M = K / gamma, shrinking linearly.
  for (double gamma : {1e4, 1e8, 1e12})
  {
    const SparseMatrix a = combine_system(k, m1, gamma);
    const Eigen::MatrixXd diff = test::to_dense(a) / gamma - test::to_dense(m1);
    EXPECT_LE(diff.cwiseAbs().maxCoeff(), 2.0 * max_abs(k) / gamma + 1e-15 * max_abs(m1));
  }
}

TEST(Assembly, RejectsNonPositiveCoefficients)
{
  const auto mesh = build_grid_mesh({1, 1, 1}, {1.0, 1.0, 1.0});
  const auto tags = tag_boundary(mesh, all_neumann());
  auto c = CoefficientField::uniform(1);
  c.mu[0] = 0.0;
  EXPECT_THROW(assemble_curl_curl(mesh, c, tags), std::invalid_argument);
  c = CoefficientField::uniform(1);
  c.eps[0] = -1.0;
  EXPECT_THROW(assemble_mass(mesh, c, tags), std::invalid_argument);
  const auto k = assemble_curl_curl(mesh, CoefficientField::uniform(1), tags);
  EXPECT_THROW(combine_system(k, k, 0.0), std::invalid_argument);
}

TEST(Assembly, LoadMatchesElementSum)
{
  const auto mesh = build_grid_mesh({2, 1, 1}, {0.5, 0.5, 0.5});
  const auto tags = tag_boundary(mesh, all_neumann());
  const auto rhs = assemble_load(mesh, tags);
  // A shared x-normal face: the four y/z edges on x = 0.5 belong to both hexes.
  const double single = 0.5 * 0.5 / 4.0;
  int doubled = 0;
  for (int e = 0; e < mesh.num_edges(); ++e)
  {
    const double expect = single * mesh.edge_to_hexes.count(e);
    ASSERT_NEAR(rhs[e], expect, 1e-15);
    doubled += mesh.edge_to_hexes.count(e) == 2;
  }
  EXPECT_EQ(doubled, 4);
}

TEST(Gradient, StructureAndKernel)
{
  const auto mesh = small_holes_mesh();
  const auto problem = assemble_problem(mesh, BCSpec::mixed_lateral(),
                                        CoefficientField::uniform(mesh.num_hexes()));
  const auto &c = problem.gradient;
  EXPECT_EQ(c.matrix.cols(), c.node_dofs.num_free());
  for (int r = 0; r < c.matrix.rows(); ++r)
  {
    const auto &edge = mesh.edges[c.edge_dofs.free_to_entity[r]];
    const int tail = c.node_dofs.entity_to_free[edge[0]];
    const int head = c.node_dofs.entity_to_free[edge[1]];
    ASSERT_LE(c.matrix.row(r).nonZeros(), 2);
    if (tail >= 0)
    {
      ASSERT_EQ(c.matrix.coeff(r, tail), -1.0);
    }
    if (head >= 0)
    {
      ASSERT_EQ(c.matrix.coeff(r, head), 1.0);
    }
  }
  const SparseMatrix kc = problem.curl_curl * c.matrix;
  EXPECT_LE(max_abs(kc), 1e-12 * max_abs(problem.curl_curl));
}

TEST(Dirichlet, EliminationCounts)
{
  BeamGeometry g;
  g.length = 1;
  g.h = 0.5;
  const auto mesh = build_beam_mesh(g);
  const auto none = tag_boundary(mesh, all_neumann());
  EXPECT_TRUE(make_dof_map(none.edge_is_dirichlet).is_identity());

  const auto tags = tag_boundary(mesh, BCSpec::all_dirichlet());
  int interior = 0;
  for (const auto &e : mesh.edges)
  {
    bool boundary = false;
    for (int axis = 0; axis < 3; ++axis)
    {
      const int a = mesh.node_grid[e[0]][axis], b = mesh.node_grid[e[1]][axis];
      boundary = boundary || (a == b && (a == 0 || a == mesh.cells[axis]));
    }
    interior += !boundary;
  }
  const auto k = assemble_curl_curl(mesh, CoefficientField::uniform(8), tags);
  EXPECT_EQ(k.rows(), interior);
  EXPECT_EQ(interior, 6);
  const Eigen::MatrixXd d = test::to_dense(k);
  EXPECT_EQ(d, d.transpose());
}

TEST(Assembly, Deterministic)
{
  const auto mesh = small_holes_mesh();
  auto coeff = CoefficientField::uniform(mesh.num_hexes(), 1.0, 1.0, 1e-3);
  const auto a = assemble_problem(mesh, BCSpec::mixed_lateral(), coeff);
  const auto b = assemble_problem(mesh, BCSpec::mixed_lateral(), coeff);
  ASSERT_EQ(a.system.nonZeros(), b.system.nonZeros());
  EXPECT_EQ(0, std::memcmp(a.system.valuePtr(), b.system.valuePtr(),
                           sizeof(double) * a.system.nonZeros()));
  EXPECT_EQ(a.rhs, b.rhs);
}

}  // namespace
}  // namespace maxdd
