// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "maxdd/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unsupported/Eigen/SparseExtra>

namespace maxdd
{

namespace
{

struct EdgeShape
{
  Eigen::Matrix<double, 12, 3> value;
  Eigen::Matrix<double, 12, 3> curl;
};

// Edge shape functions and their curls at reference point (s, t, u) in [0, 1]^3.
EdgeShape edge_shape(const std::array<double, 3> &sp, double s, double t, double u)
{
  const double hx = sp[0], hy = sp[1], hz = sp[2];
  const std::array<double, 2> X = {1.0 - s, s}, Y = {1.0 - t, t}, Z = {1.0 - u, u};
  const std::array<double, 2> dX = {-1.0, 1.0};
  const std::array<double, 2> &dY = dX, &dZ = dX;

  EdgeShape e;
  e.value.setZero();
  e.curl.setZero();
  for (int b = 0; b < 2; ++b)
  {
    for (int a = 0; a < 2; ++a)
    {
      // x-edge at (j, k) = (a, b)
      int le = a + 2 * b;
      e.value(le, 0) = Y[a] * Z[b] / hx;
      e.curl(le, 1) = Y[a] * dZ[b] / (hx * hz);
      e.curl(le, 2) = -dY[a] * Z[b] / (hx * hy);
      // y-edge at (i, k) = (a, b)
      le = 4 + a + 2 * b;
      e.value(le, 1) = X[a] * Z[b] / hy;
      e.curl(le, 0) = -X[a] * dZ[b] / (hy * hz);
      e.curl(le, 2) = dX[a] * Z[b] / (hy * hx);
      // z-edge at (i, j) = (a, b)
      le = 8 + a + 2 * b;
      e.value(le, 2) = X[a] * Y[b] / hz;
      e.curl(le, 0) = X[a] * dY[b] / (hz * hy);
      e.curl(le, 1) = -dX[a] * Y[b] / (hz * hx);
    }
  }
  return e;
}

template <typename Fn>
void gauss_2x2x2(const std::array<double, 3> &sp, Fn &&fn)
{
  const double g = 0.5 / std::sqrt(3.0);
  const std::array<double, 2> pts = {0.5 - g, 0.5 + g};
  const double w = 0.125 * sp[0] * sp[1] * sp[2];
  for (double u : pts)
  {
    for (double t : pts)
    {
      for (double s : pts)
      {
        fn(edge_shape(sp, s, t, u), w);
      }
    }
  }
}

void check_positive(const std::vector<double> &values, const char *name)
{
  for (double v : values)
  {
    if (!(v > 0.0) || !std::isfinite(v))
    {
      throw std::invalid_argument(std::string("coefficient ") + name +
                                  " must be strictly positive and finite");
    }
  }
}

std::vector<int> all_hexes(const Mesh &mesh)
{
  std::vector<int> hexes(mesh.num_hexes());
  std::iota(hexes.begin(), hexes.end(), 0);
  return hexes;
}

std::vector<int> identity_rows(int n)
{
  std::vector<int> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

}  // namespace

CoefficientField CoefficientField::uniform(int num_hexes, double mu, double eps, double gamma)
{
  CoefficientField c;
  c.mu.assign(num_hexes, mu);
  c.eps.assign(num_hexes, eps);
  c.gamma = gamma;
  return c;
}

void CoefficientField::validate(int num_hexes) const
{
  if (static_cast<int>(mu.size()) != num_hexes || static_cast<int>(eps.size()) != num_hexes)
  {
    throw std::invalid_argument("coefficient field size does not match the mesh");
  }
  check_positive(mu, "mu");
  check_positive(eps, "eps");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
  {
    throw std::invalid_argument("gamma must be strictly positive");
  }
}

CoefficientField layered_coefficients(const Mesh &mesh, double eps_alt, double mu_alt,
                                      double gamma, int layers)
{
  auto c = CoefficientField::uniform(mesh.num_hexes(), 1.0, 1.0, gamma);
  for (int t = 0; t < mesh.num_hexes(); ++t)
  {
    const double z = mesh.hex_center(t).z / mesh.extent[2];
    const int layer = std::min(layers - 1, static_cast<int>(z * layers));
    if (layer % 2 == 1)
    {
      c.eps[t] = eps_alt;
      c.mu[t] = mu_alt;
    }
  }
  return c;
}

CoefficientField hole_valued_coefficients(const Mesh &mesh, const BeamGeometry &holes_geom,
                                          double eps_holes, double mu_holes, double gamma)
{
  auto c = CoefficientField::uniform(mesh.num_hexes(), 1.0, 1.0, gamma);
  const auto cells = hole_cells(holes_geom);
  for (int t = 0; t < mesh.num_hexes(); ++t)
  {
    if (std::binary_search(cells.begin(), cells.end(), mesh.hex_cell[t]))
    {
      c.eps[t] = eps_holes;
      c.mu[t] = mu_holes;
    }
  }
  return c;
}

bool DofMap::is_identity() const
{
  for (int i = 0; i < num_free(); ++i)
  {
    if (free_to_entity[i] != i)
    {
      return false;
    }
  }
  return num_free() == num_entities();
}

DofMap make_dof_map(const std::vector<std::uint8_t> &is_dirichlet)
{
  DofMap map;
  map.entity_to_free.assign(is_dirichlet.size(), -1);
  for (std::size_t e = 0; e < is_dirichlet.size(); ++e)
  {
    if (!is_dirichlet[e])
    {
      map.entity_to_free[e] = map.num_free();
      map.free_to_entity.push_back(static_cast<int>(e));
    }
  }
  return map;
}

ElementMatrix element_curl_curl(const std::array<double, 3> &spacing)
{
  ElementMatrix ke = ElementMatrix::Zero();
  gauss_2x2x2(spacing, [&](const EdgeShape &e, double w)
              { ke.noalias() += w * e.curl * e.curl.transpose(); });
  return ke;
}

ElementMatrix element_mass(const std::array<double, 3> &spacing)
{
  ElementMatrix me = ElementMatrix::Zero();
  gauss_2x2x2(spacing, [&](const EdgeShape &e, double w)
              { me.noalias() += w * e.value * e.value.transpose(); });
  return me;
}

ElementVector element_load(const std::array<double, 3> &spacing, const Eigen::Vector3d &f)
{
  ElementVector fe = ElementVector::Zero();
  gauss_2x2x2(spacing, [&](const EdgeShape &e, double w) { fe.noalias() += w * e.value * f; });
  return fe;
}

SparseMatrix assemble_edge_operator(const Mesh &mesh, std::span<const int> hexes,
                                    std::span<const double> weight, const ElementMatrix &ke,
                                    std::span<const int> edge_to_row, int dim)
{
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(hexes.size() * 144);
  for (int t : hexes)
  {
    const auto &edges = mesh.hex_edges[t];
    const double w = weight[t];
    for (int a = 0; a < 12; ++a)
    {
      const int row = edge_to_row[edges[a]];
      if (row < 0)
      {
        continue;
      }
      for (int b = 0; b < 12; ++b)
      {
        const int col = edge_to_row[edges[b]];
        if (col >= 0)
        {
          triplets.emplace_back(row, col, w * ke(a, b));
        }
      }
    }
  }
  SparseMatrix mat(dim, dim);
  mat.setFromTriplets(triplets.begin(), triplets.end());
  mat.prune(0.0, 0.0);
  mat.makeCompressed();
  return mat;
}

ReducedMatrix eliminate_dirichlet(const SparseMatrix &full, const BoundaryTags &tags)
{
  if (full.rows() != static_cast<Eigen::Index>(tags.edge_is_dirichlet.size()))
  {
    throw std::invalid_argument("matrix does not match the boundary tags");
  }
  ReducedMatrix out;
  out.dofs = make_dof_map(tags.edge_is_dirichlet);
  const int n = out.dofs.num_free();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(full.nonZeros());
  for (int r = 0; r < n; ++r)
  {
    const int full_row = out.dofs.free_to_entity[r];
    for (SparseMatrix::InnerIterator it(full, full_row); it; ++it)
    {
      const int c = out.dofs.entity_to_free[it.col()];
      if (c >= 0)
      {
        triplets.emplace_back(r, c, it.value());
      }
    }
  }
  out.matrix.resize(n, n);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.makeCompressed();
  return out;
}

SparseMatrix assemble_curl_curl(const Mesh &mesh, const CoefficientField &coeff,
                                const BoundaryTags &tags)
{
  coeff.validate(mesh.num_hexes());
  std::vector<double> inv_mu(coeff.mu.size());
  std::transform(coeff.mu.begin(), coeff.mu.end(), inv_mu.begin(),
                 [](double m) { return 1.0 / m; });
  const auto hexes = all_hexes(mesh);
  const auto rows = identity_rows(mesh.num_edges());
  const auto full = assemble_edge_operator(mesh, hexes, inv_mu, element_curl_curl(mesh.spacing),
                                           rows, mesh.num_edges());
  return eliminate_dirichlet(full, tags).matrix;
}

SparseMatrix assemble_mass(const Mesh &mesh, const CoefficientField &coeff,
                           const BoundaryTags &tags)
{
  coeff.validate(mesh.num_hexes());
  const auto hexes = all_hexes(mesh);
  const auto rows = identity_rows(mesh.num_edges());
  const auto full = assemble_edge_operator(mesh, hexes, coeff.eps, element_mass(mesh.spacing),
                                           rows, mesh.num_edges());
  return eliminate_dirichlet(full, tags).matrix;
}

SparseMatrix combine_system(const SparseMatrix &curl_curl, const SparseMatrix &mass,
                            double gamma)
{
  if (!(gamma > 0.0) || !std::isfinite(gamma))
  {
    throw std::invalid_argument("gamma must be strictly positive");
  }
  if (curl_curl.rows() != mass.rows() || curl_curl.cols() != mass.cols())
  {
    throw std::invalid_argument("curl-curl and mass matrices differ in size");
  }
  SparseMatrix a = curl_curl + gamma * mass;
  a.prune(0.0, 0.0);
  a.makeCompressed();
  return a;
}

Vector assemble_load(const Mesh &mesh, const BoundaryTags &tags, const Eigen::Vector3d &f)
{
  const auto dofs = make_dof_map(tags.edge_is_dirichlet);
  const ElementVector fe = element_load(mesh.spacing, f);
  Vector rhs = Vector::Zero(dofs.num_free());
  for (int t = 0; t < mesh.num_hexes(); ++t)
  {
    for (int a = 0; a < 12; ++a)
    {
      const int row = dofs.entity_to_free[mesh.hex_edges[t][a]];
      if (row >= 0)
      {
        rhs[row] += fe[a];
      }
    }
  }
  return rhs;
}

DiscreteGradient discrete_gradient(const Mesh &mesh, const BoundaryTags &tags)
{
  DiscreteGradient g;
  g.edge_dofs = make_dof_map(tags.edge_is_dirichlet);
  g.node_dofs = make_dof_map(tags.node_is_dirichlet);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * g.edge_dofs.num_free());
  for (int r = 0; r < g.edge_dofs.num_free(); ++r)
  {
    const auto &edge = mesh.edges[g.edge_dofs.free_to_entity[r]];
    const int tail = g.node_dofs.entity_to_free[edge[0]];
    const int head = g.node_dofs.entity_to_free[edge[1]];
    if (tail >= 0)
    {
      triplets.emplace_back(r, tail, -1.0);
    }
    if (head >= 0)
    {
      triplets.emplace_back(r, head, 1.0);
    }
  }
  g.matrix.resize(g.edge_dofs.num_free(), g.node_dofs.num_free());
  g.matrix.setFromTriplets(triplets.begin(), triplets.end());
  g.matrix.makeCompressed();
  return g;
}

SparseMatrix assemble_local_system(const Mesh &mesh, const CoefficientField &coeff,
                                   std::span<const int> hexes, std::span<const int> edge_to_row,
                                   int dim)
{
  // Same summation order as the global K + gamma M, so a subdomain covering the whole mesh
  // reproduces the global matrix exactly.
  std::vector<double> inv_mu(coeff.mu.size());
  std::transform(coeff.mu.begin(), coeff.mu.end(), inv_mu.begin(),
                 [](double m) { return 1.0 / m; });
  const auto k = assemble_edge_operator(mesh, hexes, inv_mu, element_curl_curl(mesh.spacing),
                                        edge_to_row, dim);
  const auto m = assemble_edge_operator(mesh, hexes, coeff.eps, element_mass(mesh.spacing),
                                        edge_to_row, dim);
  return combine_system(k, m, coeff.gamma);
}

DiscreteProblem assemble_problem(Mesh mesh, const BCSpec &bc, CoefficientField coeff)
{
  coeff.validate(mesh.num_hexes());
  DiscreteProblem p;
  p.tags = tag_boundary(mesh, bc);
  p.edge_dofs = make_dof_map(p.tags.edge_is_dirichlet);
  p.curl_curl = assemble_curl_curl(mesh, coeff, p.tags);
  p.mass = assemble_mass(mesh, coeff, p.tags);
  p.system = combine_system(p.curl_curl, p.mass, coeff.gamma);
  p.rhs = assemble_load(mesh, p.tags);
  p.gradient = discrete_gradient(mesh, p.tags);
  p.mesh = std::move(mesh);
  p.coeff = std::move(coeff);
  return p;
}

void write_matrix_market(const SparseMatrix &matrix, const std::string &path)
{
  const Eigen::SparseMatrix<double> col_major = matrix;
  if (!Eigen::saveMarket(col_major, path))
  {
    throw std::runtime_error("cannot write matrix market file " + path);
  }
}

}  // namespace maxdd
