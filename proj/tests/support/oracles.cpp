// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <set>
#include <utility>

namespace maxdd::test
{

namespace
{

// 1D factor of a separable integrand on [0, h]: constant one, 1 - t/h, or t/h.
enum Factor
{
  One = -1,
  Low = 0,
  High = 1
};

double integral(Factor a, Factor b, double h)
{
  if (a == One && b == One)
  {
    return h;
  }
  if (a == One || b == One)
  {
    return h / 2.0;
  }
  return a == b ? h / 3.0 : h / 6.0;
}

// coef * f[0](x) f[1](y) f[2](z) in one vector component.
struct Term
{
  int comp;
  double coef;
  std::array<Factor, 3> f;
};

using Field = std::vector<Term>;

double inner(const Field &u, const Field &v, const std::array<double, 3> &h)
{
  double s = 0.0;
  for (const auto &a : u)
  {
    for (const auto &b : v)
    {
      if (a.comp != b.comp)
      {
        continue;
      }
      s += a.coef * b.coef * integral(a.f[0], b.f[0], h[0]) * integral(a.f[1], b.f[1], h[1]) *
           integral(a.f[2], b.f[2], h[2]);
    }
  }
  return s;
}

double sign(int bit) { return bit == 0 ? -1.0 : 1.0; }

// Local edge e = 4 * axis + (p + 2 q), where (p, q) are the offsets along the two other axes
// in increasing axis order.
void edge_axes(int e, int &axis, int &a1, int &a2, int &p, int &q)
{
  axis = e / 4;
  const int r = e % 4;
  p = r & 1;
  q = r >> 1;
  a1 = axis == 0 ? 1 : 0;
  a2 = axis == 2 ? 1 : 2;
}

Field basis_value(int e, const std::array<double, 3> &h)
{
  int axis, a1, a2, p, q;
  edge_axes(e, axis, a1, a2, p, q);
  std::array<Factor, 3> f{One, One, One};
  f[a1] = static_cast<Factor>(p);
  f[a2] = static_cast<Factor>(q);
  return {{axis, 1.0 / h[axis], f}};
}

// curl of (1/h_axis) l_p(x_a1) l_q(x_a2) e_axis. The derivative of l_p along a1 is sign(p)/h.
Field basis_curl(int e, const std::array<double, 3> &h)
{
  int axis, a1, a2, p, q;
  edge_axes(e, axis, a1, a2, p, q);
  const double c = 1.0 / h[axis];
  // d/dx_a2 term: lives in the component completing (a2, axis); d/dx_a1 likewise.
  std::array<Factor, 3> fa{One, One, One};
  fa[a1] = static_cast<Factor>(p);  // derivative taken along a2
  std::array<Factor, 3> fb{One, One, One};
  fb[a2] = static_cast<Factor>(q);  // derivative taken along a1
  const double d2 = c * sign(q) / h[a2];
  const double d1 = c * sign(p) / h[a1];
  // curl(F e_k)_i = eps_{ijk} d_j F. Component i for derivative along j with fixed k = axis.
  auto levi = [](int i, int j, int k)
  { return static_cast<double>((i - j) * (j - k) * (k - i)) / 2.0; };
  Field out;
  for (int i = 0; i < 3; ++i)
  {
    if (const double s = levi(i, a2, axis); s != 0.0)
    {
      out.push_back({i, s * d2, fa});
    }
    if (const double s = levi(i, a1, axis); s != 0.0)
    {
      out.push_back({i, s * d1, fb});
    }
  }
  return out;
}

}  // namespace

ElementMatrix closed_form_mass(const std::array<double, 3> &spacing)
{
  ElementMatrix m;
  for (int a = 0; a < 12; ++a)
  {
    for (int b = 0; b < 12; ++b)
    {
      m(a, b) = inner(basis_value(a, spacing), basis_value(b, spacing), spacing);
    }
  }
  return m;
}

ElementMatrix closed_form_curl_curl(const std::array<double, 3> &spacing)
{
  ElementMatrix k;
  for (int a = 0; a < 12; ++a)
  {
    for (int b = 0; b < 12; ++b)
    {
      k(a, b) = inner(basis_curl(a, spacing), basis_curl(b, spacing), spacing);
    }
  }
  return k;
}

ElementVector closed_form_load(const std::array<double, 3> &spacing, const Eigen::Vector3d &f)
{
  ElementVector out;
  for (int a = 0; a < 12; ++a)
  {
    const int axis = a / 4;
    const int o1 = axis == 0 ? 1 : 0, o2 = axis == 2 ? 1 : 2;
    out[a] = f[axis] * spacing[o1] * spacing[o2] / 4.0;
  }
  return out;
}

Eigen::Matrix<double, 12, 8> local_gradient()
{
  Eigen::Matrix<double, 12, 8> g = Eigen::Matrix<double, 12, 8>::Zero();
  for (int e = 0; e < 12; ++e)
  {
    int axis, a1, a2, p, q;
    edge_axes(e, axis, a1, a2, p, q);
    std::array<int, 3> off{0, 0, 0};
    off[a1] = p;
    off[a2] = q;
    const int tail = off[0] + 2 * off[1] + 4 * off[2];
    off[axis] = 1;
    const int head = off[0] + 2 * off[1] + 4 * off[2];
    g(e, tail) = -1.0;
    g(e, head) = 1.0;
  }
  return g;
}

int brute_force_edge_count(const std::array<int, 3> &cells,
                           const std::vector<std::array<int, 3>> &removed)
{
  std::set<std::array<int, 3>> gone(removed.begin(), removed.end());
  std::set<std::pair<std::array<int, 3>, std::array<int, 3>>> edges;
  for (int i = 0; i < cells[0]; ++i)
  {
    for (int j = 0; j < cells[1]; ++j)
    {
      for (int k = 0; k < cells[2]; ++k)
      {
        if (gone.count({i, j, k}))
        {
          continue;
        }
        for (int a = 0; a < 2; ++a)
        {
          for (int b = 0; b < 2; ++b)
          {
            edges.insert({{i, j + a, k + b}, {i + 1, j + a, k + b}});
            edges.insert({{i + a, j, k + b}, {i + a, j + 1, k + b}});
            edges.insert({{i + a, j + b, k}, {i + a, j + b, k + 1}});
          }
        }
      }
    }
  }
  return static_cast<int>(edges.size());
}

DenseSystem dense_assembly(const Mesh &mesh, const CoefficientField &coeff, const BCSpec &bc)
{
  // Dirichlet edges: both end nodes on a Dirichlet outer face, found from grid coordinates.
  std::vector<char> dirichlet(mesh.num_edges(), 0);
  for (const auto &bf : mesh.boundary_faces)
  {
    if (bf.outer < 0 || bc.faces[bf.outer] != BoundaryKind::Dirichlet)
    {
      continue;
    }
    for (int a = 0; a < 4; ++a)
    {
      for (int b = a + 1; b < 4; ++b)
      {
        const int u = std::min(bf.nodes[a], bf.nodes[b]);
        const int v = std::max(bf.nodes[a], bf.nodes[b]);
        for (const int *e = mesh.node_to_edges.begin(u); e != mesh.node_to_edges.end(u); ++e)
        {
          if (mesh.edges[*e][1] == v)
          {
            dirichlet[*e] = 1;
          }
        }
      }
    }
  }
  DenseSystem out;
  std::vector<int> row(mesh.num_edges(), -1);
  for (int e = 0; e < mesh.num_edges(); ++e)
  {
    if (!dirichlet[e])
    {
      row[e] = static_cast<int>(out.free_edges.size());
      out.free_edges.push_back(e);
    }
  }
  const int n = static_cast<int>(out.free_edges.size());
  out.k = Eigen::MatrixXd::Zero(n, n);
  out.m = Eigen::MatrixXd::Zero(n, n);
  const auto ke = closed_form_curl_curl(mesh.spacing);
  const auto me = closed_form_mass(mesh.spacing);
  const auto g = local_gradient();
  for (int t = 0; t < mesh.num_hexes(); ++t)
  {
    // Local edge order is rebuilt from hex corner nodes, not read from Mesh::hex_edges.
    for (int a = 0; a < 12; ++a)
    {
      for (int b = 0; b < 12; ++b)
      {
        auto find = [&](int le)
        {
          int tail = -1, head = -1;
          for (int c = 0; c < 8; ++c)
          {
            if (g(le, c) < 0)
            {
              tail = mesh.hexes[t][c];
            }
            if (g(le, c) > 0)
            {
              head = mesh.hexes[t][c];
            }
          }
          for (const int *e = mesh.node_to_edges.begin(tail);
               e != mesh.node_to_edges.end(tail); ++e)
          {
            if (mesh.edges[*e][0] == tail && mesh.edges[*e][1] == head)
            {
              return row[*e];
            }
          }
          return -2;
        };
        const int ra = find(a), rb = find(b);
        if (ra < 0 || rb < 0)
        {
          continue;
        }
        out.k(ra, rb) += ke(a, b) / coeff.mu[t];
        out.m(ra, rb) += me(a, b) * coeff.eps[t];
      }
    }
  }
  return out;
}

Eigen::MatrixXd to_dense(const SparseMatrix &a) { return Eigen::MatrixXd(a); }

Eigen::VectorXd dense_eigenvalues(const Eigen::MatrixXd &a)
{
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues();
}

Eigen::VectorXd random_vector(std::mt19937_64 &rng, int n)
{
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i)
  {
    v[i] = normal(rng);
  }
  return v;
}

ScenarioConfig beam_config(bool holes, const std::string &bc, double h)
{
  ScenarioConfig c;
  c.h = h;
  c.holes = holes;
  c.bc = bc;
  return c;
}

}  // namespace maxdd::test
