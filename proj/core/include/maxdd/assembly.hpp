// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXDD_ASSEMBLY_HPP
#define MAXDD_ASSEMBLY_HPP

#include <array>
#include <span>
#include <string>
#include <vector>
#include <Eigen/Core>
#include <Eigen/SparseCore>
#include "maxdd/boundary.hpp"
#include "maxdd/mesh.hpp"

namespace maxdd
{

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Vector = Eigen::VectorXd;
using ElementMatrix = Eigen::Matrix<double, 12, 12>;
using ElementVector = Eigen::Matrix<double, 12, 1>;

// Piecewise constant material data, one value per hex, plus the global mass scaling gamma.
struct CoefficientField
{
  std::vector<double> mu;
  std::vector<double> eps;
  double gamma = 1e-3;

  static CoefficientField uniform(int num_hexes, double mu = 1.0, double eps = 1.0,
                                  double gamma = 1e-3);
  void validate(int num_hexes) const;
};

// Eight layers stacked in z; odd layers take (eps_alt, mu_alt), even layers (1, 1).
CoefficientField layered_coefficients(const Mesh &mesh, double eps_alt, double mu_alt,
                                      double gamma, int layers = 8);

// Cells that the hole specification of `holes_geom` would carve get (eps_holes, mu_holes);
// everything else gets (1, 1). `mesh` itself is expected to be uncarved.
CoefficientField hole_valued_coefficients(const Mesh &mesh, const BeamGeometry &holes_geom,
                                          double eps_holes, double mu_holes, double gamma);

// Numbering of the non-Dirichlet entities (edges or nodes).
struct DofMap
{
  std::vector<int> free_to_entity;
  std::vector<int> entity_to_free;  // -1 for eliminated entities

  int num_free() const { return static_cast<int>(free_to_entity.size()); }
  int num_entities() const { return static_cast<int>(entity_to_free.size()); }
  bool is_identity() const;
};

DofMap make_dof_map(const std::vector<std::uint8_t> &is_dirichlet);

// Lowest-order edge element matrices on a brick with the given side lengths, integrated with
// 2x2x2 Gauss quadrature. Unit coefficients.
ElementMatrix element_curl_curl(const std::array<double, 3> &spacing);
ElementMatrix element_mass(const std::array<double, 3> &spacing);
ElementVector element_load(const std::array<double, 3> &spacing, const Eigen::Vector3d &f);

// Assembles sum_t weight[t] * ke over `hexes` into a square matrix whose rows and columns are
// given by `edge_to_row` (-1 entries are skipped). Duplicates are summed and exact zeros
// pruned, so the result is deterministic for a given input.
SparseMatrix assemble_edge_operator(const Mesh &mesh, std::span<const int> hexes,
                                    std::span<const double> weight, const ElementMatrix &ke,
                                    std::span<const int> edge_to_row, int dim);

struct ReducedMatrix
{
  SparseMatrix matrix;
  DofMap dofs;
};

// Drops rows and columns of Dirichlet edges; the map recovers the original numbering.
ReducedMatrix eliminate_dirichlet(const SparseMatrix &full, const BoundaryTags &tags);

SparseMatrix assemble_curl_curl(const Mesh &mesh, const CoefficientField &coeff,
                                const BoundaryTags &tags);
SparseMatrix assemble_mass(const Mesh &mesh, const CoefficientField &coeff,
                           const BoundaryTags &tags);
SparseMatrix combine_system(const SparseMatrix &curl_curl, const SparseMatrix &mass,
                            double gamma);
Vector assemble_load(const Mesh &mesh, const BoundaryTags &tags,
                     const Eigen::Vector3d &f = Eigen::Vector3d::Ones());

// Edge-node incidence restricted to free edges (rows) and free nodes (columns).
struct DiscreteGradient
{
  SparseMatrix matrix;
  DofMap edge_dofs;
  DofMap node_dofs;
};

DiscreteGradient discrete_gradient(const Mesh &mesh, const BoundaryTags &tags);

// Neumann-type matrix of mu^-1 curl-curl + gamma eps mass assembled over a subset of hexes,
// numbered by `edge_to_row`.
SparseMatrix assemble_local_system(const Mesh &mesh, const CoefficientField &coeff,
                                   std::span<const int> hexes, std::span<const int> edge_to_row,
                                   int dim);

// Everything the solver needs for one configuration.
struct DiscreteProblem
{
  Mesh mesh;
  BoundaryTags tags;
  CoefficientField coeff;
  DofMap edge_dofs;
  SparseMatrix curl_curl;
  SparseMatrix mass;
  SparseMatrix system;
  Vector rhs;
  DiscreteGradient gradient;

  int num_dofs() const { return edge_dofs.num_free(); }
};

DiscreteProblem assemble_problem(Mesh mesh, const BCSpec &bc, CoefficientField coeff);

void write_matrix_market(const SparseMatrix &matrix, const std::string &path);

}  // namespace maxdd

#endif  // MAXDD_ASSEMBLY_HPP
