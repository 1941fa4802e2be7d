// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXDD_TESTS_ORACLES_HPP
#define MAXDD_TESTS_ORACLES_HPP

#include <array>
#include <cstdint>
#include <random>
#include <vector>
#include <Eigen/Dense>
#include "maxdd/assembly.hpp"
#include "maxdd/scenario.hpp"

namespace maxdd::test
{

// Element matrices of the brick edge element from closed-form separable integrals. Written
// independently of the quadrature code in the library.
ElementMatrix closed_form_mass(const std::array<double, 3> &spacing);
ElementMatrix closed_form_curl_curl(const std::array<double, 3> &spacing);
ElementVector closed_form_load(const std::array<double, 3> &spacing, const Eigen::Vector3d &f);

// 12 x 8 local gradient: column c is the gradient of the trilinear hat at local node c.
Eigen::Matrix<double, 12, 8> local_gradient();

// Edge count of an nx x ny x nz grid with some cells removed, by enumerating node pairs.
int brute_force_edge_count(const std::array<int, 3> &cells,
                           const std::vector<std::array<int, 3>> &removed);

struct DenseSystem
{
  Eigen::MatrixXd k, m;
  std::vector<int> free_edges;  // mesh edge id per row
};

// Dense K and M on free edges, scattered hex by hex from the closed-form element matrices.
// Dirichlet edges are recomputed here from the mesh boundary faces.
DenseSystem dense_assembly(const Mesh &mesh, const CoefficientField &coeff, const BCSpec &bc);

Eigen::MatrixXd to_dense(const SparseMatrix &a);
Eigen::VectorXd dense_eigenvalues(const Eigen::MatrixXd &a);

Eigen::VectorXd random_vector(std::mt19937_64 &rng, int n);

// Small scenario helper.
ScenarioConfig beam_config(bool holes, const std::string &bc, double h = 0.125);

}  // namespace maxdd::test

#endif  // MAXDD_TESTS_ORACLES_HPP
