// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXDD_DECOMPOSITION_HPP
#define MAXDD_DECOMPOSITION_HPP

#include <string_view>
#include <vector>
#include "maxdd/assembly.hpp"
#include "maxdd/mesh.hpp"

namespace maxdd
{

// Non-overlapping assignment of hexes to subdomains.
struct Ownership
{
  int num_subdomains = 0;
  std::vector<int> hex_owner;
};

// Subdomain i owns the i-th slab of x-layers. N must divide the number of x-layers.
Ownership partition_strips(const Mesh &mesh, int num_subdomains);

// Recursive coordinate bisection on hex centres: each split halves the element count along
// the longest axis of the current box. N must be a power of two.
Ownership partition_rcb(const Mesh &mesh, int num_subdomains);

enum class PartitionKind
{
  Strips,
  Rcb
};

PartitionKind partition_kind_from_name(std::string_view name);
Ownership partition(const Mesh &mesh, PartitionKind kind, int num_subdomains);

struct OverlappingDecomposition
{
  int num_subdomains = 0;
  std::vector<std::vector<int>> owned_hexes;
  std::vector<std::vector<int>> overlap_hexes;
  // Free edge dofs (the local index sets) and free nodal dofs touched by overlap_hexes[i],
  // sorted by global free index.
  std::vector<std::vector<int>> dofs;
  std::vector<std::vector<int>> node_dofs;

  int size() const { return num_subdomains; }
};

// Grows every owned set by `layers` rings of node-connected hexes and derives the dof sets.
OverlappingDecomposition extend_overlap(const Mesh &mesh, const Ownership &ownership,
                                        const DofMap &edge_dofs, const DofMap &node_dofs,
                                        int layers = 1);

// Diagonal partition of unity weights over decomposition dofs, D_i = 1 / multiplicity.
struct PartitionOfUnity
{
  std::vector<Vector> weights;
};

PartitionOfUnity build_pou(const OverlappingDecomposition &decomp, int num_dofs);

// sum_i R_i^T D_i R_i v, accumulated in subdomain order.
Vector apply_pou_sum(const OverlappingDecomposition &decomp, const PartitionOfUnity &pou,
                     const Vector &v);

Vector restrict_to(const std::vector<int> &dofs, const Vector &global);
void prolong_add(const std::vector<int> &dofs, const Vector &local, Vector &global);

struct DDConstants
{
  int k0 = 1;
  int k1 = 1;
};

// Maximum number of subdomains j with R_j A R_i^T != 0, over i.
int compute_k0(const SparseMatrix &system, const OverlappingDecomposition &decomp);
// Maximum number of overlapping subdomains sharing a hex.
int compute_k1(const OverlappingDecomposition &decomp, int num_hexes);
DDConstants compute_constants(const SparseMatrix &system, const OverlappingDecomposition &decomp,
                              int num_hexes);

}  // namespace maxdd

#endif  // MAXDD_DECOMPOSITION_HPP
