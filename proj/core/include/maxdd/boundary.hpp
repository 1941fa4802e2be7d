// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXDD_BOUNDARY_HPP
#define MAXDD_BOUNDARY_HPP

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>
#include "maxdd/mesh.hpp"

namespace maxdd
{

enum class BoundaryKind : std::uint8_t
{
  Dirichlet,
  Neumann
};

// Condition on each of the six outer faces, indexed by OuterFace. Faces created by holes are
// always Neumann.
struct BCSpec
{
  std::array<BoundaryKind, kNumOuterFaces> faces{};

  static BCSpec all_dirichlet();
  // Neumann on the two lateral faces y = 0 and y = 1, Dirichlet elsewhere.
  static BCSpec mixed_lateral();
  // "all-dirichlet" or "mixed-lateral".
  static BCSpec from_name(std::string_view name);

  BoundaryKind operator[](OuterFace f) const { return faces[static_cast<int>(f)]; }
};

struct BoundaryTags
{
  std::vector<BoundaryKind> face_tag;  // per Mesh::boundary_faces entry
  std::vector<std::uint8_t> edge_is_dirichlet;
  std::vector<std::uint8_t> node_is_dirichlet;

  int num_dirichlet_edges() const;
  int num_dirichlet_nodes() const;
};

BoundaryTags tag_boundary(const Mesh &mesh, const BCSpec &bc);

}  // namespace maxdd

#endif  // MAXDD_BOUNDARY_HPP
