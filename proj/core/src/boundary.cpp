// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "maxdd/boundary.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace maxdd
{

BCSpec BCSpec::all_dirichlet()
{
  BCSpec bc;
  bc.faces.fill(BoundaryKind::Dirichlet);
  return bc;
}

BCSpec BCSpec::mixed_lateral()
{
  BCSpec bc = all_dirichlet();
  bc.faces[static_cast<int>(OuterFace::YMin)] = BoundaryKind::Neumann;
  bc.faces[static_cast<int>(OuterFace::YMax)] = BoundaryKind::Neumann;
  return bc;
}

BCSpec BCSpec::from_name(std::string_view name)
{
  if (name == "all-dirichlet")
  {
    return all_dirichlet();
  }
  if (name == "mixed-lateral")
  {
    return mixed_lateral();
  }
  throw std::invalid_argument("unknown boundary condition preset '" + std::string(name) + "'");
}

int BoundaryTags::num_dirichlet_edges() const
{
  return static_cast<int>(std::count(edge_is_dirichlet.begin(), edge_is_dirichlet.end(), 1));
}

int BoundaryTags::num_dirichlet_nodes() const
{
  return static_cast<int>(std::count(node_is_dirichlet.begin(), node_is_dirichlet.end(), 1));
}

BoundaryTags tag_boundary(const Mesh &mesh, const BCSpec &bc)
{
  BoundaryTags tags;
  tags.face_tag.resize(mesh.boundary_faces.size(), BoundaryKind::Neumann);
  tags.edge_is_dirichlet.assign(mesh.num_edges(), 0);
  tags.node_is_dirichlet.assign(mesh.num_nodes(), 0);

  const auto &local_edges = hex_local_edges();
  for (std::size_t f = 0; f < mesh.boundary_faces.size(); ++f)
  {
    const auto &face = mesh.boundary_faces[f];
    if (face.outer < 0 || bc.faces[face.outer] != BoundaryKind::Dirichlet)
    {
      continue;
    }
    tags.face_tag[f] = BoundaryKind::Dirichlet;
    for (int v : face.nodes)
    {
      tags.node_is_dirichlet[v] = 1;
    }
    const auto on_face = [&](int v)
    { return std::find(face.nodes.begin(), face.nodes.end(), v) != face.nodes.end(); };
    const auto &hex = mesh.hexes[face.hex];
    for (int le = 0; le < 12; ++le)
    {
      if (on_face(hex[local_edges[le][0]]) && on_face(hex[local_edges[le][1]]))
      {
        tags.edge_is_dirichlet[mesh.hex_edges[face.hex][le]] = 1;
      }
    }
  }
  return tags;
}

}  // namespace maxdd
