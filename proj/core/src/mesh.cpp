// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "maxdd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>

namespace maxdd
{

namespace
{

// Converts a physical coordinate to a grid index, rejecting values off the grid.
int to_grid(double value, double h, const char *what)
{
  const double cells = value / h;
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, std::abs(cells)))
  {
    throw std::invalid_argument(std::string("hole spec not grid-aligned: ") + what + " = " +
                                std::to_string(value) + " is not a multiple of h");
  }
  return static_cast<int>(rounded);
}

template <typename Fn>
Adjacency build_adjacency(int num_rows, int num_items, int per_item, Fn &&row_of)
{
  Adjacency adj;
  adj.offsets.assign(num_rows + 1, 0);
  for (int item = 0; item < num_items; ++item)
  {
    for (int k = 0; k < per_item; ++k)
    {
      adj.offsets[row_of(item, k) + 1]++;
    }
  }
  for (int r = 0; r < num_rows; ++r)
  {
    adj.offsets[r + 1] += adj.offsets[r];
  }
  adj.indices.resize(adj.offsets.back());
  std::vector<int> fill(adj.offsets.begin(), adj.offsets.end() - 1);
  for (int item = 0; item < num_items; ++item)
  {
    for (int k = 0; k < per_item; ++k)
    {
      adj.indices[fill[row_of(item, k)]++] = item;
    }
  }
  return adj;
}

constexpr std::array<std::array<int, 4>, 6> kHexFaces = {{
    {0, 2, 4, 6},  // x-min
    {1, 3, 5, 7},  // x-max
    {0, 1, 4, 5},  // y-min
    {2, 3, 6, 7},  // y-max
    {0, 1, 2, 3},  // z-min
    {4, 5, 6, 7},  // z-max
}};

}  // namespace

HoleSpec HoleSpec::standard()
{
  HoleSpec spec;
  spec.enabled = true;
  const double size = 0.125;
  for (double y : {0.25, 0.625})
  {
    for (double z : {0.25, 0.625})
    {
      spec.longitudinal.push_back({y, z, size});
    }
  }
  spec.transverse_per_unit = 2;
  spec.transverse_size = size;
  return spec;
}

int BeamGeometry::cells_per_unit() const
{
  if (!(h > 0.0) || h > 1.0)
  {
    throw std::invalid_argument("mesh spacing h must lie in (0, 1]");
  }
  const double inv = 1.0 / h;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) > 1e-9 * rounded)
  {
    throw std::invalid_argument("mesh spacing h must divide 1 (1/h = " + std::to_string(inv) +
                                ")");
  }
  return static_cast<int>(rounded);
}

void BeamGeometry::validate() const
{
  if (length < 1)
  {
    throw std::invalid_argument("beam length must be at least one unit");
  }
  cells_per_unit();
  if (holes.enabled)
  {
    (void)hole_cells(*this);
  }
}

std::vector<std::array<int, 3>> hole_cells(const BeamGeometry &geom)
{
  std::vector<std::array<int, 3>> cells;
  if (!geom.holes.enabled)
  {
    return cells;
  }
  const int n = geom.cells_per_unit();
  const int nx = geom.length * n;
  const double h = geom.h;

  int lower_z = n, upper_z = -1;
  for (const auto &s : geom.holes.longitudinal)
  {
    const int y0 = to_grid(s.y0, h, "longitudinal y0");
    const int z0 = to_grid(s.z0, h, "longitudinal z0");
    const int w = to_grid(s.size, h, "longitudinal size");
    if (w < 1 || y0 < 1 || z0 < 1 || y0 + w > n - 1 || z0 + w > n - 1)
    {
      throw std::invalid_argument(
          "longitudinal hole must lie strictly inside the unit cross-section");
    }
    lower_z = std::min(lower_z, z0);
    upper_z = std::max(upper_z, z0);
    for (int ix = 0; ix < nx; ++ix)
    {
      for (int iy = y0; iy < y0 + w; ++iy)
      {
        for (int iz = z0; iz < z0 + w; ++iz)
        {
          cells.push_back({ix, iy, iz});
        }
      }
    }
  }

  const int per_unit = geom.holes.transverse_per_unit;
  if (per_unit > 0)
  {
    if (geom.holes.longitudinal.empty())
    {
      throw std::invalid_argument("transverse holes need longitudinal holes to connect to");
    }
    const int w = to_grid(geom.holes.transverse_size, h, "transverse size");
    if (w < 1 || upper_z + w > n - 1)
    {
      throw std::invalid_argument("transverse hole size out of range");
    }
    for (int u = 0; u < geom.length; ++u)
    {
      for (int k = 0; k < per_unit; ++k)
      {
        const double start = u + (2.0 * k + 1.0) / (2.0 * per_unit);
        const int x0 = to_grid(start, h, "transverse x offset");
        if (x0 + w > (u + 1) * n)
        {
          throw std::invalid_argument("transverse hole does not fit in its unit block");
        }
        const int z0 = (k % 2 == 0) ? lower_z : upper_z;
        for (int ix = x0; ix < x0 + w; ++ix)
        {
          for (int iy = 0; iy < n; ++iy)
          {
            for (int iz = z0; iz < z0 + w; ++iz)
            {
              cells.push_back({ix, iy, iz});
            }
          }
        }
      }
    }
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

const std::array<std::array<int, 2>, 12> &hex_local_edges()
{
  static const std::array<std::array<int, 2>, 12> edges = {{
      {0, 1}, {2, 3}, {4, 5}, {6, 7},  // x
      {0, 2}, {1, 3}, {4, 6}, {5, 7},  // y
      {0, 4}, {1, 5}, {2, 6}, {3, 7},  // z
  }};
  return edges;
}

Point3 Mesh::hex_center(int hex) const
{
  const auto &lo = nodes[hexes[hex][0]];
  return {lo.x + 0.5 * spacing[0], lo.y + 0.5 * spacing[1], lo.z + 0.5 * spacing[2]};
}

Mesh build_beam_mesh(const BeamGeometry &geom)
{
  geom.validate();
  const int n = geom.cells_per_unit();
  return build_grid_mesh({geom.length * n, n, n}, {geom.h, geom.h, geom.h}, hole_cells(geom));
}

Mesh build_grid_mesh(const std::array<int, 3> &cells, const std::array<double, 3> &spacing,
                     const std::vector<std::array<int, 3>> &removed_cells)
{
  const int nx = cells[0], ny = cells[1], nz = cells[2];
  if (nx < 1 || ny < 1 || nz < 1 || !(spacing[0] > 0.0 && spacing[1] > 0.0 && spacing[2] > 0.0))
  {
    throw std::invalid_argument("grid needs at least one cell and positive spacing per axis");
  }

  Mesh mesh;
  mesh.cells = cells;
  mesh.spacing = spacing;
  mesh.extent = {nx * spacing[0], ny * spacing[1], nz * spacing[2]};

  auto cell_id = [&](int ix, int iy, int iz) { return (ix * ny + iy) * nz + iz; };
  auto grid_node = [&](int ix, int iy, int iz) { return (ix * (ny + 1) + iy) * (nz + 1) + iz; };

  std::vector<std::uint8_t> removed(static_cast<std::size_t>(nx) * ny * nz, 0);
  for (const auto &c : removed_cells)
  {
    if (c[0] < 0 || c[0] >= nx || c[1] < 0 || c[1] >= ny || c[2] < 0 || c[2] >= nz)
    {
      throw std::invalid_argument("removed cell outside the grid");
    }
    removed[cell_id(c[0], c[1], c[2])] = 1;
  }

  // Keep only the nodes touched by surviving cells, preserving lexicographic order.
  const int num_grid_nodes = (nx + 1) * (ny + 1) * (nz + 1);
  std::vector<int> node_id(num_grid_nodes, -1);
  for (int ix = 0; ix < nx; ++ix)
  {
    for (int iy = 0; iy < ny; ++iy)
    {
      for (int iz = 0; iz < nz; ++iz)
      {
        if (removed[cell_id(ix, iy, iz)])
        {
          continue;
        }
        for (int c = 0; c < 8; ++c)
        {
          node_id[grid_node(ix + (c & 1), iy + ((c >> 1) & 1), iz + ((c >> 2) & 1))] = 0;
        }
      }
    }
  }
  for (int ix = 0; ix <= nx; ++ix)
  {
    for (int iy = 0; iy <= ny; ++iy)
    {
      for (int iz = 0; iz <= nz; ++iz)
      {
        int &id = node_id[grid_node(ix, iy, iz)];
        if (id < 0)
        {
          continue;
        }
        id = mesh.num_nodes();
        mesh.nodes.push_back({ix * spacing[0], iy * spacing[1], iz * spacing[2]});
        mesh.node_grid.push_back({ix, iy, iz});
      }
    }
  }

  for (int ix = 0; ix < nx; ++ix)
  {
    for (int iy = 0; iy < ny; ++iy)
    {
      for (int iz = 0; iz < nz; ++iz)
      {
        if (removed[cell_id(ix, iy, iz)])
        {
          continue;
        }
        std::array<int, 8> hex{};
        for (int c = 0; c < 8; ++c)
        {
          hex[c] = node_id[grid_node(ix + (c & 1), iy + ((c >> 1) & 1), iz + ((c >> 2) & 1))];
        }
        mesh.hexes.push_back(hex);
        mesh.hex_cell.push_back({ix, iy, iz});
      }
    }
  }

  if (mesh.hexes.empty())
  {
    throw std::invalid_argument("every cell of the grid was removed");
  }

  const auto &local_edges = hex_local_edges();
  mesh.edges.reserve(mesh.hexes.size() * 3);
  for (const auto &hex : mesh.hexes)
  {
    for (const auto &le : local_edges)
    {
      mesh.edges.push_back({hex[le[0]], hex[le[1]]});
    }
  }
  std::sort(mesh.edges.begin(), mesh.edges.end());
  mesh.edges.erase(std::unique(mesh.edges.begin(), mesh.edges.end()), mesh.edges.end());

  mesh.edge_axis.resize(mesh.edges.size());
  for (std::size_t e = 0; e < mesh.edges.size(); ++e)
  {
    const auto &a = mesh.node_grid[mesh.edges[e][0]];
    const auto &b = mesh.node_grid[mesh.edges[e][1]];
    mesh.edge_axis[e] = static_cast<std::uint8_t>(a[0] != b[0] ? 0 : (a[1] != b[1] ? 1 : 2));
  }

  mesh.hex_edges.resize(mesh.hexes.size());
  for (std::size_t t = 0; t < mesh.hexes.size(); ++t)
  {
    for (int le = 0; le < 12; ++le)
    {
      const std::array<int, 2> key = {mesh.hexes[t][local_edges[le][0]],
                                      mesh.hexes[t][local_edges[le][1]]};
      auto it = std::lower_bound(mesh.edges.begin(), mesh.edges.end(), key);
      mesh.hex_edges[t][le] = static_cast<int>(it - mesh.edges.begin());
    }
  }

  const int num_hexes = mesh.num_hexes();
  mesh.edge_to_hexes = build_adjacency(mesh.num_edges(), num_hexes, 12, [&](int t, int k)
                                       { return mesh.hex_edges[t][k]; });
  mesh.node_to_hexes = build_adjacency(mesh.num_nodes(), num_hexes, 8,
                                       [&](int t, int k) { return mesh.hexes[t][k]; });
  mesh.node_to_edges = build_adjacency(mesh.num_nodes(), mesh.num_edges(), 2,
                                       [&](int e, int k) { return mesh.edges[e][k]; });

  // Boundary quads are hex faces that appear exactly once.
  struct FaceRecord
  {
    std::array<int, 4> key;
    int hex;
    int local;
  };
  std::vector<FaceRecord> faces;
  faces.reserve(mesh.hexes.size() * 6);
  for (int t = 0; t < num_hexes; ++t)
  {
    for (int f = 0; f < 6; ++f)
    {
      FaceRecord rec{{}, t, f};
      for (int c = 0; c < 4; ++c)
      {
        rec.key[c] = mesh.hexes[t][kHexFaces[f][c]];
      }
      std::sort(rec.key.begin(), rec.key.end());
      faces.push_back(rec);
    }
  }
  std::sort(faces.begin(), faces.end(), [](const FaceRecord &a, const FaceRecord &b)
            { return std::tie(a.key, a.hex) < std::tie(b.key, b.hex); });
  for (std::size_t i = 0; i < faces.size();)
  {
    std::size_t j = i + 1;
    while (j < faces.size() && faces[j].key == faces[i].key)
    {
      ++j;
    }
    if (j - i == 1)
    {
      const auto &rec = faces[i];
      BoundaryFace bf;
      bf.hex = rec.hex;
      for (int c = 0; c < 4; ++c)
      {
        bf.nodes[c] = mesh.hexes[rec.hex][kHexFaces[rec.local][c]];
      }
      const int axis = rec.local / 2;
      const int coord = mesh.node_grid[bf.nodes[0]][axis];
      if (coord == 0)
      {
        bf.outer = 2 * axis;
      }
      else if (coord == mesh.cells[axis])
      {
        bf.outer = 2 * axis + 1;
      }
      mesh.boundary_faces.push_back(bf);
    }
    i = j;
  }
  std::sort(mesh.boundary_faces.begin(), mesh.boundary_faces.end(),
            [](const BoundaryFace &a, const BoundaryFace &b)
            { return std::tie(a.hex, a.nodes) < std::tie(b.hex, b.nodes); });
  return mesh;
}

void write_mesh_listing(const Mesh &mesh, std::ostream &out)
{
  out << "# nodes " << mesh.num_nodes() << "\n";
  for (int i = 0; i < mesh.num_nodes(); ++i)
  {
    const auto &p = mesh.nodes[i];
    out << i << ' ' << p.x << ' ' << p.y << ' ' << p.z << '\n';
  }
  out << "# hexes " << mesh.num_hexes() << "\n";
  for (int t = 0; t < mesh.num_hexes(); ++t)
  {
    out << t;
    for (int v : mesh.hexes[t])
    {
      out << ' ' << v;
    }
    out << '\n';
  }
  out << "# edges " << mesh.num_edges() << "\n";
  for (int e = 0; e < mesh.num_edges(); ++e)
  {
    out << e << ' ' << mesh.edges[e][0] << ' ' << mesh.edges[e][1] << '\n';
  }
}

}  // namespace maxdd
