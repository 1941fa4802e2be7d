// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXDD_MESH_HPP
#define MAXDD_MESH_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace maxdd
{

struct Point3
{
  double x = 0.0, y = 0.0, z = 0.0;
};

// Square hole cross-section in the (y, z) plane, given by its lower corner and side length
// in physical units. A longitudinal hole runs along the whole beam.
struct SquareSection
{
  double y0 = 0.0, z0 = 0.0, size = 0.0;
};

struct HoleSpec
{
  bool enabled = false;
  std::vector<SquareSection> longitudinal;

  // Transverse holes are tunnels running in y through the full cross-section. Within unit
  // block u the k-th tunnel starts at x = u + (2k + 1) / (2 per_unit), has side `size`, and sits
  // at the z level of the lower (k even) or upper (k odd) row of longitudinal holes.
  int transverse_per_unit = 0;
  double transverse_size = 0.0;

  // Four longitudinal holes of side 1/8 placed symmetrically at y, z in {1/4, 5/8}, plus two
  // transverse tunnels per unit length connecting pairs of them.
  static HoleSpec standard();
};

struct BeamGeometry
{
  // Beam is length x 1 x 1, made of `length` unit blocks.
  int length = 1;
  double h = 0.5;
  HoleSpec holes;

  // Number of cells across one unit; throws if 1/h is not a positive integer.
  int cells_per_unit() const;
  void validate() const;
};

enum class OuterFace : std::uint8_t
{
  XMin = 0,
  XMax,
  YMin,
  YMax,
  ZMin,
  ZMax
};

inline constexpr int kNumOuterFaces = 6;

// Compressed adjacency list (offsets into a flat index array).
struct Adjacency
{
  std::vector<int> offsets{0};
  std::vector<int> indices;

  int size() const { return static_cast<int>(offsets.size()) - 1; }
  int count(int i) const { return offsets[i + 1] - offsets[i]; }
  const int *begin(int i) const { return indices.data() + offsets[i]; }
  const int *end(int i) const { return indices.data() + offsets[i + 1]; }
};

struct BoundaryFace
{
  std::array<int, 4> nodes{};
  int hex = -1;
  // Outer face this quad lies on, or -1 for a face created by a hole.
  int outer = -1;
};

//
// Axis-aligned hexahedral mesh of a beam. Node numbering is lexicographic in (x, y, z) with x
// slowest, so every edge points in a positive axis direction and tail < head.
//
// Local hex node n = i + 2j + 4k for the corner offset (i, j, k). Local edges 0-3 run in x at
// (j, k) = (0,0),(1,0),(0,1),(1,1); edges 4-7 run in y at (i, k); edges 8-11 run in z at (i, j).
//
class Mesh
{
public:
  std::array<int, 3> cells{};  // grid cells along x, y, z before carving
  std::array<double, 3> spacing{};
  std::array<double, 3> extent{};

  std::vector<Point3> nodes;
  std::vector<std::array<int, 3>> node_grid;
  std::vector<std::array<int, 8>> hexes;
  std::vector<std::array<int, 3>> hex_cell;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::uint8_t> edge_axis;
  std::vector<std::array<int, 12>> hex_edges;
  Adjacency node_to_edges;
  Adjacency edge_to_hexes;
  Adjacency node_to_hexes;
  std::vector<BoundaryFace> boundary_faces;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_hexes() const { return static_cast<int>(hexes.size()); }
  Point3 hex_center(int hex) const;
};

// Local node pairs of the 12 hex edges, in local edge order.
const std::array<std::array<int, 2>, 12> &hex_local_edges();

Mesh build_beam_mesh(const BeamGeometry &geom);

// nx x ny x nz brick grid with the listed cells removed. Throws if all cells are gone.
Mesh build_grid_mesh(const std::array<int, 3> &cells, const std::array<double, 3> &spacing,
                     const std::vector<std::array<int, 3>> &removed_cells = {});

// Grid cells (x, y, z) that the hole specification removes from the beam. Also used to place
// hole-located coefficient values on an uncarved beam.
std::vector<std::array<int, 3>> hole_cells(const BeamGeometry &geom);

// Plain-text listing of nodes, hexes and edges for debugging.
void write_mesh_listing(const Mesh &mesh, std::ostream &out);

}  // namespace maxdd

#endif  // MAXDD_MESH_HPP
