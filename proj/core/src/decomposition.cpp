// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "maxdd/decomposition.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

namespace maxdd
{

namespace
{

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void bisect(const Mesh &mesh, std::vector<int> hexes, int parts, int first_id,
            std::vector<int> &owner)
{
  if (parts == 1)
  {
    for (int t : hexes)
    {
      owner[t] = first_id;
    }
    return;
  }
  std::array<double, 3> lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  for (int t : hexes)
  {
    const auto c = mesh.hex_center(t);
    const std::array<double, 3> p = {c.x, c.y, c.z};
    for (int d = 0; d < 3; ++d)
    {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  }
  int axis = 0;
  for (int d = 1; d < 3; ++d)
  {
    if (hi[d] - lo[d] > hi[axis] - lo[axis] + 1e-12)
    {
      axis = d;
    }
  }
  // Grid cell indices give an exact, deterministic ordering.
  std::sort(hexes.begin(), hexes.end(),
            [&](int a, int b)
            {
              const auto &ca = mesh.hex_cell[a];
              const auto &cb = mesh.hex_cell[b];
              return std::tie(ca[axis], ca[(axis + 1) % 3], ca[(axis + 2) % 3], a) <
                     std::tie(cb[axis], cb[(axis + 1) % 3], cb[(axis + 2) % 3], b);
            });
  const auto half = static_cast<std::ptrdiff_t>(hexes.size() / 2);
  std::vector<int> left(hexes.begin(), hexes.begin() + half);
  std::vector<int> right(hexes.begin() + half, hexes.end());
  bisect(mesh, std::move(left), parts / 2, first_id, owner);
  bisect(mesh, std::move(right), parts / 2, first_id + parts / 2, owner);
}

std::vector<int> sorted_unique(std::vector<int> v)
{
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

Ownership partition_strips(const Mesh &mesh, int num_subdomains)
{
  const int layers = mesh.cells[0];
  if (num_subdomains < 1 || layers % num_subdomains != 0)
  {
    throw std::invalid_argument("strip partition: " + std::to_string(num_subdomains) +
                                " subdomains do not divide " + std::to_string(layers) +
                                " x-layers");
  }
  const int width = layers / num_subdomains;
  Ownership own;
  own.num_subdomains = num_subdomains;
  own.hex_owner.resize(mesh.num_hexes());
  for (int t = 0; t < mesh.num_hexes(); ++t)
  {
    own.hex_owner[t] = mesh.hex_cell[t][0] / width;
  }
  return own;
}

Ownership partition_rcb(const Mesh &mesh, int num_subdomains)
{
  if (!is_power_of_two(num_subdomains))
  {
    throw std::invalid_argument("RCB partition needs a power-of-two subdomain count, got " +
                                std::to_string(num_subdomains));
  }
  if (num_subdomains > mesh.num_hexes())
  {
    throw std::invalid_argument("more subdomains than hexes");
  }
  Ownership own;
  own.num_subdomains = num_subdomains;
  own.hex_owner.assign(mesh.num_hexes(), -1);
  std::vector<int> hexes(mesh.num_hexes());
  std::iota(hexes.begin(), hexes.end(), 0);
  bisect(mesh, std::move(hexes), num_subdomains, 0, own.hex_owner);
  return own;
}

PartitionKind partition_kind_from_name(std::string_view name)
{
  if (name == "strips")
  {
    return PartitionKind::Strips;
  }
  if (name == "rcb")
  {
    return PartitionKind::Rcb;
  }
  throw std::invalid_argument("unknown partition '" + std::string(name) + "'");
}

Ownership partition(const Mesh &mesh, PartitionKind kind, int num_subdomains)
{
  return kind == PartitionKind::Strips ? partition_strips(mesh, num_subdomains)
                                       : partition_rcb(mesh, num_subdomains);
}

OverlappingDecomposition extend_overlap(const Mesh &mesh, const Ownership &ownership,
                                        const DofMap &edge_dofs, const DofMap &node_dofs,
                                        int layers)
{
  if (layers < 1)
  {
    throw std::invalid_argument("overlap needs at least one layer");
  }
  const int n_sub = ownership.num_subdomains;
  OverlappingDecomposition d;
  d.num_subdomains = n_sub;
  d.owned_hexes.resize(n_sub);
  d.overlap_hexes.resize(n_sub);
  d.dofs.resize(n_sub);
  d.node_dofs.resize(n_sub);
  for (int t = 0; t < mesh.num_hexes(); ++t)
  {
    d.owned_hexes[ownership.hex_owner[t]].push_back(t);
  }

  std::vector<std::uint8_t> in_set(mesh.num_hexes());
  for (int i = 0; i < n_sub; ++i)
  {
    if (d.owned_hexes[i].empty())
    {
      throw std::invalid_argument("subdomain " + std::to_string(i) + " owns no hexes");
    }
    std::fill(in_set.begin(), in_set.end(), 0);
    std::vector<int> current = d.owned_hexes[i];
    for (int t : current)
    {
      in_set[t] = 1;
    }
    for (int layer = 0; layer < layers; ++layer)
    {
      std::vector<int> nodes;
      for (int t : current)
      {
        nodes.insert(nodes.end(), mesh.hexes[t].begin(), mesh.hexes[t].end());
      }
      nodes = sorted_unique(std::move(nodes));
      for (int v : nodes)
      {
        for (const int *it = mesh.node_to_hexes.begin(v); it != mesh.node_to_hexes.end(v); ++it)
        {
          if (!in_set[*it])
          {
            in_set[*it] = 1;
            current.push_back(*it);
          }
        }
      }
    }
    d.overlap_hexes[i] = sorted_unique(std::move(current));

    std::vector<int> dofs, nodes;
    for (int t : d.overlap_hexes[i])
    {
      for (int e : mesh.hex_edges[t])
      {
        if (const int f = edge_dofs.entity_to_free[e]; f >= 0)
        {
          dofs.push_back(f);
        }
      }
      for (int v : mesh.hexes[t])
      {
        if (const int f = node_dofs.entity_to_free[v]; f >= 0)
        {
          nodes.push_back(f);
        }
      }
    }
    d.dofs[i] = sorted_unique(std::move(dofs));
    d.node_dofs[i] = sorted_unique(std::move(nodes));
  }
  return d;
}

PartitionOfUnity build_pou(const OverlappingDecomposition &decomp, int num_dofs)
{
  std::vector<int> multiplicity(num_dofs, 0);
  for (const auto &dofs : decomp.dofs)
  {
    for (int g : dofs)
    {
      multiplicity[g]++;
    }
  }
  for (int g = 0; g < num_dofs; ++g)
  {
    if (multiplicity[g] == 0)
    {
      throw std::runtime_error("dof " + std::to_string(g) + " is covered by no subdomain");
    }
  }
  PartitionOfUnity pou;
  pou.weights.resize(decomp.size());
  for (int i = 0; i < decomp.size(); ++i)
  {
    const auto &dofs = decomp.dofs[i];
    pou.weights[i].resize(static_cast<Eigen::Index>(dofs.size()));
    for (std::size_t k = 0; k < dofs.size(); ++k)
    {
      pou.weights[i][static_cast<Eigen::Index>(k)] = 1.0 / multiplicity[dofs[k]];
    }
  }
  return pou;
}

Vector restrict_to(const std::vector<int> &dofs, const Vector &global)
{
  Vector local(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t k = 0; k < dofs.size(); ++k)
  {
    local[static_cast<Eigen::Index>(k)] = global[dofs[k]];
  }
  return local;
}

void prolong_add(const std::vector<int> &dofs, const Vector &local, Vector &global)
{
  for (std::size_t k = 0; k < dofs.size(); ++k)
  {
    global[dofs[k]] += local[static_cast<Eigen::Index>(k)];
  }
}

Vector apply_pou_sum(const OverlappingDecomposition &decomp, const PartitionOfUnity &pou,
                     const Vector &v)
{
  Vector out = Vector::Zero(v.size());
  for (int i = 0; i < decomp.size(); ++i)
  {
    const Vector local = restrict_to(decomp.dofs[i], v).cwiseProduct(pou.weights[i]);
    prolong_add(decomp.dofs[i], local, out);
  }
  return out;
}

int compute_k0(const SparseMatrix &system, const OverlappingDecomposition &decomp)
{
  const int n = static_cast<int>(system.rows());
  // Subdomains containing each dof.
  std::vector<std::vector<int>> owners(n);
  for (int j = 0; j < decomp.size(); ++j)
  {
    for (int g : decomp.dofs[j])
    {
      owners[g].push_back(j);
    }
  }
  int k0 = 0;
  std::vector<std::uint8_t> hit(decomp.size());
  for (int i = 0; i < decomp.size(); ++i)
  {
    std::fill(hit.begin(), hit.end(), 0);
    for (int g : decomp.dofs[i])
    {
      for (SparseMatrix::InnerIterator it(system, g); it; ++it)
      {
        if (it.value() != 0.0)
        {
          for (int j : owners[it.col()])
          {
            hit[j] = 1;
          }
        }
      }
    }
    k0 = std::max(k0, static_cast<int>(std::count(hit.begin(), hit.end(), 1)));
  }
  return k0;
}

int compute_k1(const OverlappingDecomposition &decomp, int num_hexes)
{
  std::vector<int> count(num_hexes, 0);
  for (const auto &hexes : decomp.overlap_hexes)
  {
    for (int t : hexes)
    {
      count[t]++;
    }
  }
  return count.empty() ? 0 : *std::max_element(count.begin(), count.end());
}

DDConstants compute_constants(const SparseMatrix &system, const OverlappingDecomposition &decomp,
                              int num_hexes)
{
  return {compute_k0(system, decomp), compute_k1(decomp, num_hexes)};
}

}  // namespace maxdd
