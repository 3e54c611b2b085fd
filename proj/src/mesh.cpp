#include "hps/mesh.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "hps/error.hpp"
#include "hps/spectral.hpp"

namespace hps {

namespace {

bool is_leaf_interior(int i, int j, int p, int dim) {
  const bool xin = i > 0 && i < p - 1;
  return dim == 1 ? xin : xin && j > 0 && j < p - 1;
}

// Canonical leaf ordering: interior (grid order), then S, E, N, W edges.
std::vector<int> leaf_grid_order(int p, int dim) {
  std::vector<int> order;
  if (dim == 1) {
    for (int i = 1; i < p - 1; ++i) order.push_back(i);
    order.push_back(0);
    order.push_back(p - 1);
    return order;
  }
  for (int j = 1; j < p - 1; ++j)
    for (int i = 1; i < p - 1; ++i) order.push_back(j * p + i);
  for (int i = 1; i < p - 1; ++i) order.push_back(i);                // S
  for (int j = 1; j < p - 1; ++j) order.push_back(j * p + p - 1);    // E
  for (int i = 1; i < p - 1; ++i) order.push_back((p - 1) * p + i);  // N
  for (int j = 1; j < p - 1; ++j) order.push_back(j * p);            // W
  return order;
}

}  // namespace

long expected_node_count(int dim, int n1, int n2, int p) {
  if (dim == 1) return static_cast<long>(n1) * (p - 1) + 1;
  return static_cast<long>(p - 2) * (static_cast<long>(p) * n1 * n2 + n1 + n2);
}

Mesh Mesh::build(const Box& domain, int n1, int n2, int p, int dim) {
  if (dim != 1 && dim != 2) throw InvalidGeometry("dimension must be 1 or 2");
  if (dim == 1) n2 = 1;
  if (n1 < 1 || n2 < 1) throw InvalidGeometry("leaf counts must be positive");
  if (!(domain.x1 > domain.x0) || (dim == 2 && !(domain.y1 > domain.y0))) {
    throw InvalidGeometry("degenerate domain");
  }
  if (p < (dim == 2 ? 3 : 2)) {
    throw InvalidOrder("order p=" + std::to_string(p) + " too small for a " +
                       std::to_string(dim) + "D mesh");
  }

  Mesh m;
  m.dim_ = dim;
  m.n1_ = n1;
  m.n2_ = n2;
  m.p_ = p;
  m.domain_ = domain;
  m.hx_ = (domain.x1 - domain.x0) / n1;
  m.hy_ = dim == 2 ? (domain.y1 - domain.y0) / n2 : 0.0;

  const auto ref = spectral::cheb_nodes(p);
  const auto order = leaf_grid_order(p, dim);
  const long gx_max = static_cast<long>(n1) * (p - 1);
  const long gy_max = static_cast<long>(n2) * (p - 1);
  const long stride = gx_max + 1;

  // Global lattice key -> node id, assigned in row-major lattice order.
  std::map<long, int> ids;
  for (int iy = 0; iy < n2; ++iy) {
    for (int ix = 0; ix < n1; ++ix) {
      for (int k : order) {
        const int i = dim == 1 ? k : k % p;
        const int j = dim == 1 ? 0 : k / p;
        const long gx = static_cast<long>(ix) * (p - 1) + i;
        const long gy = static_cast<long>(iy) * (p - 1) + j;
        ids.emplace(gy * stride + gx, -1);
      }
    }
  }
  int next = 0;
  for (auto& [key, id] : ids) id = next++;
  m.nodes_.resize(ids.size());

  m.leaves_.reserve(static_cast<size_t>(n1) * n2);
  for (int iy = 0; iy < n2; ++iy) {
    for (int ix = 0; ix < n1; ++ix) {
      LeafInfo leaf;
      leaf.ix = ix;
      leaf.iy = iy;
      leaf.box.x0 = domain.x0 + ix * m.hx_;
      leaf.box.x1 = ix == n1 - 1 ? domain.x1 : domain.x0 + (ix + 1) * m.hx_;
      if (dim == 2) {
        leaf.box.y0 = domain.y0 + iy * m.hy_;
        leaf.box.y1 = iy == n2 - 1 ? domain.y1 : domain.y0 + (iy + 1) * m.hy_;
      } else {
        leaf.box.y0 = leaf.box.y1 = 0.0;
      }
      const int leaf_id = static_cast<int>(m.leaves_.size());
      for (int k : order) {
        const int i = dim == 1 ? k : k % p;
        const int j = dim == 1 ? 0 : k / p;
        const long gx = static_cast<long>(ix) * (p - 1) + i;
        const long gy = static_cast<long>(iy) * (p - 1) + j;
        const int id = ids.at(gy * stride + gx);
        leaf.grid.push_back(k);
        leaf.global.push_back(id);
        if (is_leaf_interior(i, j, p, dim)) ++leaf.n_interior;

        MeshNode& node = m.nodes_[id];
        if (node.owners[0] < 0) {
          node.owners[0] = leaf_id;
          // Grid coordinates come from the lattice position so that both
          // owners of a shared node agree exactly.
          node.x = domain.x0 + ix * m.hx_ + 0.5 * (ref[i] + 1.0) * m.hx_;
          if (i == p - 1) node.x = leaf.box.x1;
          if (i == 0) node.x = leaf.box.x0;
          if (dim == 2) {
            node.y = domain.y0 + iy * m.hy_ + 0.5 * (ref[j] + 1.0) * m.hy_;
            if (j == p - 1) node.y = leaf.box.y1;
            if (j == 0) node.y = leaf.box.y0;
          }
          if (is_leaf_interior(i, j, p, dim)) {
            node.cls = NodeClass::Interior;
          } else {
            const bool vertical = (i == 0 || i == p - 1);
            node.dir = vertical ? FluxDirection::X : FluxDirection::Y;
            const bool on_gamma = vertical ? (gx == 0 || gx == gx_max) : (gy == 0 || gy == gy_max);
            node.cls = on_gamma ? NodeClass::Boundary : NodeClass::Interface;
            if (on_gamma) {
              node.outward = vertical ? (gx == 0 ? -1.0 : 1.0) : (gy == 0 ? -1.0 : 1.0);
            }
          }
        } else {
          node.owners[1] = leaf_id;
        }
      }
      m.leaves_.push_back(std::move(leaf));
    }
  }

  for (int id = 0; id < m.size(); ++id) {
    if (m.nodes_[id].cls == NodeClass::Boundary) m.gamma_.push_back(id);
  }
  return m;
}

std::vector<NodeClass> classify_nodes(const Mesh& mesh) {
  std::vector<NodeClass> out;
  out.reserve(mesh.size());
  for (const auto& n : mesh.nodes()) out.push_back(n.cls);
  return out;
}

}  // namespace hps
