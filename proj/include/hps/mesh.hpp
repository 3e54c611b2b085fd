#pragma once

#include <array>
#include <functional>
#include <vector>

#include "hps/types.hpp"

namespace hps {

struct Box {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;
};

enum class NodeClass { Interior, Interface, Boundary };

/// Coordinate direction of the flux enforced at an edge node: vertical edges
/// carry d/dx, horizontal edges d/dy. Interior nodes carry None.
enum class FluxDirection { None, X, Y };

/// Active nodes of one leaf. Ordering is interior nodes first (grid order),
/// then edge nodes S, E, N, W (each ascending along the edge). In 1D the edge
/// nodes are the two endpoints, W then E. Corner points never appear.
struct LeafInfo {
  int ix = 0;
  int iy = 0;
  Box box;
  int n_interior = 0;
  std::vector<int> grid;    // leaf grid index (j*p + i, or i in 1D)
  std::vector<int> global;  // global node id, same order as grid

  int n_active() const { return static_cast<int>(grid.size()); }
  int n_boundary() const { return n_active() - n_interior; }
};

struct MeshNode {
  double x = 0.0;
  double y = 0.0;
  NodeClass cls = NodeClass::Interior;
  FluxDirection dir = FluxDirection::None;
  std::array<int, 2> owners{-1, -1};  // owning leaves; second is -1 unless interface
  double outward = 0.0;               // +-1 on Gamma: sign of outward normal along dir
};

/// Uniform n1 x n2 partition of a rectangle with corner-free Chebyshev leaves.
class Mesh {
 public:
  /// dim = 1 ignores n2 and the y extent. Throws InvalidGeometry/InvalidOrder.
  static Mesh build(const Box& domain, int n1, int n2, int p, int dim);

  int dim() const { return dim_; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int order() const { return p_; }
  const Box& domain() const { return domain_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }

  int size() const { return static_cast<int>(nodes_.size()); }
  int num_leaves() const { return static_cast<int>(leaves_.size()); }
  int leaf_index(int ix, int iy) const { return iy * n1_ + ix; }

  const std::vector<MeshNode>& nodes() const { return nodes_; }
  const MeshNode& node(int id) const { return nodes_[id]; }
  const std::vector<LeafInfo>& leaves() const { return leaves_; }
  const LeafInfo& leaf(int index) const { return leaves_[index]; }

  /// Global ids of nodes on the physical boundary, ascending.
  const std::vector<int>& gamma() const { return gamma_; }

  /// Leaf grid coordinates of local grid index k.
  std::array<int, 2> grid_ij(int k) const {
    return dim_ == 1 ? std::array<int, 2>{k, 0} : std::array<int, 2>{k % p_, k / p_};
  }

  template <class Scalar, class Fn>
  Field<Scalar> sample(Fn&& fn) const {
    Field<Scalar> out(size());
    for (int i = 0; i < size(); ++i) out(i) = static_cast<Scalar>(fn(nodes_[i].x, nodes_[i].y));
    return out;
  }

 private:
  int dim_ = 2;
  int n1_ = 1;
  int n2_ = 1;
  int p_ = 2;
  Box domain_;
  double hx_ = 0.0;
  double hy_ = 0.0;
  std::vector<MeshNode> nodes_;
  std::vector<LeafInfo> leaves_;
  std::vector<int> gamma_;
};

/// Node classes in global order.
std::vector<NodeClass> classify_nodes(const Mesh& mesh);

/// (p-2)(p n1 n2 + n1 + n2) in 2D, n1 (p-1) + 1 in 1D.
long expected_node_count(int dim, int n1, int n2, int p);

}  // namespace hps
