#pragma once

#include <array>
#include <vector>

#include "hps/leaf.hpp"
#include "hps/mesh.hpp"
#include "hps/types.hpp"

namespace hps {

enum class SolveMode { Standard, SlopeCorrected };

/// Right-hand side of one solve. `load` is read at leaf-interior nodes and
/// `dirichlet` at boundary (Gamma) nodes; both have mesh size.
///
/// In SlopeCorrected mode the interface condition becomes
///   [[ flux(k) + flux(u_prev) / dt ]] = 0,
/// which cancels the derivative jump that u_prev carries across leaf edges
/// once u_prev + dt * k is formed.
template <class Scalar>
struct SolveRequest {
  Field<Scalar> load;
  Field<Scalar> dirichlet;
  SolveMode mode = SolveMode::Standard;
  const Field<Scalar>* previous = nullptr;
  double dt = 0.0;
};

/// Data of one internal merge: index sets 1 (alpha only), 2 (beta only) and
/// 3 (shared interface), and the factored interface system.
template <class Scalar>
struct MergeOperator {
  using Vec = Field<Scalar>;

  std::vector<int> pos1, pos3a;  // positions in alpha's boundary list
  std::vector<int> pos2, pos3b;  // positions in beta's boundary list
  Eigen::PartialPivLU<Matrix<Scalar>> interface_lu;  // T^a_33 - T^b_33
  Matrix<Scalar> interface_map;  // (T^a_33 - T^b_33)^{-1} [-T^a_31 | T^b_32]
  Matrix<Scalar> propagate;      // [T^a_13; T^b_23]

  /// Interface values from the parent's boundary values [g1; g2] and the
  /// children's particular fluxes on set 3.
  Vec interface_values(const Vec& parent_boundary, const Vec& h_alpha3, const Vec& h_beta3) const;

  /// Same, with the derivative jumps of a previous solution folded into the
  /// interface condition:
  ///   k_3 = (T^a_33 - T^b_33)^{-1}(T^b_32 k_2 - T^a_31 k_1 + h^b_3 - h^a_3
  ///                                 - (h^{u,a}_3 - h^{u,b}_3) / dt).
  Vec interface_values(const Vec& parent_boundary, const Vec& h_alpha3, const Vec& h_beta3,
                       const Vec& hu_alpha3, const Vec& hu_beta3, double dt) const;

  /// Parent particular flux [v1; v2] given children fluxes (already corrected).
  Vec parent_flux(const Vec& h_alpha, const Vec& h_beta, Vec* interface_particular) const;
};

/// Build-once / solve-many factorization of shift*I + scale*A on a mesh.
template <class Scalar>
class HpsFactorization {
 public:
  using Vec = Field<Scalar>;

  /// Throws FactorizationError naming the leaf or tree node whose block is
  /// singular.
  static HpsFactorization build(const Mesh& mesh, const ShiftedOperator<Scalar>& op, int threads = 1);

  /// Concurrent calls on one factorization are safe.
  Vec solve(const SolveRequest<Scalar>& request) const;

  const Mesh& mesh() const { return *mesh_; }
  const ShiftedOperator<Scalar>& op() const { return op_; }

  /// Root DtN restricted to Gamma; rows/cols follow root_boundary().
  const Matrix<Scalar>& root_dtn() const { return root_dtn_; }
  const std::vector<int>& root_boundary() const { return nodes_.back().boundary; }
  /// Root particular flux for a load (zero Dirichlet data).
  Vec root_particular_flux(const Vec& load) const;

  int num_tree_nodes() const { return static_cast<int>(nodes_.size()); }
  int depth() const;
  const LeafOperators<Scalar>& leaf_operators(int leaf) const { return leaf_ops_[leaf]; }
  /// Merge data of tree node `node` (internal nodes only).
  const MergeOperator<Scalar>& merge(int node) const { return nodes_[node].merge; }
  /// Tree node indices of the two children; {-1,-1} for leaves.
  std::array<int, 2> children(int node) const { return nodes_[node].child; }
  int root() const { return static_cast<int>(nodes_.size()) - 1; }

 private:
  struct TreeNode {
    std::array<int, 2> child{-1, -1};
    int leaf = -1;
    int level = 0;  // height above the leaves
    int depth = 0;  // distance from the root
    std::vector<int> boundary;  // global ids
    MergeOperator<Scalar> merge;
  };

  struct Workspace;
  void upward(const SolveRequest<Scalar>& req, Workspace& ws) const;

  const Mesh* mesh_ = nullptr;
  ShiftedOperator<Scalar> op_;
  std::vector<LeafOperators<Scalar>> leaf_ops_;
  std::vector<TreeNode> nodes_;  // children precede parents; root last
  Matrix<Scalar> root_dtn_;
};

/// Standard Dirichlet solve.
template <class Scalar>
Field<Scalar> solve_dirichlet(const HpsFactorization<Scalar>& fact, const Field<Scalar>& load,
                              const Field<Scalar>& dirichlet);

}  // namespace hps
