#pragma once

#include <functional>
#include <vector>

#include "hps/mesh.hpp"
#include "hps/spectral.hpp"
#include "hps/types.hpp"

namespace hps {

using CoefficientFn = std::function<double(double x, double y)>;

/// Variable-coefficient elliptic operator
///   A u = -c11 u_xx - 2 c12 u_xy - c22 u_yy + c1 u_x + c2 u_y + c u
/// together with the time prefactor kappa of kappa u_t = -A u + ...; the
/// evolution generator is therefore G = -A / kappa. Empty coefficients are
/// identically zero.
struct EllipticOperator {
  CoefficientFn c11, c12, c22, c1, c2, c;
  Complex kappa{1.0, 0.0};

  /// A = -diffusivity * Laplacian.
  static EllipticOperator negative_laplacian(double diffusivity = 1.0);

  bool has_principal_part() const { return static_cast<bool>(c11) || static_cast<bool>(c22); }
};

/// shift * I + scale * A. Implicit stages use shift = 1, scale = dt*gamma/kappa.
template <class Scalar>
struct ShiftedOperator {
  EllipticOperator op;
  Scalar shift{0};
  Scalar scale{1};
};

/// Collocation of A (no shift/scale) on the full leaf grid, corners included.
/// Throws InvalidOperator when a principal part is present but not elliptic at
/// some node.
RealMatrix collocate_operator(const spectral::LeafStencil& stencil, const EllipticOperator& op,
                              const Box& leaf_box);

/// shift * I + scale * A on the full leaf grid.
template <class Scalar>
Matrix<Scalar> collocate_leaf(const spectral::LeafStencil& stencil, const ShiftedOperator<Scalar>& op,
                              const Box& leaf_box);

/// Per-leaf solution operator, DtN map and particular-solution fluxes.
/// Boundary quantities are ordered as LeafInfo's edge nodes; fluxes are the
/// coordinate-direction derivative of the node (d/dx on vertical edges).
template <class Scalar>
struct LeafOperators {
  using Vec = Field<Scalar>;

  int n_interior = 0;
  int n_boundary = 0;
  Eigen::PartialPivLU<Matrix<Scalar>> interior_lu;
  Matrix<Scalar> solution;  // boundary values -> interior values (zero load)
  RealMatrix flux_interior; // flux rows restricted to interior columns
  RealMatrix flux_boundary; // flux rows restricted to boundary columns
  Matrix<Scalar> dtn;       // T

  /// Interior solution of the zero-boundary problem with load f_I.
  Vec particular(const Vec& interior_load) const;
  /// Flux of the zero-boundary particular solution y.
  Vec particular_flux(const Vec& particular_solution) const;
  /// Interior values from boundary data g and particular solution y.
  Vec interior(const Vec& boundary_values, const Vec& particular_solution) const;
  /// Flux of a full leaf field (interior then boundary values).
  Vec flux(const Vec& local_values) const;
};

/// Builds leaf operators from the collocated grid matrix. Throws
/// FactorizationError for a singular interior block and InvalidOperator if an
/// interior row couples to a leaf corner (mixed derivative term).
template <class Scalar>
LeafOperators<Scalar> build_leaf_operators(const Matrix<Scalar>& collocated, const LeafInfo& leaf,
                                           const spectral::LeafStencil& stencil, const Mesh& mesh);

/// Gather the leaf's active values (interior first, then edges).
template <class Scalar>
Field<Scalar> gather(const LeafInfo& leaf, const Field<Scalar>& global);

/// Per-leaf spectral evaluation of an operator and derivatives on a mesh.
/// Values are produced at leaf-interior nodes only; other entries are zero.
class LeafCalculus {
 public:
  LeafCalculus(const Mesh& mesh, const EllipticOperator& op);

  const Mesh& mesh() const { return *mesh_; }

  template <class Scalar>
  Field<Scalar> apply_interior(const Field<Scalar>& u) const;
  template <class Scalar>
  Field<Scalar> dx_interior(const Field<Scalar>& u) const;
  template <class Scalar>
  Field<Scalar> dy_interior(const Field<Scalar>& u) const;

  /// Flux of u on each leaf's edge nodes, as seen from that leaf.
  template <class Scalar>
  std::vector<Field<Scalar>> leaf_fluxes(const Field<Scalar>& u) const;

  /// A u evaluated at every non-interior node from each owning leaf and
  /// averaged (1D only; in 2D edge evaluation would touch leaf corners).
  template <class Scalar>
  Field<Scalar> apply_edge_averaged(const Field<Scalar>& u) const;

 private:
  struct PerLeaf {
    RealMatrix op_rows;    // interior rows of A over active columns
    RealMatrix dx_rows;    // interior rows of d/dx
    RealMatrix dy_rows;    // interior rows of d/dy (2D)
    RealMatrix flux_rows;  // edge-node flux rows
    RealMatrix edge_op_rows;  // 1D: A rows at the two endpoints
  };

  template <class Scalar>
  Field<Scalar> apply_rows(const Field<Scalar>& u, RealMatrix PerLeaf::*rows) const;

  const Mesh* mesh_;
  std::vector<PerLeaf> leaves_;
};

}  // namespace hps
