#pragma once

#include "hps/leaf.hpp"
#include "hps/mesh.hpp"
#include "hps/types.hpp"

namespace hps::oracle {

/// Dense global collocation system. Row i is
///   interior node:        (shift + scale*A) u at x_i
///   interface edge node:  flux from one owner minus flux from the other
///   boundary edge node:   outward normal derivative
template <class Scalar>
struct GlobalSystem {
  const Mesh* mesh = nullptr;
  Matrix<Scalar> matrix;
};

inline constexpr int kMaxOracleNodes = 5000;

/// Assembled directly from 1D Chebyshev matrices, independent of the leaf and
/// solver modules. Throws Error when the mesh exceeds kMaxOracleNodes.
template <class Scalar>
GlobalSystem<Scalar> assemble_global(const Mesh& mesh, const ShiftedOperator<Scalar>& op);

/// Dirichlet solve: boundary rows replaced by identity rows. Throws
/// FactorizationError on a singular system.
template <class Scalar>
Field<Scalar> oracle_solve(const GlobalSystem<Scalar>& system, const Field<Scalar>& load,
                           const Field<Scalar>& dirichlet);

}  // namespace hps::oracle
