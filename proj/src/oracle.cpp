#include "hps/oracle.hpp"

#include <string>

#include "hps/error.hpp"
#include "hps/spectral.hpp"

namespace hps::oracle {

namespace {

double eval(const CoefficientFn& fn, double x, double y) { return fn ? fn(x, y) : 0.0; }

}  // namespace

template <class Scalar>
GlobalSystem<Scalar> assemble_global(const Mesh& mesh, const ShiftedOperator<Scalar>& op) {
  const int n = mesh.size();
  if (n > kMaxOracleNodes) {
    throw Error("oracle limited to " + std::to_string(kMaxOracleNodes) + " nodes, mesh has " +
                std::to_string(n));
  }
  if (op.op.c12) throw InvalidOperator("oracle does not support mixed derivative terms");
  const int p = mesh.order();
  const bool two_d = mesh.dim() == 2;
  const auto ref = spectral::cheb_nodes(p);
  const RealMatrix D = spectral::cheb_diff_matrix(p);
  const RealMatrix Dx = (2.0 / mesh.hx()) * D;
  const RealMatrix Dxx = Dx * Dx;
  const RealMatrix Dy = two_d ? RealMatrix((2.0 / mesh.hy()) * D) : RealMatrix();
  const RealMatrix Dyy = two_d ? RealMatrix(Dy * Dy) : RealMatrix();

  GlobalSystem<Scalar> sys;
  sys.mesh = &mesh;
  sys.matrix = Matrix<Scalar>::Zero(n, n);
  auto& M = sys.matrix;

  // Adds sign * d/d(dir) at local (i, j) of leaf l into row `row`.
  auto add_flux = [&](int row, const std::vector<int>& ids, int i, int j, FluxDirection dir,
                      double sign) {
    if (dir == FluxDirection::X || !two_d) {
      for (int k = 0; k < p; ++k) {
        const int id = ids[two_d ? j * p + k : k];
        if (Dx(i, k) != 0.0 && id < 0) throw Error("flux row reaches a corner");
        if (id >= 0) M(row, id) += sign * Dx(i, k);
      }
    } else {
      for (int k = 0; k < p; ++k) {
        const int id = ids[k * p + i];
        if (Dy(j, k) != 0.0 && id < 0) throw Error("flux row reaches a corner");
        if (id >= 0) M(row, id) += sign * Dy(j, k);
      }
    }
  };

  std::vector<char> done(n, 0);
  for (int l = 0; l < mesh.num_leaves(); ++l) {
    const auto& leaf = mesh.leaf(l);
    std::vector<int> ids(two_d ? p * p : p, -1);
    for (int k = 0; k < leaf.n_active(); ++k) ids[leaf.grid[k]] = leaf.global[k];

    for (int k = 0; k < leaf.n_active(); ++k) {
      const int row = leaf.global[k];
      const int i = two_d ? leaf.grid[k] % p : leaf.grid[k];
      const int j = two_d ? leaf.grid[k] / p : 0;
      const MeshNode& node = mesh.node(row);
      if (node.cls == NodeClass::Interior) {
        const double x = node.x, y = node.y;
        const double a11 = eval(op.op.c11, x, y), a1 = eval(op.op.c1, x, y);
        M(row, row) += op.shift + op.scale * eval(op.op.c, x, y);
        for (int q = 0; q < p; ++q) {
          const int idx = ids[two_d ? j * p + q : q];
          M(row, idx) += op.scale * (-a11 * Dxx(i, q) + a1 * Dx(i, q));
        }
        if (two_d) {
          const double a22 = eval(op.op.c22, x, y), a2 = eval(op.op.c2, x, y);
          for (int q = 0; q < p; ++q) {
            M(row, ids[q * p + i]) += op.scale * (-a22 * Dyy(j, q) + a2 * Dy(j, q));
          }
        }
      } else if (node.cls == NodeClass::Interface) {
        const double sign = node.owners[0] == l ? 1.0 : -1.0;
        add_flux(row, ids, i, j, node.dir, sign);
      } else if (!done[row]) {
        add_flux(row, ids, i, j, node.dir, node.outward);
        done[row] = 1;
      }
    }
  }
  return sys;
}

template <class Scalar>
Field<Scalar> oracle_solve(const GlobalSystem<Scalar>& sys, const Field<Scalar>& load,
                           const Field<Scalar>& dirichlet) {
  const Mesh& mesh = *sys.mesh;
  const int n = mesh.size();
  if (load.size() != n || dirichlet.size() != n) throw DimensionMismatch("oracle data size mismatch");
  Matrix<Scalar> M = sys.matrix;
  Field<Scalar> rhs = Field<Scalar>::Zero(n);
  for (int i = 0; i < n; ++i) {
    switch (mesh.node(i).cls) {
      case NodeClass::Interior:
        rhs(i) = load(i);
        break;
      case NodeClass::Interface:
        break;
      case NodeClass::Boundary:
        M.row(i).setZero();
        M(i, i) = Scalar(1);
        rhs(i) = dirichlet(i);
        break;
    }
  }
  Eigen::PartialPivLU<Matrix<Scalar>> lu(M);
  if (!(lu.rcond() > 1e-15)) throw FactorizationError("oracle system is singular");
  return lu.solve(rhs);
}

template GlobalSystem<double> assemble_global(const Mesh&, const ShiftedOperator<double>&);
template GlobalSystem<Complex> assemble_global(const Mesh&, const ShiftedOperator<Complex>&);
template Field<double> oracle_solve(const GlobalSystem<double>&, const Field<double>&,
                                    const Field<double>&);
template Field<Complex> oracle_solve(const GlobalSystem<Complex>&, const Field<Complex>&,
                                     const Field<Complex>&);

}  // namespace hps::oracle
