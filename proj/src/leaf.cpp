#include "hps/leaf.hpp"

#include <cmath>
#include <string>

#include "hps/error.hpp"

namespace hps {

namespace {

std::string leaf_name(const LeafInfo& leaf) {
  return "leaf (" + std::to_string(leaf.ix) + ", " + std::to_string(leaf.iy) + ")";
}

// Physical coordinates of the full leaf grid.
void grid_coordinates(const spectral::LeafStencil& st, const Box& box, std::vector<double>& xs,
                      std::vector<double>& ys) {
  const auto ref = spectral::cheb_nodes(st.p);
  const int n = st.grid_size();
  xs.resize(n);
  ys.resize(n);
  for (int k = 0; k < n; ++k) {
    const int i = st.dim == 1 ? k : k % st.p;
    const int j = st.dim == 1 ? 0 : k / st.p;
    xs[k] = box.x0 + 0.5 * (ref[i] + 1.0) * (box.x1 - box.x0);
    ys[k] = st.dim == 1 ? 0.0 : box.y0 + 0.5 * (ref[j] + 1.0) * (box.y1 - box.y0);
  }
}

const RealMatrix& flux_matrix(const spectral::LeafStencil& st, FluxDirection dir) {
  return (st.dim == 1 || dir == FluxDirection::X) ? st.Dx : st.Dy;
}

}  // namespace

EllipticOperator EllipticOperator::negative_laplacian(double diffusivity) {
  EllipticOperator op;
  op.c11 = [diffusivity](double, double) { return diffusivity; };
  op.c22 = [diffusivity](double, double) { return diffusivity; };
  return op;
}

RealMatrix collocate_operator(const spectral::LeafStencil& st, const EllipticOperator& op,
                              const Box& box) {
  std::vector<double> xs, ys;
  grid_coordinates(st, box, xs, ys);
  const int n = st.grid_size();
  RealMatrix A = RealMatrix::Zero(n, n);
  const bool principal = op.has_principal_part();
  for (int k = 0; k < n; ++k) {
    const double x = xs[k];
    const double y = ys[k];
    const double a11 = op.c11 ? op.c11(x, y) : 0.0;
    const double a22 = (st.dim == 2 && op.c22) ? op.c22(x, y) : 0.0;
    if (principal && (!(a11 > 0.0) || (st.dim == 2 && !(a22 > 0.0)))) {
      throw InvalidOperator("operator is not elliptic at (" + std::to_string(x) + ", " +
                            std::to_string(y) + ")");
    }
    if (a11 != 0.0) A.row(k) -= a11 * st.Dxx.row(k);
    if (op.c1) A.row(k) += op.c1(x, y) * st.Dx.row(k);
    if (st.dim == 2) {
      if (a22 != 0.0) A.row(k) -= a22 * st.Dyy.row(k);
      if (op.c12) A.row(k) -= 2.0 * op.c12(x, y) * st.Dxy.row(k);
      if (op.c2) A.row(k) += op.c2(x, y) * st.Dy.row(k);
    }
    if (op.c) A(k, k) += op.c(x, y);
  }
  return A;
}

template <class Scalar>
Matrix<Scalar> collocate_leaf(const spectral::LeafStencil& st, const ShiftedOperator<Scalar>& op,
                              const Box& box) {
  const int n = st.grid_size();
  Matrix<Scalar> M = Matrix<Scalar>::Identity(n, n) * op.shift;
  if (op.scale != Scalar(0)) M += op.scale * collocate_operator(st, op.op, box).template cast<Scalar>();
  return M;
}

template <class Scalar>
typename LeafOperators<Scalar>::Vec LeafOperators<Scalar>::particular(const Vec& f) const {
  if (n_interior == 0) return Vec(0);
  return interior_lu.solve(f);
}

template <class Scalar>
typename LeafOperators<Scalar>::Vec LeafOperators<Scalar>::particular_flux(const Vec& y) const {
  if (n_interior == 0) return Vec::Zero(n_boundary);
  return flux_interior.template cast<Scalar>() * y;
}

template <class Scalar>
typename LeafOperators<Scalar>::Vec LeafOperators<Scalar>::interior(const Vec& g,
                                                                    const Vec& y) const {
  if (n_interior == 0) return Vec(0);
  return solution * g + y;
}

template <class Scalar>
typename LeafOperators<Scalar>::Vec LeafOperators<Scalar>::flux(const Vec& local) const {
  Vec out = flux_boundary.template cast<Scalar>() * local.tail(n_boundary);
  if (n_interior > 0) out += flux_interior.template cast<Scalar>() * local.head(n_interior);
  return out;
}

template <class Scalar>
LeafOperators<Scalar> build_leaf_operators(const Matrix<Scalar>& M, const LeafInfo& leaf,
                                           const spectral::LeafStencil& st, const Mesh& mesh) {
  if (M.rows() != st.grid_size() || M.cols() != st.grid_size()) {
    throw DimensionMismatch("collocated matrix does not match the leaf grid");
  }
  LeafOperators<Scalar> ops;
  const int ni = leaf.n_interior;
  const int nb = leaf.n_boundary();
  ops.n_interior = ni;
  ops.n_boundary = nb;

  // Interior rows must not reach a corner: corners carry no unknown.
  if (st.dim == 2 && ni > 0) {
    const int p = st.p;
    for (int corner : {0, p - 1, p * (p - 1), p * p - 1}) {
      for (int r = 0; r < ni; ++r) {
        if (std::abs(M(leaf.grid[r], corner)) != 0.0) {
          throw InvalidOperator("interior collocation on " + leaf_name(leaf) +
                                " couples to a leaf corner; mixed derivative terms are unsupported");
        }
      }
    }
  }

  Matrix<Scalar> Bii(ni, ni), Bib(ni, nb);
  for (int r = 0; r < ni; ++r) {
    for (int c = 0; c < ni; ++c) Bii(r, c) = M(leaf.grid[r], leaf.grid[c]);
    for (int c = 0; c < nb; ++c) Bib(r, c) = M(leaf.grid[r], leaf.grid[ni + c]);
  }
  ops.flux_interior.resize(nb, ni);
  ops.flux_boundary.resize(nb, nb);
  for (int r = 0; r < nb; ++r) {
    const int k = leaf.grid[ni + r];
    const RealMatrix& D = flux_matrix(st, mesh.node(leaf.global[ni + r]).dir);
    for (int c = 0; c < ni; ++c) ops.flux_interior(r, c) = D(k, leaf.grid[c]);
    for (int c = 0; c < nb; ++c) ops.flux_boundary(r, c) = D(k, leaf.grid[ni + c]);
  }

  if (ni > 0) {
    ops.interior_lu.compute(Bii);
    const double rc = ops.interior_lu.rcond();
    if (!(rc > 1e-14)) {
      throw FactorizationError("singular interior block on " + leaf_name(leaf) +
                               " (rcond=" + std::to_string(rc) + ")");
    }
    ops.solution = -ops.interior_lu.solve(Bib);
    ops.dtn = ops.flux_boundary.template cast<Scalar>() +
              ops.flux_interior.template cast<Scalar>() * ops.solution;
  } else {
    ops.solution.resize(0, nb);
    ops.dtn = ops.flux_boundary.template cast<Scalar>();
  }
  return ops;
}

template <class Scalar>
Field<Scalar> gather(const LeafInfo& leaf, const Field<Scalar>& global) {
  Field<Scalar> out(leaf.n_active());
  for (int k = 0; k < leaf.n_active(); ++k) out(k) = global(leaf.global[k]);
  return out;
}

LeafCalculus::LeafCalculus(const Mesh& mesh, const EllipticOperator& op) : mesh_(&mesh) {
  const auto st = spectral::leaf_stencil(mesh.order(), mesh.hx(), mesh.dim() == 2 ? mesh.hy() : 1.0,
                                         mesh.dim());
  leaves_.reserve(mesh.num_leaves());
  for (const auto& leaf : mesh.leaves()) {
    const RealMatrix A = collocate_operator(st, op, leaf.box);
    const int ni = leaf.n_interior;
    const int na = leaf.n_active();
    const int nb = leaf.n_boundary();
    PerLeaf pl;
    pl.op_rows.resize(ni, na);
    pl.dx_rows.resize(ni, na);
    if (mesh.dim() == 2) pl.dy_rows.resize(ni, na);
    for (int r = 0; r < ni; ++r) {
      for (int c = 0; c < na; ++c) {
        pl.op_rows(r, c) = A(leaf.grid[r], leaf.grid[c]);
        pl.dx_rows(r, c) = st.Dx(leaf.grid[r], leaf.grid[c]);
        if (mesh.dim() == 2) pl.dy_rows(r, c) = st.Dy(leaf.grid[r], leaf.grid[c]);
      }
    }
    pl.flux_rows.resize(nb, na);
    for (int r = 0; r < nb; ++r) {
      const RealMatrix& D = flux_matrix(st, mesh.node(leaf.global[ni + r]).dir);
      for (int c = 0; c < na; ++c) pl.flux_rows(r, c) = D(leaf.grid[ni + r], leaf.grid[c]);
    }
    if (mesh.dim() == 1) {
      pl.edge_op_rows.resize(nb, na);
      for (int r = 0; r < nb; ++r)
        for (int c = 0; c < na; ++c) pl.edge_op_rows(r, c) = A(leaf.grid[ni + r], leaf.grid[c]);
    }
    leaves_.push_back(std::move(pl));
  }
}

template <class Scalar>
Field<Scalar> LeafCalculus::apply_rows(const Field<Scalar>& u, RealMatrix PerLeaf::*rows) const {
  if (u.size() != mesh_->size()) throw DimensionMismatch("field size does not match mesh");
  Field<Scalar> out = Field<Scalar>::Zero(mesh_->size());
  for (int l = 0; l < mesh_->num_leaves(); ++l) {
    const auto& leaf = mesh_->leaf(l);
    if (leaf.n_interior == 0) continue;
    const Field<Scalar> local = gather(leaf, u);
    const Field<Scalar> v = (leaves_[l].*rows).template cast<Scalar>() * local;
    for (int r = 0; r < leaf.n_interior; ++r) out(leaf.global[r]) = v(r);
  }
  return out;
}

template <class Scalar>
Field<Scalar> LeafCalculus::apply_interior(const Field<Scalar>& u) const {
  return apply_rows(u, &PerLeaf::op_rows);
}

template <class Scalar>
Field<Scalar> LeafCalculus::dx_interior(const Field<Scalar>& u) const {
  return apply_rows(u, &PerLeaf::dx_rows);
}

template <class Scalar>
Field<Scalar> LeafCalculus::dy_interior(const Field<Scalar>& u) const {
  if (mesh_->dim() != 2) throw DimensionMismatch("d/dy requested on a 1D mesh");
  return apply_rows(u, &PerLeaf::dy_rows);
}

template <class Scalar>
std::vector<Field<Scalar>> LeafCalculus::leaf_fluxes(const Field<Scalar>& u) const {
  if (u.size() != mesh_->size()) throw DimensionMismatch("field size does not match mesh");
  std::vector<Field<Scalar>> out;
  out.reserve(mesh_->num_leaves());
  for (int l = 0; l < mesh_->num_leaves(); ++l) {
    out.push_back(leaves_[l].flux_rows.template cast<Scalar>() * gather(mesh_->leaf(l), u));
  }
  return out;
}

template <class Scalar>
Field<Scalar> LeafCalculus::apply_edge_averaged(const Field<Scalar>& u) const {
  if (mesh_->dim() != 1) {
    throw InvalidOperator("edge-averaged operator evaluation is only defined in 1D");
  }
  Field<Scalar> out = apply_interior(u);
  Eigen::VectorXi count = Eigen::VectorXi::Zero(mesh_->size());
  for (int l = 0; l < mesh_->num_leaves(); ++l) {
    const auto& leaf = mesh_->leaf(l);
    const Field<Scalar> v = leaves_[l].edge_op_rows.template cast<Scalar>() * gather(leaf, u);
    for (int r = 0; r < leaf.n_boundary(); ++r) {
      const int id = leaf.global[leaf.n_interior + r];
      if (count(id) == 0) out(id) = Scalar(0);
      out(id) += v(r);
      ++count(id);
    }
  }
  for (int id = 0; id < mesh_->size(); ++id) {
    if (count(id) > 1) out(id) /= static_cast<double>(count(id));
  }
  return out;
}

#define HPS_INSTANTIATE_LEAF(S)                                                                   \
  template Matrix<S> collocate_leaf<S>(const spectral::LeafStencil&, const ShiftedOperator<S>&,  \
                                       const Box&);                                              \
  template struct LeafOperators<S>;                                                              \
  template LeafOperators<S> build_leaf_operators<S>(const Matrix<S>&, const LeafInfo&,          \
                                                    const spectral::LeafStencil&, const Mesh&);  \
  template Field<S> gather<S>(const LeafInfo&, const Field<S>&);                                \
  template Field<S> LeafCalculus::apply_interior<S>(const Field<S>&) const;                     \
  template Field<S> LeafCalculus::dx_interior<S>(const Field<S>&) const;                        \
  template Field<S> LeafCalculus::dy_interior<S>(const Field<S>&) const;                        \
  template std::vector<Field<S>> LeafCalculus::leaf_fluxes<S>(const Field<S>&) const;           \
  template Field<S> LeafCalculus::apply_edge_averaged<S>(const Field<S>&) const;

HPS_INSTANTIATE_LEAF(double)
HPS_INSTANTIATE_LEAF(Complex)

#undef HPS_INSTANTIATE_LEAF

}  // namespace hps
