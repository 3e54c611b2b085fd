#include <cmath>

#include "doctest.h"
#include "hps/error.hpp"
#include "hps/leaf.hpp"

using namespace hps;

namespace {

struct OneLeaf {
  Mesh mesh;
  spectral::LeafStencil st;
  const LeafInfo& leaf() const { return mesh.leaf(0); }
};

OneLeaf one_leaf(int p, Box box = {-1, 1, -1, 1}) {
  OneLeaf o{Mesh::build(box, 1, 1, p, 2), {}};
  o.st = spectral::leaf_stencil(p, box.x1 - box.x0, box.y1 - box.y0, 2);
  return o;
}

// Full leaf-grid samples of fn.
template <class Fn>
Eigen::VectorXd grid_sample(const spectral::LeafStencil& st, const Box& b, Fn fn) {
  const auto x = spectral::cheb_nodes(st.p);
  Eigen::VectorXd v(st.p * st.p);
  for (int j = 0; j < st.p; ++j)
    for (int i = 0; i < st.p; ++i)
      v(j * st.p + i) = fn(b.x0 + 0.5 * (x[i] + 1) * (b.x1 - b.x0), b.y0 + 0.5 * (x[j] + 1) * (b.y1 - b.y0));
  return v;
}

template <class Fn>
Eigen::VectorXd local_sample(const OneLeaf& o, Fn fn) {
  const auto& leaf = o.leaf();
  Eigen::VectorXd v(leaf.n_active());
  for (int k = 0; k < leaf.n_active(); ++k) {
    const auto& n = o.mesh.node(leaf.global[k]);
    v(k) = fn(n.x, n.y);
  }
  return v;
}

}  // namespace

TEST_CASE("collocate_leaf: negative Laplacian of x^2+y^2") {
  auto o = one_leaf(7);
  ShiftedOperator<double> op{EllipticOperator::negative_laplacian(), 0.0, 1.0};
  const auto box = o.leaf().box;
  const Eigen::VectorXd r = collocate_leaf(o.st, op, box) * grid_sample(o.st, box, [](double x, double y) { return x * x + y * y; });
  for (int k = 0; k < o.leaf().n_interior; ++k) CHECK(r(o.leaf().grid[k]) == doctest::Approx(-4.0).epsilon(1e-11));
}

TEST_CASE("collocate_leaf: zeroth-order term and zero time step are identities") {
  auto o = one_leaf(6);
  const auto box = o.leaf().box;
  const Eigen::VectorXd u = grid_sample(o.st, box, [](double x, double y) { return std::cos(x * y) + x; });
  EllipticOperator c_only;
  c_only.c = [](double, double) { return 1.0; };
  CHECK((collocate_leaf(o.st, ShiftedOperator<double>{c_only, 0.0, 1.0}, box) * u - u).cwiseAbs().maxCoeff() < 1e-15);
  ShiftedOperator<double> stage{EllipticOperator::negative_laplacian(), 1.0, 0.0};
  CHECK((collocate_leaf(o.st, stage, box) * u - u).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("collocate_leaf: ellipticity spot check") {
  auto o = one_leaf(5);
  EllipticOperator bad = EllipticOperator::negative_laplacian();
  bad.c22 = [](double x, double) { return x; };
  CHECK_THROWS_AS(collocate_leaf(o.st, ShiftedOperator<double>{bad, 0.0, 1.0}, o.leaf().box), InvalidOperator);
}

TEST_CASE("build_leaf_operators: DtN of the Laplacian on affine and linear data") {
  auto o = one_leaf(9, {0.5, 1.5, -2.0, -1.0});
  const auto& leaf = o.leaf();
  ShiftedOperator<double> op{EllipticOperator::negative_laplacian(), 0.0, 1.0};
  const auto ops = build_leaf_operators(collocate_leaf(o.st, op, leaf.box), leaf, o.st, o.mesh);
  const Eigen::VectorXd u = local_sample(o, [](double x, double y) { return 0.3 + 2.0 * x - 5.0 * y; });
  const Eigen::VectorXd t = ops.dtn * u.tail(leaf.n_boundary());
  const Eigen::VectorXd ux = local_sample(o, [](double x, double) { return x; });
  const Eigen::VectorXd tx = ops.dtn * ux.tail(leaf.n_boundary());
  for (int r = 0; r < leaf.n_boundary(); ++r) {
    const bool vertical = o.mesh.node(leaf.global[leaf.n_interior + r]).dir == FluxDirection::X;
    CHECK(t(r) == doctest::Approx(vertical ? 2.0 : -5.0).epsilon(1e-11));
    CHECK(std::abs(tx(r) - (vertical ? 1.0 : 0.0)) < 1e-11);
  }
}

TEST_CASE("build_leaf_operators: harmonic polynomial reproduced, zero data gives zero") {
  auto o = one_leaf(10);
  const auto& leaf = o.leaf();
  ShiftedOperator<double> op{EllipticOperator::negative_laplacian(), 0.0, 1.0};
  const auto ops = build_leaf_operators(collocate_leaf(o.st, op, leaf.box), leaf, o.st, o.mesh);
  auto harmonic = [](double x, double y) { return x * x * x * x - 6 * x * x * y * y + y * y * y * y + x * y; };
  const Eigen::VectorXd u = local_sample(o, harmonic);
  const Eigen::VectorXd f = Eigen::VectorXd::Zero(leaf.n_interior);
  const Eigen::VectorXd ui = ops.interior(u.tail(leaf.n_boundary()), ops.particular(f));
  CHECK((ui - u.head(leaf.n_interior)).cwiseAbs().maxCoeff() < 1e-10);
  const Eigen::VectorXd zero = ops.interior(Eigen::VectorXd::Zero(leaf.n_boundary()), ops.particular(f));
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_leaf_operators: manufactured (I - Laplacian) solve and flux consistency") {
  auto o = one_leaf(16);
  const auto& leaf = o.leaf();
  EllipticOperator a = EllipticOperator::negative_laplacian();
  a.c = [](double, double) { return 1.0; };
  const auto ops = build_leaf_operators(collocate_leaf(o.st, ShiftedOperator<double>{a, 0.0, 1.0}, leaf.box), leaf, o.st, o.mesh);
  const Eigen::VectorXd u = local_sample(o, [](double x, double y) { return std::sin(x) * std::cos(y); });
  const Eigen::VectorXd f = 3.0 * u.head(leaf.n_interior);
  const Eigen::VectorXd g = u.tail(leaf.n_boundary());
  const Eigen::VectorXd y = ops.particular(f);
  const Eigen::VectorXd ui = ops.interior(g, y);
  CHECK((ui - u.head(leaf.n_interior)).cwiseAbs().maxCoeff() < 1e-9);

  Eigen::VectorXd full(leaf.n_active());
  full << ui, g;
  const Eigen::VectorXd direct = ops.flux(full);
  const Eigen::VectorXd via_dtn = ops.dtn * g + ops.particular_flux(y);
  CHECK((direct - via_dtn).cwiseAbs().maxCoeff() < 1e-11 * std::max(1.0, direct.cwiseAbs().maxCoeff()));
}

TEST_CASE("build_leaf_operators: linearity and complex shift") {
  auto o = one_leaf(8);
  const auto& leaf = o.leaf();
  ShiftedOperator<Complex> op{EllipticOperator::negative_laplacian(), Complex(1.0, 0.0), Complex(0.0, 0.05)};
  const auto ops = build_leaf_operators(collocate_leaf(o.st, op, leaf.box), leaf, o.st, o.mesh);
  const int nb = leaf.n_boundary(), ni = leaf.n_interior;
  const ComplexField g1 = ComplexField::Random(nb), g2 = ComplexField::Random(nb);
  const ComplexField f1 = ComplexField::Random(ni), f2 = ComplexField::Random(ni);
  const Complex a(0.7, -1.2), b(-2.0, 0.4);
  const ComplexField lhs = ops.interior(a * g1 + b * g2, ops.particular(a * f1 + b * f2));
  const ComplexField rhs = a * ops.interior(g1, ops.particular(f1)) + b * ops.interior(g2, ops.particular(f2));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * rhs.cwiseAbs().maxCoeff());

  // DtN consistency with the directional derivative of the zero-load solution
  const ComplexField ui = ops.interior(g1, ops.particular(ComplexField::Zero(ni)));
  ComplexField full(leaf.n_active());
  full << ui, g1;
  const ComplexField direct = ops.flux(full);
  CHECK((ops.dtn * g1 - direct).cwiseAbs().maxCoeff() < 1e-11 * direct.cwiseAbs().maxCoeff());
}

TEST_CASE("build_leaf_operators: error paths") {
  auto o = one_leaf(6);
  const auto& leaf = o.leaf();
  EllipticOperator zero;  // no terms at all: singular interior block
  CHECK_THROWS_AS(build_leaf_operators(collocate_leaf(o.st, ShiftedOperator<double>{zero, 0.0, 1.0}, leaf.box), leaf, o.st, o.mesh),
                  FactorizationError);
  EllipticOperator mixed = EllipticOperator::negative_laplacian();
  mixed.c12 = [](double, double) { return 0.25; };
  CHECK_THROWS_AS(build_leaf_operators(collocate_leaf(o.st, ShiftedOperator<double>{mixed, 0.0, 1.0}, leaf.box), leaf, o.st, o.mesh),
                  InvalidOperator);
}

TEST_CASE("build_leaf_operators: 1D leaf") {
  const auto mesh = Mesh::build({0, 2, 0, 0}, 1, 1, 12, 1);
  const auto st = spectral::leaf_stencil(12, 2.0, 1.0, 1);
  const auto& leaf = mesh.leaf(0);
  ShiftedOperator<double> op{EllipticOperator::negative_laplacian(), 0.0, 1.0};
  const auto ops = build_leaf_operators(collocate_leaf(st, op, leaf.box), leaf, st, mesh);
  CHECK(ops.n_boundary == 2);
  // u = x(2-x): -u'' = 2, u(0)=u(2)=0, u'(0)=2, u'(2)=-2
  const Eigen::VectorXd f = Eigen::VectorXd::Constant(ops.n_interior, 2.0);
  const Eigen::VectorXd y = ops.particular(f);
  const Eigen::VectorXd h = ops.particular_flux(y);
  CHECK(h(0) == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(h(1) == doctest::Approx(-2.0).epsilon(1e-11));
}

TEST_CASE("LeafCalculus: interior evaluation and fluxes") {
  const auto mesh = Mesh::build({0, 2, 0, 1}, 2, 1, 9, 2);
  LeafCalculus calc(mesh, EllipticOperator::negative_laplacian());
  const RealField u = mesh.sample<double>([](double x, double y) { return x * x * y + y * y; });
  const RealField au = calc.apply_interior(u);
  const RealField dx = calc.dx_interior(u);
  for (int id = 0; id < mesh.size(); ++id) {
    const auto& n = mesh.node(id);
    if (n.cls != NodeClass::Interior) {
      CHECK(au(id) == 0.0);
      continue;
    }
    CHECK(au(id) == doctest::Approx(-(2 * n.y + 2)).epsilon(1e-10));
    CHECK(dx(id) == doctest::Approx(2 * n.x * n.y).epsilon(1e-10));
  }
  const auto fluxes = calc.leaf_fluxes(u);
  for (int l = 0; l < 2; ++l) {
    const auto& leaf = mesh.leaf(l);
    for (int r = 0; r < leaf.n_boundary(); ++r) {
      const auto& n = mesh.node(leaf.global[leaf.n_interior + r]);
      const double expect = n.dir == FluxDirection::X ? 2 * n.x * n.y : n.x * n.x + 2 * n.y;
      CHECK(fluxes[l](r) == doctest::Approx(expect).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(calc.apply_edge_averaged(u), InvalidOperator);
}
