#include <cmath>

#include "doctest.h"
#include "hps/error.hpp"
#include "hps/oracle.hpp"
#include "hps/solver.hpp"

using namespace hps;

namespace {

template <class Scalar>
double rel_max(const Field<Scalar>& a, const Field<Scalar>& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
}

// Boundary (Gamma) entries of u, zero elsewhere.
template <class Scalar>
Field<Scalar> gamma_only(const Mesh& m, const Field<Scalar>& u) {
  Field<Scalar> d = Field<Scalar>::Zero(m.size());
  for (int id : m.gamma()) d(id) = u(id);
  return d;
}

EllipticOperator reaction_operator() {
  EllipticOperator a = EllipticOperator::negative_laplacian();
  a.c = [](double x, double y) { return 1.0 + 0.5 * std::sin(3 * x) + 0.25 * y * y; };
  return a;
}

// Max over interface nodes of |flux from owner 0 - flux from owner 1|.
double interface_jump(const Mesh& m, const RealField& u) {
  LeafCalculus calc(m, EllipticOperator::negative_laplacian());
  const auto fl = calc.leaf_fluxes(u);
  std::vector<double> first(m.size(), NAN);
  double worst = 0.0;
  for (int l = 0; l < m.num_leaves(); ++l) {
    const auto& leaf = m.leaf(l);
    for (int r = 0; r < leaf.n_boundary(); ++r) {
      const int id = leaf.global[leaf.n_interior + r];
      if (m.node(id).cls != NodeClass::Interface) continue;
      if (std::isnan(first[id])) {
        first[id] = fl[l](r);
      } else {
        worst = std::max(worst, std::abs(first[id] - fl[l](r)));
      }
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("hps: single leaf factorization equals the leaf solve") {
  const auto mesh = Mesh::build({-1, 1, -1, 1}, 1, 1, 9, 2);
  ShiftedOperator<double> op{reaction_operator(), 0.0, 1.0};
  const auto fact = HpsFactorization<double>::build(mesh, op);
  CHECK(fact.num_tree_nodes() == 1);
  const RealField load = mesh.sample<double>([](double x, double y) { return x * y + 1; });
  const RealField g = mesh.sample<double>([](double x, double y) { return std::cos(x + y); });
  const RealField u = solve_dirichlet(fact, load, g);
  const auto& ops = fact.leaf_operators(0);
  const auto& leaf = mesh.leaf(0);
  const RealField ui = ops.interior(gather(leaf, g).tail(leaf.n_boundary()), ops.particular(gather(leaf, load).head(leaf.n_interior)));
  for (int r = 0; r < leaf.n_interior; ++r) CHECK(u(leaf.global[r]) == ui(r));
}

TEST_CASE("hps: two-leaf 1D Laplacian interface system is the DtN difference") {
  const auto mesh = Mesh::build({0, 2, 0, 0}, 2, 1, 3, 1);
  const auto fact = HpsFactorization<double>::build(mesh, {EllipticOperator::negative_laplacian(), 0.0, 1.0});
  REQUIRE(fact.num_tree_nodes() == 3);
  // Leaf DtN with p=3, h=1 is [[-1, 1], [-1, 1]]: T^a_EE - T^b_WW = 1 - (-1) = 2.
  const auto& t = fact.leaf_operators(0).dtn;
  CHECK(t(0, 0) == doctest::Approx(-1.0));
  CHECK(t(1, 1) == doctest::Approx(1.0));
  const auto& merge = fact.merge(fact.root());
  const RealMatrix system = merge.interface_lu.reconstructedMatrix();
  REQUIRE(system.rows() == 1);
  CHECK(system(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("hps: root DtN matches one-sided derivatives of the global solve") {
  const auto mesh = Mesh::build({0, 1, 0, 1}, 4, 4, 8, 2);
  ShiftedOperator<double> op{EllipticOperator::negative_laplacian(0.01), 1.0, 1.0};
  const auto fact = HpsFactorization<double>::build(mesh, op);
  const RealField g = mesh.sample<double>([](double x, double) { return x; });
  const RealField u = solve_dirichlet(fact, RealField(RealField::Zero(mesh.size())), g);

  LeafCalculus calc(mesh, op.op);
  const auto fl = calc.leaf_fluxes(u);
  RealField one_sided = RealField::Zero(mesh.size());
  for (int l = 0; l < mesh.num_leaves(); ++l) {
    const auto& leaf = mesh.leaf(l);
    for (int r = 0; r < leaf.n_boundary(); ++r) one_sided(leaf.global[leaf.n_interior + r]) = fl[l](r);
  }
  const auto& ids = fact.root_boundary();
  RealField groot(ids.size());
  for (size_t k = 0; k < ids.size(); ++k) groot(k) = g(ids[k]);
  const RealField t = fact.root_dtn() * groot;
  double worst = 0.0, scale = 0.0;
  for (size_t k = 0; k < ids.size(); ++k) {
    worst = std::max(worst, std::abs(t(k) - one_sided(ids[k])));
    scale = std::max(scale, std::abs(one_sided(ids[k])));
  }
  CHECK(worst < 1e-9 * scale);
}

TEST_CASE("hps: manufactured harmonic solution of (I - Laplacian) u = u") {
  const auto mesh = Mesh::build({0, 1, 0, 1}, 4, 4, 12, 2);
  EllipticOperator a = EllipticOperator::negative_laplacian();
  a.c = [](double, double) { return 1.0; };
  const auto fact = HpsFactorization<double>::build(mesh, {a, 0.0, 1.0});
  const RealField exact = mesh.sample<double>([](double x, double y) { return std::exp(x) * std::sin(y); });
  const RealField u = solve_dirichlet(fact, exact, gamma_only(mesh, exact));
  CHECK((u - exact).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(interface_jump(mesh, u) < 1e-9 * u.cwiseAbs().maxCoeff());
  const RealField zero = solve_dirichlet(fact, RealField(RealField::Zero(mesh.size())), RealField(RealField::Zero(mesh.size())));
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hps: agreement with the dense oracle, variable reaction, 3x2 p=7") {
  const auto mesh = Mesh::build({0, 1.5, 0, 1}, 3, 2, 7, 2);
  ShiftedOperator<double> op{reaction_operator(), 0.0, 1.0};
  const auto fact = HpsFactorization<double>::build(mesh, op);
  const RealField load = mesh.sample<double>([](double x, double y) { return std::sin(2 * x) * y + 1; });
  const RealField g = mesh.sample<double>([](double x, double y) { return x * x - y; });
  const RealField u = solve_dirichlet(fact, load, g);
  const RealField ref = oracle::oracle_solve(oracle::assemble_global(mesh, op), load, g);
  CHECK(rel_max(u, ref) < 1e-10);
}

TEST_CASE("hps: oracle equivalence sweep, real and complex") {
  for (auto [n1, n2] : {std::pair{1, 1}, {2, 1}, {1, 3}, {2, 2}, {3, 2}, {4, 4}}) {
    for (int p : {4, 6, 9}) {
      if (n1 * n2 == 16 && p > 6) continue;
      const auto mesh = Mesh::build({-1, 1, 0, 2}, n1, n2, p, 2);
      const ComplexField load = mesh.sample<Complex>([](double x, double y) { return Complex(x * y, std::cos(y)); });
      const ComplexField g = mesh.sample<Complex>([](double x, double y) { return Complex(std::exp(x), y); });
      ShiftedOperator<Complex> op{EllipticOperator::negative_laplacian(), 1.0, Complex(0.0, 0.03)};
      const auto fact = HpsFactorization<Complex>::build(mesh, op);
      const ComplexField ref = oracle::oracle_solve(oracle::assemble_global(mesh, op), load, g);
      CAPTURE(n1);
      CAPTURE(n2);
      CAPTURE(p);
      CHECK(rel_max(solve_dirichlet(fact, load, g), ref) < 1e-9);

      ShiftedOperator<double> rop{reaction_operator(), 0.0, 1.0};
      const auto rfact = HpsFactorization<double>::build(mesh, rop);
      const RealField rload = load.real(), rg = g.real();
      CHECK(rel_max(solve_dirichlet(rfact, rload, rg), oracle::oracle_solve(oracle::assemble_global(mesh, rop), rload, rg)) < 1e-9);
    }
  }
}

TEST_CASE("hps: reuse contract and thread-count independence") {
  const auto mesh = Mesh::build({0, 1, 0, 1}, 3, 4, 7, 2);
  ShiftedOperator<double> op{reaction_operator(), 1.0, 0.1};
  const auto fact = HpsFactorization<double>::build(mesh, op);
  const RealField f1 = RealField::Random(mesh.size()), f2 = RealField::Random(mesh.size());
  const RealField g = RealField::Random(mesh.size());
  const RealField a1 = solve_dirichlet(fact, f1, g);
  const RealField a2 = solve_dirichlet(fact, f2, g);
  const RealField b2 = solve_dirichlet(HpsFactorization<double>::build(mesh, op, 3), f2, g);
  const RealField b1 = solve_dirichlet(HpsFactorization<double>::build(mesh, op), f1, g);
  CHECK(rel_max(a1, b1) < 1e-13);
  CHECK(rel_max(a2, b2) < 1e-13);
}

TEST_CASE("hps: 1D solve matches the exact solution of a two-point problem") {
  const auto mesh = Mesh::build({0, 2, 0, 0}, 5, 1, 10, 1);
  const auto fact = HpsFactorization<double>::build(mesh, {EllipticOperator::negative_laplacian(), 0.0, 1.0});
  // -u'' = pi^2/4 sin(pi x / 2), u(0) = 0, u(2) = 0
  const double k = std::acos(-1.0) / 2;
  const RealField exact = mesh.sample<double>([k](double x, double) { return std::sin(k * x); });
  const RealField u = solve_dirichlet(fact, RealField(k * k * exact), gamma_only(mesh, exact));
  CHECK((u - exact).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("hps: slope-corrected solve") {
  const auto mesh = Mesh::build({0, 2, 0, 0}, 2, 1, 10, 1);
  const auto fact = HpsFactorization<double>::build(mesh, {EllipticOperator::negative_laplacian(), 1.0, 0.05});
  const RealField load = mesh.sample<double>([](double x, double) { return std::cos(x); });
  const RealField g = RealField::Zero(mesh.size());
  const double dt = 0.1;

  SUBCASE("no jump in the previous field reproduces the standard merge") {
    const RealField smooth = mesh.sample<double>([](double x, double) { return x * x * x - x; });
    SolveRequest<double> req{load, g, SolveMode::SlopeCorrected, &smooth, dt};
    CHECK((fact.solve(req) - solve_dirichlet(fact, load, g)).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("correction cancels the previous field's derivative jump") {
    const RealField kink = mesh.sample<double>([](double x, double) { return 1 - std::abs(x - 1); });
    SolveRequest<double> req{load, g, SolveMode::SlopeCorrected, &kink, dt};
    const RealField k = fact.solve(req);
    CHECK(interface_jump(mesh, kink) == doctest::Approx(2.0));
    CHECK(interface_jump(mesh, RealField(kink + dt * k)) < 1e-10);
  }

  SUBCASE("merge formula is linear in the jump") {
    const auto& m = fact.merge(fact.root());
    const RealField parent = RealField::Zero(2);
    const RealField h = RealField::Zero(1);
    const RealField j1 = RealField::Constant(1, 0.75);
    const RealField base = m.interface_values(parent, h, h);
    const RealField once = m.interface_values(parent, h, h, j1, RealField::Zero(1), dt) - base;
    const RealField twice = m.interface_values(parent, h, h, RealField(2 * j1), RealField::Zero(1), dt) - base;
    CHECK(twice(0) == doctest::Approx(2 * once(0)).epsilon(1e-14));
    CHECK(once(0) != 0.0);
  }

  SUBCASE("request validation") {
    SolveRequest<double> bad{load, g, SolveMode::SlopeCorrected, nullptr, dt};
    CHECK_THROWS_AS(fact.solve(bad), DimensionMismatch);
    const RealField smooth = RealField::Zero(mesh.size());
    SolveRequest<double> no_dt{load, g, SolveMode::SlopeCorrected, &smooth, 0.0};
    CHECK_THROWS_AS(fact.solve(no_dt), Error);
    SolveRequest<double> wrong{RealField::Zero(3), g};
    CHECK_THROWS_AS(fact.solve(wrong), DimensionMismatch);
  }
}
