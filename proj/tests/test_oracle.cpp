#include <cmath>

#include "doctest.h"
#include "hps/error.hpp"
#include "hps/oracle.hpp"

using namespace hps;

TEST_CASE("oracle: single-leaf interior rows are the leaf stencil rows") {
  const int p = 4;
  const auto mesh = Mesh::build({-1, 1, -1, 1}, 1, 1, p, 2);
  ShiftedOperator<double> op{EllipticOperator::negative_laplacian(), 0.0, 1.0};
  const auto sys = oracle::assemble_global(mesh, op);
  const auto st = spectral::leaf_stencil(p, 2.0, 2.0, 2);
  const RealMatrix leaf = collocate_leaf(st, op, mesh.leaf(0).box);
  const auto& info = mesh.leaf(0);
  for (int r = 0; r < info.n_interior; ++r)
    for (int c = 0; c < info.n_active(); ++c)
      CHECK(sys.matrix(info.global[r], info.global[c]) == doctest::Approx(leaf(info.grid[r], info.grid[c])).epsilon(1e-13));
}

TEST_CASE("oracle: polynomial residuals and smooth interface rows") {
  const auto mesh = Mesh::build({0, 2, 0, 1}, 2, 2, 8, 2);
  EllipticOperator a = EllipticOperator::negative_laplacian();
  a.c = [](double x, double) { return 2.0 + x; };
  ShiftedOperator<double> op{a, 0.0, 1.0};
  const auto sys = oracle::assemble_global(mesh, op);
  auto u = [](double x, double y) { return x * x * x * y - y * y + 1.0; };
  auto au = [](double x, double y) { return -(6 * x * y - 2.0) + (2.0 + x) * (x * x * x * y - y * y + 1.0); };
  const RealField r = sys.matrix * mesh.sample<double>(u);
  for (int id = 0; id < mesh.size(); ++id) {
    const auto& n = mesh.node(id);
    if (n.cls == NodeClass::Interior) CHECK(std::abs(r(id) - au(n.x, n.y)) < 1e-11);
    if (n.cls == NodeClass::Interface) CHECK(std::abs(r(id)) < 1e-10);
  }
  const auto fine = Mesh::build({0, 2, 0, 1}, 2, 2, 16, 2);
  const auto fine_sys = oracle::assemble_global(fine, op);
  const RealField smooth = fine_sys.matrix * fine.sample<double>([](double x, double y) { return std::sin(x) * std::cosh(y); });
  for (int id = 0; id < fine.size(); ++id)
    if (fine.node(id).cls == NodeClass::Interface) CHECK(std::abs(smooth(id)) < 1e-10);
}

TEST_CASE("oracle: boundary rows hold outward normal derivatives") {
  const auto mesh = Mesh::build({0, 1, 0, 1}, 2, 1, 6, 2);
  const auto sys = oracle::assemble_global(mesh, ShiftedOperator<double>{EllipticOperator::negative_laplacian(), 0.0, 1.0});
  const RealField r = sys.matrix * mesh.sample<double>([](double x, double y) { return 3 * x + 2 * y; });
  for (int id : mesh.gamma()) {
    const auto& n = mesh.node(id);
    CHECK(r(id) == doctest::Approx(n.outward * (n.dir == FluxDirection::X ? 3.0 : 2.0)).epsilon(1e-11));
  }
}

TEST_CASE("oracle: manufactured solution and zero data") {
  const auto mesh = Mesh::build({0, 1, 0, 1}, 2, 2, 8, 2);
  EllipticOperator a = EllipticOperator::negative_laplacian();
  a.c = [](double, double) { return 1.0; };
  const auto sys = oracle::assemble_global(mesh, ShiftedOperator<double>{a, 0.0, 1.0});
  // u = cos(x) e^{y/2}: -u_xx - u_yy + u = (1 - 1/4 + 1) u
  const RealField exact = mesh.sample<double>([](double x, double y) { return std::cos(x) * std::exp(0.5 * y); });
  CHECK((oracle::oracle_solve(sys, RealField(1.75 * exact), exact) - exact).cwiseAbs().maxCoeff() < 1e-10);
  const RealField zero = RealField::Zero(mesh.size());
  CHECK(oracle::oracle_solve(sys, zero, zero).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("oracle: size guard") {
  const auto mesh = Mesh::build({0, 1, 0, 1}, 8, 8, 10, 2);
  REQUIRE(mesh.size() > oracle::kMaxOracleNodes);
  CHECK_THROWS_AS(oracle::assemble_global(mesh, ShiftedOperator<double>{EllipticOperator::negative_laplacian(), 0.0, 1.0}), Error);
}
