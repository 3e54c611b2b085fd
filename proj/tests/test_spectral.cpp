#include <cmath>

#include "doctest.h"
#include "hps/error.hpp"
#include "hps/spectral.hpp"

using namespace hps;
using namespace hps::spectral;

namespace {

Eigen::VectorXd sample(const std::vector<double>& x, auto fn) {
  Eigen::VectorXd v(x.size());
  for (size_t i = 0; i < x.size(); ++i) v(i) = fn(x[i]);
  return v;
}

}  // namespace

TEST_CASE("cheb_nodes: small orders") {
  CHECK(cheb_nodes(2) == std::vector<double>{-1.0, 1.0});
  const auto x3 = cheb_nodes(3);
  CHECK(x3[0] == -1.0);
  CHECK(x3[1] == 0.0);
  CHECK(x3[2] == 1.0);
  const auto x5 = cheb_nodes(5);
  const double r = std::sqrt(2.0) / 2.0;
  CHECK(x5[0] == -1.0);
  CHECK(x5[1] == doctest::Approx(-r).epsilon(1e-15));
  CHECK(x5[2] == 0.0);
  CHECK(x5[3] == doctest::Approx(r).epsilon(1e-15));
  CHECK(x5[4] == 1.0);
  CHECK_THROWS_AS(cheb_nodes(1), InvalidOrder);
  CHECK_THROWS_AS(cheb_diff_matrix(0), InvalidOrder);
}

TEST_CASE("cheb_nodes: distinct, ascending, endpoints included") {
  for (int p = 2; p <= 24; ++p) {
    const auto x = cheb_nodes(p);
    CHECK(x.front() == -1.0);
    CHECK(x.back() == 1.0);
    for (int i = 1; i < p; ++i) CHECK(x[i] > x[i - 1]);
  }
}

TEST_CASE("cheb_diff_matrix: constant, linear and x^4") {
  for (int p = 2; p <= 20; ++p) {
    const RealMatrix D = cheb_diff_matrix(p);
    CHECK((D * Eigen::VectorXd::Ones(p)).cwiseAbs().maxCoeff() < 1e-13);
    const auto x = cheb_nodes(p);
    const Eigen::VectorXd dx = D * sample(x, [](double t) { return t; });
    CHECK((dx.array() - 1.0).abs().maxCoeff() < 1e-12);
  }
  const auto x = cheb_nodes(7);
  const Eigen::VectorXd d = cheb_diff_matrix(7) * sample(x, [](double t) { return std::pow(t, 4); });
  const Eigen::VectorXd exact = sample(x, [](double t) { return 4.0 * t * t * t; });
  CHECK((d - exact).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cheb_diff_matrix: polynomial exactness for all degrees below p") {
  for (int p = 2; p <= 20; ++p) {
    const RealMatrix D = cheb_diff_matrix(p);
    const double norm = D.cwiseAbs().rowwise().sum().maxCoeff();
    const auto x = cheb_nodes(p);
    for (int k = 1; k < p; ++k) {
      const Eigen::VectorXd d = D * sample(x, [k](double t) { return std::pow(t, k); });
      const Eigen::VectorXd exact = sample(x, [k](double t) { return k * std::pow(t, k - 1); });
      CHECK((d - exact).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, norm));
    }
  }
}

TEST_CASE("cheb_diff_matrix: spectral accuracy on exp") {
  const auto x = cheb_nodes(16);
  const Eigen::VectorXd u = sample(x, [](double t) { return std::exp(t); });
  CHECK((cheb_diff_matrix(16) * u - u).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cheb_interp_row reproduces polynomials") {
  const int p = 9;
  const auto x = cheb_nodes(p);
  const Eigen::VectorXd u = sample(x, [](double t) { return 3 * std::pow(t, 7) - t + 2; });
  for (double t : {-1.0, -0.37, 0.0, 0.5, 0.999, 1.0}) {
    CHECK(cheb_interp_row(p, t).dot(u) == doctest::Approx(3 * std::pow(t, 7) - t + 2).epsilon(1e-13));
  }
}

TEST_CASE("leaf_stencil: 1D reference interval is identity scaling") {
  const auto s = leaf_stencil(3, 2.0, 2.0, 1);
  CHECK((s.Dx - cheb_diff_matrix(3)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(leaf_stencil(4, 0.0, 1.0, 2), InvalidGeometry);
  CHECK_THROWS_AS(leaf_stencil(4, 1.0, -1.0, 2), InvalidGeometry);
}

TEST_CASE("leaf_stencil: 2D constants, mixed derivative, Kronecker structure") {
  const int p = 8;
  const auto s = leaf_stencil(p, 2.0, 2.0, 2);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(p * p);
  for (const RealMatrix* m : {&s.Dx, &s.Dy, &s.Dxx, &s.Dyy, &s.Dxy}) {
    CHECK((*m * one).cwiseAbs().maxCoeff() < 1e-11);
  }
  const auto x = cheb_nodes(p);
  Eigen::VectorXd u(p * p), expect(p * p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < p; ++i) {
      u(j * p + i) = x[i] * x[i] * x[j];
      expect(j * p + i) = 2.0 * x[i];
    }
  CHECK((s.Dxy * u - expect).cwiseAbs().maxCoeff() < 1e-11);
  CHECK((s.Dx * s.Dy - s.Dy * s.Dx).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((s.Dxx - s.Dx * s.Dx).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("leaf_stencil: halving h doubles Dx and quadruples Dxx") {
  const auto a = leaf_stencil(6, 1.0, 1.0, 2);
  const auto b = leaf_stencil(6, 0.5, 0.5, 2);
  CHECK((b.Dx - 2.0 * a.Dx).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((b.Dxx - 4.0 * a.Dxx).cwiseAbs().maxCoeff() < 1e-9 * a.Dxx.cwiseAbs().maxCoeff());
}
