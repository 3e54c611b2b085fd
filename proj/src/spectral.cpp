#include "hps/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hps/error.hpp"

namespace hps::spectral {

std::vector<double> cheb_nodes(int p) {
  if (p < 2) {
    throw InvalidOrder("Chebyshev order must be at least 2, got " + std::to_string(p));
  }
  const int n = p - 1;
  std::vector<double> x(p);
  // sin form keeps the set exactly symmetric about 0
  for (int j = 0; j < p; ++j) {
    x[j] = std::sin(std::numbers::pi * (2.0 * j - n) / (2.0 * n));
  }
  x.front() = -1.0;
  x.back() = 1.0;
  return x;
}

RealMatrix cheb_diff_matrix(int p) {
  const auto x = cheb_nodes(p);
  const int n = p - 1;
  RealMatrix D = RealMatrix::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    const double ci = (i == 0 || i == n) ? 2.0 : 1.0;
    for (int j = 0; j < p; ++j) {
      if (i == j) continue;
      const double cj = (j == 0 || j == n) ? 2.0 : 1.0;
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      D(i, j) = ci / cj * sign / (x[i] - x[j]);
    }
  }
  for (int i = 0; i < p; ++i) {
    double sum = 0.0;
    for (int j = 0; j < p; ++j) {
      if (j != i) sum += D(i, j);
    }
    D(i, i) = -sum;
  }
  return D;
}

std::vector<double> cheb_barycentric_weights(int p) {
  if (p < 2) {
    throw InvalidOrder("Chebyshev order must be at least 2, got " + std::to_string(p));
  }
  const int n = p - 1;
  std::vector<double> w(p);
  for (int j = 0; j < p; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    w[j] = sign * ((j == 0 || j == n) ? 0.5 : 1.0);
  }
  return w;
}

Eigen::RowVectorXd cheb_interp_row(int p, double x) {
  const auto nodes = cheb_nodes(p);
  const auto w = cheb_barycentric_weights(p);
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(p);
  for (int j = 0; j < p; ++j) {
    if (x == nodes[j]) {
      row(j) = 1.0;
      return row;
    }
  }
  double denom = 0.0;
  for (int j = 0; j < p; ++j) {
    row(j) = w[j] / (x - nodes[j]);
    denom += row(j);
  }
  return row / denom;
}

ChebGrid1D ChebGrid1D::make(int p) {
  ChebGrid1D g;
  g.p = p;
  g.nodes = cheb_nodes(p);
  g.D = cheb_diff_matrix(p);
  return g;
}

LeafStencil leaf_stencil(int p, double hx, double hy, int dim) {
  if (!(hx > 0.0) || (dim == 2 && !(hy > 0.0))) {
    throw InvalidGeometry("leaf size must be positive");
  }
  if (dim != 1 && dim != 2) {
    throw InvalidGeometry("dimension must be 1 or 2, got " + std::to_string(dim));
  }
  const RealMatrix D = cheb_diff_matrix(p);
  LeafStencil s;
  s.p = p;
  s.dim = dim;
  s.hx = hx;
  s.hy = dim == 2 ? hy : 0.0;
  if (dim == 1) {
    s.Dx = (2.0 / hx) * D;
    s.Dxx = s.Dx * s.Dx;
    return s;
  }
  const int n = p * p;
  s.Dx = RealMatrix::Zero(n, n);
  s.Dy = RealMatrix::Zero(n, n);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < p; ++i) {
      const int row = j * p + i;
      for (int k = 0; k < p; ++k) {
        s.Dx(row, j * p + k) = (2.0 / hx) * D(i, k);
        s.Dy(row, k * p + i) = (2.0 / hy) * D(j, k);
      }
    }
  }
  s.Dxx = s.Dx * s.Dx;
  s.Dyy = s.Dy * s.Dy;
  s.Dxy = s.Dx * s.Dy;
  return s;
}

}  // namespace hps::spectral
