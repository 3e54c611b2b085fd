#pragma once

#include <vector>

#include "hps/types.hpp"

namespace hps::spectral {

/// Chebyshev extreme points cos(j*pi/(p-1)) on [-1, 1], returned ascending.
/// Throws InvalidOrder for p < 2.
std::vector<double> cheb_nodes(int p);

/// First-derivative collocation matrix on cheb_nodes(p). Exact for
/// polynomials of degree < p; diagonal from the negative-sum identity.
RealMatrix cheb_diff_matrix(int p);

/// Barycentric weights matching cheb_nodes(p).
std::vector<double> cheb_barycentric_weights(int p);

/// Row vector r with r * values = interpolant at x (x in [-1, 1]).
Eigen::RowVectorXd cheb_interp_row(int p, double x);

struct ChebGrid1D {
  int p = 0;
  std::vector<double> nodes;
  RealMatrix D;

  static ChebGrid1D make(int p);
};

/// Derivative matrices on one leaf. In 2D the grid index is j*p + i with i
/// running along x (y-outer, x-inner); the matrices are p^2 x p^2 and include
/// corner points. In 1D only Dx and Dxx are populated (p x p).
struct LeafStencil {
  int p = 0;
  int dim = 2;
  double hx = 0.0;
  double hy = 0.0;
  RealMatrix Dx, Dy, Dxx, Dyy, Dxy;

  int grid_size() const { return dim == 1 ? p : p * p; }
};

/// Chain-rule scaled tensor-product stencil for a leaf of size hx x hy.
LeafStencil leaf_stencil(int p, double hx, double hy, int dim);

}  // namespace hps::spectral
