#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "hps/leaf.hpp"
#include "hps/mesh.hpp"
#include "hps/timestep.hpp"
#include "hps/types.hpp"

namespace hps {

/// Pointwise function of (x, y, t, component).
template <class Scalar>
using PointFn = std::function<Scalar(double x, double y, double t, int component)>;

/// F2 evaluated with per-leaf spectral derivatives; values at leaf-interior
/// nodes are used.
template <class Scalar>
using ExplicitFn = std::function<State<Scalar>(const LeafCalculus& calc, double t, const State<Scalar>& u)>;

/// Mesh-independent description of one experiment:
///   u_t = -A u / kappa + s(x, t) + F2(t, u),  u = g on Gamma.
template <class Scalar>
struct ProblemSpec {
  std::string name;
  int dim = 2;
  Box domain;
  int components = 1;
  EllipticOperator op;
  PointFn<Scalar> initial;
  PointFn<Scalar> source;         // optional
  PointFn<Scalar> boundary;       // g
  PointFn<Scalar> boundary_rate;  // g_t
  PointFn<Scalar> exact;          // optional
  PointFn<Scalar> exact_rate;     // optional, d/dt of exact
  ExplicitFn<Scalar> explicit_rhs;  // optional
  double final_time = 1.0;

  // suggested discretization
  int n1 = 8, n2 = 8, p = 16, q = 3;
  double dt = 0.01;
  Formulation formulation = Formulation::Slopes;
};

/// u_t = u_xx - sin t on [0, 2], exact u = cos t.
ProblemSpec<double> heat_1d_cos();
/// u_t = u_xx on [0, 2], u0 = 1 - |x - 1|, zero Dirichlet data, two leaves.
ProblemSpec<double> heat_1d_kink();
/// i u_t = -u_xx/2 - u_yy/2 + (x^2 + y^2) u / 2 on [-8, 8]^2, ground state.
ProblemSpec<Complex> schrodinger_harmonic();
/// i u_t = -Laplacian u / 2 + V u, V = 1 - exp(-(x + 0.9y)^4) on [-6, 6]^2,
/// u0 = 3 sin x sin y exp(-(x^2 + y^2)), zero Dirichlet data.
ProblemSpec<Complex> schrodinger_asymmetric();
/// u_t + u . grad u = eps Laplacian u on [-pi, pi]^2, u0 = 5 (-y, x) exp(-3 r^2),
/// no-slip walls.
ProblemSpec<double> burgers_rotating(double epsilon = 0.005);
/// Cross-stream shear initial data with boundary values frozen at u0.
ProblemSpec<double> burgers_cross_stream(double epsilon = 0.025);

/// Mesh for the problem with the given leaf counts and order.
template <class Scalar>
Mesh make_mesh(const ProblemSpec<Scalar>& spec, int n1, int n2, int p);

/// Evaluate a pointwise function on every mesh node for every component.
template <class Scalar>
State<Scalar> sample(const Mesh& mesh, const PointFn<Scalar>& fn, double t, int components);

/// Bind the problem to a mesh. The mesh must outlive the returned system.
template <class Scalar>
EvolutionSystem<Scalar> make_system(const ProblemSpec<Scalar>& spec, const Mesh& mesh);

/// Max over leaf-interior nodes of |u_t - (G u + s + F2(u))| for the exact
/// solution at time t, and max over Gamma of |u - g|, |u_t - g_t|.
template <class Scalar>
double exact_residual(const ProblemSpec<Scalar>& spec, const Mesh& mesh, double t);

/// -(u u_x + v u_y, u v_x + v v_y) at leaf-interior nodes.
State<double> burgers_advection(const LeafCalculus& calc, const State<double>& u);

/// dv/dx - du/dy and du/dx + dv/dy at leaf-interior nodes.
RealField vorticity(const LeafCalculus& calc, const State<double>& u);
RealField dilatation(const LeafCalculus& calc, const State<double>& u);

}  // namespace hps
