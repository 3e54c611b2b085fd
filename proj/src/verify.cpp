#include "hps/verify.hpp"

#include <cmath>
#include <cstdio>

#include "hps/oracle.hpp"
#include "hps/solver.hpp"
#include "hps/tableau.hpp"
#include "hps/timestep.hpp"

namespace hps {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

template <class Scalar>
double relative_gap(const Mesh& mesh, const ShiftedOperator<Scalar>& op) {
  const Field<Scalar> load = mesh.sample<Scalar>([](double x, double y) { return std::sin(2 * x) * y + 1.0; });
  const Field<Scalar> g = mesh.sample<Scalar>([](double x, double y) { return std::exp(x) * std::cos(y) + x * y; });
  const auto fact = HpsFactorization<Scalar>::build(mesh, op);
  const Field<Scalar> u = solve_dirichlet(fact, load, g);
  const Field<Scalar> ref = oracle::oracle_solve(oracle::assemble_global(mesh, op), load, g);
  return (u - ref).cwiseAbs().template maxCoeff<Eigen::PropagateNaN>() / ref.cwiseAbs().maxCoeff();
}

}  // namespace

std::vector<CheckResult> oracle_equivalence_checks(double tolerance) {
  EllipticOperator shifted = EllipticOperator::negative_laplacian();
  shifted.c = [](double, double) { return 1.0; };
  EllipticOperator reaction = EllipticOperator::negative_laplacian();
  reaction.c = [](double x, double y) { return 1.0 + 0.5 * std::sin(3 * x) + 0.25 * y * y; };
  const Complex dtgamma(0.02, 0.05);

  double worst[3] = {0, 0, 0};
  for (auto [n1, n2] : {std::pair{1, 1}, {2, 1}, {2, 2}, {3, 2}})
    for (int p : {5, 7, 9}) {
      const auto mesh = Mesh::build({-1, 1, 0, 1.5}, n1, n2, p, 2);
      worst[0] = std::max(worst[0], relative_gap(mesh, ShiftedOperator<double>{shifted, 0.0, 1.0}));
      worst[1] = std::max(worst[1], relative_gap(mesh, ShiftedOperator<Complex>{EllipticOperator::negative_laplacian(),
                                                                              1.0, dtgamma}));
      worst[2] = std::max(worst[2], relative_gap(mesh, ShiftedOperator<double>{reaction, 0.0, 1.0}));
    }
  const char* names[3] = {"-Laplacian + I", "I - dt*gamma*Laplacian, complex dt*gamma", "variable reaction"};
  std::vector<CheckResult> out;
  for (int k = 0; k < 3; ++k)
    out.push_back({std::string("oracle equivalence: ") + names[k], worst[k] <= tolerance,
                   "max relative gap " + sci(worst[k]) + " over 12 meshes"});
  return out;
}

std::vector<CheckResult> tableau_checks() {
  std::vector<CheckResult> out;
  // one-leaf 1D mesh whose single interior node is decoupled from the boundary
  const auto mesh = Mesh::build({0, 1, 0, 1}, 1, 1, 3, 1);
  int interior = 0;
  for (int id = 0; id < mesh.size(); ++id)
    if (mesh.node(id).cls == NodeClass::Interior) interior = id;

  for (int q : {3, 4, 5}) {
    const auto t = load_tableau(q);
    const std::string tag = "ARK order " + std::to_string(q) + ": ";
    const double oc = std::max({order_condition_residual(t.A, t.b, q), order_condition_residual(t.A_hat, t.b_hat, q),
                                additive_order_condition_residual(t, q)});
    out.push_back({tag + "order conditions", oc <= 1e-12, "max residual " + sci(oc)});

    bool stiff = true, lower = true;
    for (int j = 0; j < t.stages; ++j) stiff = stiff && t.b(j) == t.A(t.stages - 1, j);
    for (int i = 0; i < t.stages; ++i)
      for (int j = i; j < t.stages; ++j) lower = lower && t.A_hat(i, j) == 0.0;
    out.push_back({tag + "stiff accuracy", stiff, "b equals the last row of A"});
    out.push_back({tag + "explicit table strictly lower", lower, ""});

    const double r_inf = std::abs(stability_function(t, Complex(-1e8, 0.0)));
    out.push_back({tag + "L-stability", r_inf < 1e-6, "|R(-1e8)| = " + sci(r_inf)});

    double gap = 0.0;
    for (Complex lambda : {Complex(-2.0, 0.0), Complex(0.0, 3.0), Complex(-50.0, 10.0)}) {
      const double dt = 0.05;
      const Complex r = stability_function(t, lambda * dt);
      gap = std::max(gap, std::abs(scalar_ode_step(t, lambda, dt, 1.0) - r));
      EvolutionSystem<Complex> sys;
      sys.mesh = &mesh;
      sys.op.c = [](double, double) { return 1.0; };
      sys.op.kappa = -1.0 / lambda;
      sys.boundary = [&mesh, lambda](double s) { return State<Complex>{ComplexField::Constant(mesh.size(), std::exp(lambda * s))}; };
      sys.boundary_rate = [&mesh, lambda](double s) {
        return State<Complex>{ComplexField::Constant(mesh.size(), lambda * std::exp(lambda * s))};
      };
      const Integrator<Complex> integ(sys, t, dt);
      gap = std::max(gap, std::abs(integ.step({ComplexField::Ones(mesh.size())}, 0.0)[0](interior) - r));
    }
    out.push_back({tag + "scalar ODE step equals R(lambda dt)", gap <= 1e-13, "max gap " + sci(gap)});
  }
  return out;
}

}  // namespace hps
