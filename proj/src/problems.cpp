#include "hps/problems.hpp"

#include <cmath>

#include "hps/error.hpp"

namespace hps {

namespace {

constexpr double kPi = 3.14159265358979323846;

EllipticOperator schrodinger_operator(CoefficientFn potential) {
  EllipticOperator op = EllipticOperator::negative_laplacian(0.5);
  op.c = std::move(potential);
  op.kappa = Complex(0.0, -1.0);  // -i u_t = -A u, i.e. i u_t = A u
  return op;
}

ProblemSpec<double> burgers_base(double epsilon) {
  ProblemSpec<double> s;
  s.dim = 2;
  s.domain = {-kPi, kPi, -kPi, kPi};
  s.components = 2;
  s.op = EllipticOperator::negative_laplacian(epsilon);
  s.explicit_rhs = [](const LeafCalculus& calc, double, const State<double>& u) {
    return burgers_advection(calc, u);
  };
  s.q = 5;
  s.formulation = Formulation::Slopes;
  return s;
}

}  // namespace

ProblemSpec<double> heat_1d_cos() {
  ProblemSpec<double> s;
  s.name = "heat1d-bc";
  s.dim = 1;
  s.domain = {0.0, 2.0, 0.0, 1.0};
  s.op = EllipticOperator::negative_laplacian();
  s.initial = [](double, double, double, int) { return 1.0; };
  s.source = [](double, double, double t, int) { return -std::sin(t); };
  s.exact = [](double, double, double t, int) { return std::cos(t); };
  s.exact_rate = [](double, double, double t, int) { return -std::sin(t); };
  s.boundary = s.exact;
  s.boundary_rate = s.exact_rate;
  s.final_time = 1.0;
  s.n1 = 32;
  s.n2 = 1;
  s.p = 32;
  s.dt = 1.0 / 16;
  return s;
}

ProblemSpec<double> heat_1d_kink() {
  ProblemSpec<double> s;
  s.name = "heat1d-kink";
  s.dim = 1;
  s.domain = {0.0, 2.0, 0.0, 1.0};
  s.op = EllipticOperator::negative_laplacian();
  s.initial = [](double x, double, double, int) { return 1.0 - std::abs(x - 1.0); };
  s.boundary = [](double, double, double, int) { return 0.0; };
  s.boundary_rate = s.boundary;
  s.final_time = 10.0;
  s.n1 = 2;
  s.n2 = 1;
  s.p = 16;
  s.dt = 0.1;
  return s;
}

ProblemSpec<Complex> schrodinger_harmonic() {
  ProblemSpec<Complex> s;
  s.name = "schrodinger-harmonic";
  s.domain = {-8.0, 8.0, -8.0, 8.0};
  s.op = schrodinger_operator([](double x, double y) { return 0.5 * (x * x + y * y); });
  const double amp = 1.0 / std::sqrt(std::sqrt(kPi));
  s.exact = [amp](double x, double y, double t, int) {
    return amp * std::exp(Complex(0.0, -t)) * std::exp(-0.5 * (x * x + y * y));
  };
  s.exact_rate = [amp](double x, double y, double t, int) {
    return Complex(0.0, -1.0) * amp * std::exp(Complex(0.0, -t)) * std::exp(-0.5 * (x * x + y * y));
  };
  s.initial = s.exact;
  s.boundary = s.exact;
  s.boundary_rate = s.exact_rate;
  s.final_time = 2.0 * kPi;
  s.n1 = s.n2 = 8;
  s.p = 8;
  s.q = 3;
  s.formulation = Formulation::Stages;
  return s;
}

ProblemSpec<Complex> schrodinger_asymmetric() {
  ProblemSpec<Complex> s;
  s.name = "schrodinger-asymmetric";
  s.domain = {-6.0, 6.0, -6.0, 6.0};
  s.op = schrodinger_operator([](double x, double y) { return 1.0 - std::exp(-std::pow(x + 0.9 * y, 4)); });
  s.initial = [](double x, double y, double, int) {
    return Complex(3.0 * std::sin(x) * std::sin(y) * std::exp(-(x * x + y * y)), 0.0);
  };
  s.boundary = [](double, double, double, int) { return Complex(0.0, 0.0); };
  s.boundary_rate = s.boundary;
  s.final_time = 4.0;
  s.n1 = s.n2 = 16;
  s.p = 8;
  s.q = 4;
  s.dt = 1.0 / 40;
  s.formulation = Formulation::Stages;
  return s;
}

ProblemSpec<double> burgers_rotating(double epsilon) {
  ProblemSpec<double> s = burgers_base(epsilon);
  s.name = "burgers-rotating";
  s.initial = [](double x, double y, double, int c) {
    const double e = 5.0 * std::exp(-3.0 * (x * x + y * y));
    return c == 0 ? -y * e : x * e;
  };
  s.boundary = [](double, double, double, int) { return 0.0; };
  s.boundary_rate = s.boundary;
  s.final_time = 5.0;
  s.n1 = s.n2 = 24;
  s.p = 24;
  s.dt = 1.0 / 80;
  return s;
}

ProblemSpec<double> burgers_cross_stream(double epsilon) {
  ProblemSpec<double> s = burgers_base(epsilon);
  s.name = "burgers-cross";
  s.initial = [](double x, double y, double, int c) {
    return c == 0 ? 8.0 * y * std::exp(-36.0 * std::pow(y / 2.0, 8)) : -8.0 * x * std::exp(-36.0 * std::pow(x / 2.0, 8));
  };
  s.boundary = s.initial;
  s.boundary_rate = [](double, double, double, int) { return 0.0; };
  s.final_time = 0.75;
  s.n1 = s.n2 = 24;
  s.p = 24;
  s.dt = 1.0 / 200;
  return s;
}

template <class Scalar>
Mesh make_mesh(const ProblemSpec<Scalar>& spec, int n1, int n2, int p) {
  return Mesh::build(spec.domain, n1, spec.dim == 1 ? 1 : n2, p, spec.dim);
}

template <class Scalar>
State<Scalar> sample(const Mesh& mesh, const PointFn<Scalar>& fn, double t, int components) {
  State<Scalar> out(components);
  for (int c = 0; c < components; ++c) {
    out[c].resize(mesh.size());
    for (int i = 0; i < mesh.size(); ++i) out[c](i) = fn(mesh.node(i).x, mesh.node(i).y, t, c);
  }
  return out;
}

template <class Scalar>
EvolutionSystem<Scalar> make_system(const ProblemSpec<Scalar>& spec, const Mesh& mesh) {
  if (mesh.dim() != spec.dim) throw ConfigError(spec.name + ": mesh dimension does not match the problem");
  if (!spec.boundary) throw ConfigError(spec.name + ": boundary data missing");
  EvolutionSystem<Scalar> sys;
  sys.mesh = &mesh;
  sys.op = spec.op;
  sys.components = spec.components;
  const int nc = spec.components;
  if (spec.source) sys.source = [&mesh, fn = spec.source, nc](double t) { return sample(mesh, fn, t, nc); };
  // Dirichlet data is only read on Gamma
  auto on_gamma = [&mesh, nc](PointFn<Scalar> fn) {
    return [&mesh, fn, nc](double t) {
      State<Scalar> out(nc, Field<Scalar>::Zero(mesh.size()));
      for (int c = 0; c < nc; ++c)
        for (int id : mesh.gamma()) out[c](id) = fn(mesh.node(id).x, mesh.node(id).y, t, c);
      return out;
    };
  };
  sys.boundary = on_gamma(spec.boundary);
  if (spec.boundary_rate) sys.boundary_rate = on_gamma(spec.boundary_rate);
  if (spec.explicit_rhs) {
    auto calc = std::make_shared<LeafCalculus>(mesh, spec.op);
    sys.explicit_rhs = [calc, fn = spec.explicit_rhs](double t, const State<Scalar>& u) { return fn(*calc, t, u); };
  }
  return sys;
}

template <class Scalar>
double exact_residual(const ProblemSpec<Scalar>& spec, const Mesh& mesh, double t) {
  if (!spec.exact || !spec.exact_rate) throw ConfigError(spec.name + ": no exact solution");
  const int nc = spec.components;
  const auto u = sample(mesh, spec.exact, t, nc);
  const auto ut = sample(mesh, spec.exact_rate, t, nc);
  LeafCalculus calc(mesh, spec.op);
  Scalar kinv;
  if constexpr (is_complex_v<Scalar>) {
    kinv = 1.0 / spec.op.kappa;
  } else {
    kinv = 1.0 / spec.op.kappa.real();
  }
  State<Scalar> f2 = spec.explicit_rhs ? spec.explicit_rhs(calc, t, u) : State<Scalar>{};
  double worst = 0.0;
  for (int c = 0; c < nc; ++c) {
    Field<Scalar> rhs = -kinv * calc.apply_interior(u[c]);
    if (spec.source) rhs += sample(mesh, spec.source, t, nc)[c];
    if (!f2.empty()) rhs += f2[c];
    for (int id = 0; id < mesh.size(); ++id) {
      if (mesh.node(id).cls == NodeClass::Interior) worst = std::max(worst, std::abs(ut[c](id) - rhs(id)));
    }
    for (int id : mesh.gamma()) {
      const auto& nd = mesh.node(id);
      worst = std::max(worst, std::abs(u[c](id) - spec.boundary(nd.x, nd.y, t, c)));
      if (spec.boundary_rate) worst = std::max(worst, std::abs(ut[c](id) - spec.boundary_rate(nd.x, nd.y, t, c)));
    }
  }
  return worst;
}

State<double> burgers_advection(const LeafCalculus& calc, const State<double>& u) {
  if (u.size() != 2) throw DimensionMismatch("Burgers advection needs two velocity components");
  State<double> out(2);
  for (int c = 0; c < 2; ++c) {
    const RealField dx = calc.dx_interior(u[c]);
    const RealField dy = calc.dy_interior(u[c]);
    out[c] = -(u[0].cwiseProduct(dx) + u[1].cwiseProduct(dy));
  }
  return out;
}

RealField vorticity(const LeafCalculus& calc, const State<double>& u) {
  return calc.dx_interior(u[1]) - calc.dy_interior(u[0]);
}

RealField dilatation(const LeafCalculus& calc, const State<double>& u) {
  return calc.dx_interior(u[0]) + calc.dy_interior(u[1]);
}

#define HPS_INSTANTIATE(S)                                                                   \
  template Mesh make_mesh(const ProblemSpec<S>&, int, int, int);                             \
  template State<S> sample(const Mesh&, const PointFn<S>&, double, int);                     \
  template EvolutionSystem<S> make_system(const ProblemSpec<S>&, const Mesh&);               \
  template double exact_residual(const ProblemSpec<S>&, const Mesh&, double);
HPS_INSTANTIATE(double)
HPS_INSTANTIATE(Complex)
#undef HPS_INSTANTIATE

}  // namespace hps
