#include "hps/timestep.hpp"

#include <string>

#include "hps/error.hpp"
#include "hps/spectral.hpp"

namespace hps {

namespace {

template <class Scalar>
Scalar inverse_kappa(Complex kappa) {
  if (std::abs(kappa) == 0.0) throw InvalidOperator("time prefactor kappa must be nonzero");
  if constexpr (is_complex_v<Scalar>) {
    return 1.0 / kappa;
  } else {
    if (kappa.imag() != 0.0) throw InvalidOperator("complex kappa requires a complex field");
    return 1.0 / kappa.real();
  }
}

template <class Scalar>
void check_state(const State<Scalar>& s, int components, int size, const char* what) {
  if (static_cast<int>(s.size()) != components)
    throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(components) + " components, got " +
                            std::to_string(s.size()));
  for (const auto& f : s)
    if (f.size() != size)
      throw DimensionMismatch(std::string(what) + ": field of size " + std::to_string(f.size()) +
                              ", mesh has " + std::to_string(size) + " nodes");
}

}  // namespace

// One line of grid points crossing a row of leaves; segment m holds the
// global ids of the p points inside leaf m, ends included.
template <class Scalar>
struct Integrator<Scalar>::Lines {
  struct Line {
    std::vector<std::vector<int>> seg;
    const RealMatrix* d = nullptr;
  };
  RealMatrix dx, dy;
  std::vector<Line> lines;

  explicit Lines(const Mesh& mesh) {
    const int p = mesh.order();
    const RealMatrix d = spectral::cheb_diff_matrix(p);
    dx = d * (2.0 / mesh.hx());
    dy = mesh.dim() == 2 ? RealMatrix(d * (2.0 / mesh.hy())) : RealMatrix();
    const int grid = mesh.dim() == 1 ? p : p * p;
    std::vector<std::vector<int>> lookup(mesh.num_leaves(), std::vector<int>(grid, -1));
    for (int l = 0; l < mesh.num_leaves(); ++l) {
      const auto& leaf = mesh.leaf(l);
      for (int k = 0; k < leaf.n_active(); ++k) lookup[l][leaf.grid[k]] = leaf.global[k];
    }
    if (mesh.dim() == 1) {
      Line line{{}, &dx};
      for (int l = 0; l < mesh.n1(); ++l) line.seg.push_back(lookup[l]);
      if (mesh.n1() > 1) lines.push_back(std::move(line));
      return;
    }
    if (mesh.n1() > 1) {
      for (int iy = 0; iy < mesh.n2(); ++iy)
        for (int j = 1; j < p - 1; ++j) {
          Line line{{}, &dx};
          for (int ix = 0; ix < mesh.n1(); ++ix) {
            std::vector<int> ids(p);
            for (int i = 0; i < p; ++i) ids[i] = lookup[mesh.leaf_index(ix, iy)][j * p + i];
            line.seg.push_back(std::move(ids));
          }
          lines.push_back(std::move(line));
        }
    }
    if (mesh.n2() > 1) {
      for (int ix = 0; ix < mesh.n1(); ++ix)
        for (int i = 1; i < p - 1; ++i) {
          Line line{{}, &dy};
          for (int iy = 0; iy < mesh.n2(); ++iy) {
            std::vector<int> ids(p);
            for (int j = 0; j < p; ++j) ids[j] = lookup[mesh.leaf_index(ix, iy)][j * p + i];
            line.seg.push_back(std::move(ids));
          }
          lines.push_back(std::move(line));
        }
    }
  }
};

template <class Scalar>
Integrator<Scalar>::Integrator(EvolutionSystem<Scalar> system, ImexTableau tableau, double dt, StepOptions options)
    : sys_(std::move(system)),
      tableau_(std::move(tableau)),
      dt_(dt),
      options_(options),
      kappa_inv_(inverse_kappa<Scalar>(sys_.op.kappa)),
      calculus_(*sys_.mesh, sys_.op) {
  if (!sys_.mesh) throw ConfigError("evolution system has no mesh");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (sys_.components < 1) throw ConfigError("components must be >= 1");
  if (!sys_.boundary) throw ConfigError("boundary data g(t) is required");
  if (options_.formulation == Formulation::Slopes && !sys_.boundary_rate)
    throw ConfigError("slope formulation requires boundary rate data g_t(t)");
  if (options_.explicit_stage == ExplicitStage::Averaged && sys_.mesh->dim() != 1)
    throw ConfigError("averaged explicit stage is only defined in 1D");
  const Scalar scale = static_cast<Scalar>(dt_ * tableau_.gamma) * kappa_inv_;
  implicit_ = std::make_unique<HpsFactorization<Scalar>>(
      HpsFactorization<Scalar>::build(*sys_.mesh, ShiftedOperator<Scalar>{sys_.op, Scalar(1), scale}, options_.threads));
  continuity_ = std::make_unique<HpsFactorization<Scalar>>(HpsFactorization<Scalar>::build(
      *sys_.mesh, ShiftedOperator<Scalar>{EllipticOperator{}, Scalar(1), Scalar(0)}, options_.threads));
  lines_ = std::make_shared<const Lines>(*sys_.mesh);
}

template <class Scalar>
typename Integrator<Scalar>::Vec Integrator<Scalar>::generator(const Vec& u) const {
  return -kappa_inv_ * calculus_.apply_interior(u);
}

template <class Scalar>
typename Integrator<Scalar>::Vec Integrator<Scalar>::continuity_general(const Vec& values,
                                                                        const Vec& gamma_values) const {
  SolveRequest<Scalar> req;
  req.load = values;
  req.dirichlet = gamma_values;
  return continuity_->solve(req);
}

template <class Scalar>
typename Integrator<Scalar>::Vec Integrator<Scalar>::continuity_tridiagonal(const Vec& values,
                                                                            const Vec& gamma_values) const {
  const Mesh& mesh = *sys_.mesh;
  Vec out = values;
  for (int id : mesh.gamma()) out(id) = gamma_values(id);
  const int p = mesh.order();
  for (const auto& line : lines_->lines) {
    const RealMatrix& d = *line.d;
    const int n = static_cast<int>(line.seg.size()) - 1;  // unknowns
    std::vector<Scalar> lower(n), diag(n), upper(n), rhs(n);
    for (int m = 0; m < n; ++m) {
      const auto& a = line.seg[m];
      const auto& b = line.seg[m + 1];
      // flux at the right end of segment m equals flux at the left end of m+1
      Scalar r(0);
      for (int i = 1; i < p - 1; ++i) r += -d(p - 1, i) * out(a[i]) + d(0, i) * out(b[i]);
      diag[m] = d(p - 1, p - 1) - d(0, 0);
      lower[m] = d(p - 1, 0);
      upper[m] = -d(0, p - 1);
      if (m == 0) r -= lower[m] * out(a[0]);
      if (m == n - 1) r -= upper[m] * out(b[p - 1]);
      rhs[m] = r;
    }
    // Thomas elimination
    for (int m = 1; m < n; ++m) {
      const Scalar w = lower[m] / diag[m - 1];
      diag[m] -= w * upper[m - 1];
      rhs[m] -= w * rhs[m - 1];
    }
    std::vector<Scalar> x(n);
    for (int m = n - 1; m >= 0; --m) x[m] = (rhs[m] - (m + 1 < n ? upper[m] * x[m + 1] : Scalar(0))) / diag[m];
    for (int m = 0; m < n; ++m) out(line.seg[m][p - 1]) = x[m];
  }
  return out;
}

template <class Scalar>
typename Integrator<Scalar>::Vec Integrator<Scalar>::enforce_continuity(const Vec& values,
                                                                        const Vec& gamma_values) const {
  if (options_.explicit_stage == ExplicitStage::Tridiagonal) return continuity_tridiagonal(values, gamma_values);
  return continuity_general(values, gamma_values);
}

template <class Scalar>
typename Integrator<Scalar>::Vec Integrator<Scalar>::first_slope(const Vec& u, const Vec& source,
                                                                 const Vec& rate) const {
  Vec values = generator(u);
  if (source.size()) values += source;
  if (options_.explicit_stage != ExplicitStage::Averaged) return enforce_continuity(values, rate);
  const Mesh& mesh = *sys_.mesh;
  const Vec edge = -kappa_inv_ * calculus_.apply_edge_averaged(u);
  for (int id = 0; id < mesh.size(); ++id) {
    const auto cls = mesh.node(id).cls;
    if (cls == NodeClass::Interface) values(id) = edge(id) + (source.size() ? source(id) : Scalar(0));
    if (cls == NodeClass::Boundary) values(id) = rate(id);
  }
  return values;
}

template <class Scalar>
typename Integrator<Scalar>::StateT Integrator<Scalar>::explicit_terms(double t, const StateT& u) const {
  if (!sys_.explicit_rhs) return {};
  StateT f = sys_.explicit_rhs(t, u);
  check_state(f, sys_.components, sys_.mesh->size(), "explicit right-hand side");
  const Vec zero = Vec::Zero(sys_.mesh->size());
  for (auto& fc : f) fc = enforce_continuity(fc, zero);
  return f;
}

template <class Scalar>
typename Integrator<Scalar>::Vec Integrator<Scalar>::solve_stage(const Vec& load, const Vec& dirichlet,
                                                                 const Vec* previous, int stage) const {
  SolveRequest<Scalar> req;
  req.load = load;
  req.dirichlet = dirichlet;
  if (previous) {
    req.mode = SolveMode::SlopeCorrected;
    req.previous = previous;
    req.dt = dt_;
  }
  try {
    return implicit_->solve(req);
  } catch (const FactorizationError& e) {
    throw FactorizationError("stage " + std::to_string(stage + 1) + ": " + e.what());
  } catch (const Error& e) {
    throw Error("stage " + std::to_string(stage + 1) + ": " + e.what());
  }
}

template <class Scalar>
typename Integrator<Scalar>::StateT Integrator<Scalar>::step(const StateT& u, double t) const {
  check_state(u, sys_.components, sys_.mesh->size(), "state");
  return options_.formulation == Formulation::Slopes ? step_slopes(u, t) : step_stages(u, t);
}

template <class Scalar>
typename Integrator<Scalar>::StateT Integrator<Scalar>::advance(StateT u, double t0, int steps) const {
  for (int n = 0; n < steps; ++n) u = step(u, t0 + n * dt_);
  return u;
}

template <class Scalar>
typename Integrator<Scalar>::StateT Integrator<Scalar>::step_slopes(const StateT& u, double t) const {
  const auto& T = tableau_;
  const int s = T.stages;
  const int nc = sys_.components;
  const bool imex = static_cast<bool>(sys_.explicit_rhs);
  std::vector<StateT> K(s, StateT(nc)), L(imex ? s : 0);

  auto src = [&](double ti) { return sys_.source ? sys_.source(ti) : StateT(nc); };
  {
    const StateT s0 = src(t), rate = sys_.boundary_rate(t);
    for (int c = 0; c < nc; ++c) K[0][c] = first_slope(u[c], s0[c], rate[c]);
    if (imex) L[0] = explicit_terms(t, u);
  }
  for (int i = 1; i < s; ++i) {
    const double ti = t + T.c(i) * dt_;
    const StateT si = src(ti), rate = sys_.boundary_rate(ti);
    StateT w(nc);
    for (int c = 0; c < nc; ++c) {
      Vec w0 = u[c];
      for (int j = 0; j < i; ++j) {
        w0 += (dt_ * T.A(i, j)) * K[j][c];
        if (imex) w0 += (dt_ * T.A_hat(i, j)) * L[j][c];
      }
      Vec load = generator(w0);
      if (si[c].size()) load += si[c];
      K[i][c] = solve_stage(load, rate[c], options_.slope_correction ? &u[c] : nullptr, i);
      w[c] = w0 + (dt_ * T.gamma) * K[i][c];
    }
    if (imex) L[i] = explicit_terms(ti, w);
  }
  StateT next = u;
  for (int c = 0; c < nc; ++c)
    for (int j = 0; j < s; ++j) {
      next[c] += (dt_ * T.b(j)) * K[j][c];
      if (imex) next[c] += (dt_ * T.b_hat(j)) * L[j][c];
    }
  return next;
}

template <class Scalar>
typename Integrator<Scalar>::StateT Integrator<Scalar>::step_stages(const StateT& u, double t) const {
  const auto& T = tableau_;
  const int s = T.stages;
  const int nc = sys_.components;
  const bool imex = static_cast<bool>(sys_.explicit_rhs);
  const double dg = dt_ * T.gamma;
  std::vector<StateT> F1(s, StateT(nc)), F2(imex ? s : 0);
  StateT U = u;

  {
    const StateT s0 = sys_.source ? sys_.source(t) : StateT(nc);
    for (int c = 0; c < nc; ++c) {
      F1[0][c] = generator(u[c]);
      if (s0[c].size()) F1[0][c] += s0[c];
    }
    if (imex) F2[0] = explicit_terms(t, u);
  }
  for (int i = 1; i < s; ++i) {
    const double ti = t + T.c(i) * dt_;
    const StateT si = sys_.source ? sys_.source(ti) : StateT(nc);
    const StateT g = sys_.boundary(ti);
    for (int c = 0; c < nc; ++c) {
      Vec rhs = u[c];
      for (int j = 0; j < i; ++j) {
        rhs += (dt_ * T.A(i, j)) * F1[j][c];
        if (imex) rhs += (dt_ * T.A_hat(i, j)) * F2[j][c];
      }
      Vec load = rhs;
      if (si[c].size()) load += dg * si[c];
      U[c] = solve_stage(load, g[c], nullptr, i);
      // U - dg*(G U + s) = rhs on leaf interiors
      F1[i][c] = (U[c] - rhs) / dg;
    }
    if (imex) F2[i] = explicit_terms(ti, U);
  }
  if (imex)
    for (int c = 0; c < nc; ++c)
      for (int j = 0; j < s; ++j) U[c] += (dt_ * (T.b_hat(j) - T.A_hat(s - 1, j))) * F2[j][c];
  return U;
}

template <class Scalar>
Field<Scalar> map_neumann_to_dirichlet(const HpsFactorization<Scalar>& fact, const Field<Scalar>& neumann,
                                       const Field<Scalar>& load) {
  const Mesh& mesh = fact.mesh();
  if (neumann.size() != mesh.size() || load.size() != mesh.size())
    throw DimensionMismatch("Neumann data and load must have mesh size");
  const auto& gamma = fact.root_boundary();
  const Field<Scalar> h = fact.root_particular_flux(load);
  Field<Scalar> rhs(static_cast<Eigen::Index>(gamma.size()));
  for (size_t k = 0; k < gamma.size(); ++k) {
    const auto& node = mesh.node(gamma[k]);
    rhs(static_cast<Eigen::Index>(k)) = node.outward * neumann(gamma[k]) - h(static_cast<Eigen::Index>(k));
  }
  const Eigen::PartialPivLU<Matrix<Scalar>> lu(fact.root_dtn());
  const double rc = lu.rcond();
  if (!(rc > 1e-12))
    throw FactorizationError("root Dirichlet-to-Neumann map is singular (rcond=" + std::to_string(rc) + ")");
  const Field<Scalar> g = lu.solve(rhs);
  Field<Scalar> out = Field<Scalar>::Zero(mesh.size());
  for (size_t k = 0; k < gamma.size(); ++k) out(gamma[k]) = g(static_cast<Eigen::Index>(k));
  return out;
}

template class Integrator<double>;
template class Integrator<Complex>;
template Field<double> map_neumann_to_dirichlet(const HpsFactorization<double>&, const Field<double>&,
                                                const Field<double>&);
template Field<Complex> map_neumann_to_dirichlet(const HpsFactorization<Complex>&, const Field<Complex>&,
                                                 const Field<Complex>&);

}  // namespace hps
