#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "hps/leaf.hpp"
#include "hps/mesh.hpp"
#include "hps/solver.hpp"
#include "hps/tableau.hpp"
#include "hps/types.hpp"

namespace hps {

enum class Formulation { Slopes, Stages };

/// How derivative-carrying explicit quantities get values on interface nodes.
/// Continuity: interface values make the leaf fluxes continuous (HPS solve
/// with identity interior). Tridiagonal: same result through independent
/// tridiagonal line systems. Averaged: the operator evaluated at the edge
/// from each side and averaged (1D only; kept as a test hook).
enum class ExplicitStage { Continuity, Tridiagonal, Averaged };

/// u_t = G u + s(t, x) + F2(t, u) with G = -A / kappa, applied per component.
/// Field-valued callables return full mesh-size fields; the integrator reads
/// them only where meaningful (interior for s and F2, Gamma for boundary data).
template <class Scalar>
struct EvolutionSystem {
  using StateT = State<Scalar>;

  const Mesh* mesh = nullptr;
  EllipticOperator op;
  int components = 1;
  std::function<StateT(double t)> source;                           // optional
  std::function<StateT(double t, const StateT& u)> explicit_rhs;    // optional F2
  std::function<StateT(double t)> boundary;                         // g(t)
  std::function<StateT(double t)> boundary_rate;                    // g_t(t)
};

struct StepOptions {
  Formulation formulation = Formulation::Slopes;
  ExplicitStage explicit_stage = ExplicitStage::Continuity;
  bool slope_correction = true;  // test hook: false drops the dt^{-1} jump term
  int threads = 1;
};

/// Fixed-step additive Runge-Kutta integrator. The implicit factorization of
/// I - dt*gamma*G and the continuity factorization are built once at
/// construction and reused for every stage and step.
template <class Scalar>
class Integrator {
 public:
  using Vec = Field<Scalar>;
  using StateT = State<Scalar>;

  Integrator(EvolutionSystem<Scalar> system, ImexTableau tableau, double dt, StepOptions options = {});

  StateT step(const StateT& u, double t) const;
  /// `steps` steps from t0.
  StateT advance(StateT u, double t0, int steps) const;

  /// Field equal to `values` at leaf-interior nodes and `gamma_values` on
  /// Gamma, with interface values making the leaf fluxes continuous. Uses the
  /// tridiagonal path when so configured, the general path otherwise.
  Vec enforce_continuity(const Vec& values, const Vec& gamma_values) const;

  /// Same with the general HPS path / tridiagonal path regardless of options.
  Vec continuity_general(const Vec& values, const Vec& gamma_values) const;
  Vec continuity_tridiagonal(const Vec& values, const Vec& gamma_values) const;

  /// G u at interior nodes (zero elsewhere).
  Vec generator(const Vec& u) const;

  const ImexTableau& tableau() const { return tableau_; }
  double dt() const { return dt_; }
  const StepOptions& options() const { return options_; }
  const HpsFactorization<Scalar>& implicit_factorization() const { return *implicit_; }

 private:
  StateT step_slopes(const StateT& u, double t) const;
  StateT step_stages(const StateT& u, double t) const;
  Vec first_slope(const Vec& u, const Vec& source, const Vec& rate) const;
  StateT explicit_terms(double t, const StateT& u) const;
  Vec solve_stage(const Vec& load, const Vec& dirichlet, const Vec* previous, int stage) const;

  struct Lines;

  EvolutionSystem<Scalar> sys_;
  ImexTableau tableau_;
  double dt_;
  StepOptions options_;
  Scalar kappa_inv_;
  LeafCalculus calculus_;
  std::unique_ptr<HpsFactorization<Scalar>> implicit_;
  std::unique_ptr<HpsFactorization<Scalar>> continuity_;
  std::shared_ptr<const Lines> lines_;
};

/// Converts outward normal-derivative data on Gamma into the Dirichlet data
/// whose solution has that normal derivative, via the root DtN map. Throws
/// FactorizationError when the root DtN is singular.
template <class Scalar>
Field<Scalar> map_neumann_to_dirichlet(const HpsFactorization<Scalar>& fact, const Field<Scalar>& neumann,
                                       const Field<Scalar>& load);

}  // namespace hps
