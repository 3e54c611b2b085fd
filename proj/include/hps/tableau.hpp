#pragma once

#include <vector>

#include "hps/types.hpp"

namespace hps {

/// Paired ESDIRK (implicit) and explicit Butcher tables of one additive
/// Runge-Kutta method. The implicit table has an explicit first stage and a
/// constant diagonal gamma; both tables share b and c.
struct ImexTableau {
  int order = 0;
  int stages = 0;
  double gamma = 0.0;
  RealMatrix A, A_hat;
  Eigen::VectorXd b, b_hat, c, c_hat;
};

/// ARK3(2)4L[2]SA, ARK4(3)6L[2]SA or ARK5(4)8L[2]SA for
/// order 3, 4 or 5. Throws InvalidOrder otherwise.
ImexTableau load_tableau(int order);

/// Largest residual |b^T Phi(t) - 1/gamma(t)| over all rooted trees with at
/// most `order` nodes, for a single Runge-Kutta method.
double order_condition_residual(const RealMatrix& A, const Eigen::VectorXd& b, int order);

/// Same over bi-coloured trees, which adds the additive coupling conditions
/// between the implicit and explicit tables.
double additive_order_condition_residual(const ImexTableau& t, int order);

/// Number of (colored) trees checked, for reporting.
int count_order_conditions(int colors, int order);

/// R(z) = 1 + z b^T (I - z A)^{-1} 1 of the implicit table.
Complex stability_function(const ImexTableau& t, Complex z);

/// One step of u' = lambda u with the implicit table in slope form,
/// evaluated by dense stage algebra.
Complex scalar_ode_step(const ImexTableau& t, Complex lambda, double dt, Complex u);

}  // namespace hps
