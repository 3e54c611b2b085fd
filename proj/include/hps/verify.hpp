#pragma once

#include <string>
#include <vector>

namespace hps {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// HPS solve against the dense global collocation solve on meshes 1x1, 2x1,
/// 2x2, 3x2 with p in {5, 7, 9} for -Laplacian + I, I - c*Laplacian with
/// complex c, and a variable reaction coefficient. One result per operator.
std::vector<CheckResult> oracle_equivalence_checks(double tolerance = 1e-9);

/// Tableau invariants for orders 3, 4 and 5: order conditions, stiff
/// accuracy, strictly lower explicit table, L-stability and the scalar ODE
/// step against R(z) (dense stage algebra and full integrator).
std::vector<CheckResult> tableau_checks();

}  // namespace hps
