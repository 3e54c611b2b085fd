#pragma once

#include <optional>
#include <vector>

#include "hps/mesh.hpp"
#include "hps/types.hpp"

namespace hps {

/// Max-norm of a - b over all active nodes (all components).
template <class Scalar>
double max_error(const Field<Scalar>& a, const Field<Scalar>& b);
template <class Scalar>
double max_error(const State<Scalar>& a, const State<Scalar>& b);

/// Value of a mesh field at (x, y): tensor Chebyshev interpolation on the
/// containing leaf. Missing leaf corners are extrapolated along both adjacent
/// edges and averaged.
template <class Scalar>
Scalar evaluate(const Mesh& mesh, const Field<Scalar>& u, double x, double y);

/// Field on `to` interpolated from a field on `from` (same domain).
template <class Scalar>
Field<Scalar> interpolate(const Mesh& from, const Field<Scalar>& u, const Mesh& to);

struct ConvergenceSeries {
  std::vector<double> resolution;  // h or dt, any monotone sequence
  std::vector<double> error;
  std::vector<bool> used;          // points entering the fit
  double rate = 0.0;
  double residual = 0.0;           // RMS of the log-log fit residual
  double floor = 0.0;              // error floor used for exclusion (0: none)
};

struct FitOptions {
  /// Points with error below floor_factor * floor are excluded.
  double floor_factor = 50.0;
  /// Explicit floor; when absent a floor is detected as the smallest error
  /// if the finest step reduces the error by less than stall_ratio, or by
  /// less than stall_fraction of the geometric mean of the earlier reductions.
  std::optional<double> floor;
  double stall_ratio = 2.0;
  double stall_fraction = 0.5;
  int min_points = 3;
};

/// Least-squares slope of log(error) against log(resolution). Throws
/// InsufficientData when fewer than min_points survive the floor filter.
ConvergenceSeries fit_rate(const std::vector<double>& resolution, const std::vector<double>& error,
                           const FitOptions& options = {});

/// log(e_i / e_{i+1}) / log(r_i / r_{i+1}) for consecutive pairs.
std::vector<double> pairwise_rates(const std::vector<double>& resolution, const std::vector<double>& error);

/// Richardson table over solutions at dt, dt/2, dt/4, ...:
///   R(n, 0) = u_n,
///   R(n, k) = R(n, k-1) + (R(n, k-1) - R(n-1, k-1)) / (2^(q+k-1) - 1),
/// assuming an error expansion in powers q, q+1, q+2, ...
template <class Scalar>
struct ExtrapolationTable {
  int base_order = 0;
  std::vector<std::vector<State<Scalar>>> value;  // value[n][k], k <= n

  /// errors[n][k] against a reference state.
  std::vector<std::vector<double>> errors(const State<Scalar>& reference) const;
};

template <class Scalar>
ExtrapolationTable<Scalar> richardson(const std::vector<State<Scalar>>& solutions, int base_order);

}  // namespace hps
