#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace hps {

using Complex = std::complex<double>;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Values on the active (corner-free) nodes of a mesh, in global node order.
template <class Scalar>
using Field = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// One field per solution component (Burgers carries two).
template <class Scalar>
using State = std::vector<Field<Scalar>>;

using RealMatrix = Matrix<double>;
using RealField = Field<double>;
using ComplexField = Field<Complex>;

template <class Scalar>
inline constexpr bool is_complex_v = false;
template <>
inline constexpr bool is_complex_v<Complex> = true;

}  // namespace hps
