#pragma once

#include <cmath>

#include <Eigen/Core>

namespace soar {

template <typename Scalar>
using Vec2T = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Vec4T = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Mat4T = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar>
using RowVec4T = Eigen::Matrix<Scalar, 1, 4>;

// Planar quantities are (north, east) in a flat-Earth local tangent frame.
using Vec2 = Vec2T<double>;
using Vec4 = Vec4T<double>;
using Mat4 = Mat4T<double>;
using RowVec4 = RowVec4T<double>;

// Uniform horizontal wind, (north, east) m/s.
using WindVector = Vec2;

inline constexpr double kGravity = 9.80665;           // m/s^2
inline constexpr double kAirDensitySeaLevel = 1.225;  // kg/m^3

// Wrap an angle to [-pi, pi].
inline double wrap_angle(double a) {
  return std::remainder(a, 2.0 * M_PI);
}

}  // namespace soar
