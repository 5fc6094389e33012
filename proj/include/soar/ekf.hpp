#pragma once

// Thermal-tracking extended Kalman filter over [strength, radius, core north,
// core east], with the core position expressed relative to the aircraft.
// The identity transition collapses the covariance prediction to P + Q, and
// the scalar observation collapses the gain inversion to a single division.

#include <cmath>
#include <stdexcept>

#include "soar/types.hpp"

namespace soar {

struct NoiseConfig {
  double q1{0.001};  // process std, strength
  double q2{0.03};   // process std, radius and both positions
  double r{0.45};    // observation std
};

template <typename Scalar>
struct EstimatorStateT {
  Vec4T<Scalar> mean{Vec4T<Scalar>::Zero()};  // [W, R, x, y]
  Mat4T<Scalar> cov{Mat4T<Scalar>::Zero()};
};
using EstimatorState = EstimatorStateT<double>;

// Radius component is clamped here after every update; the observation model
// divides by R^3 and must be kept away from zero.
inline constexpr double kRadiusFloor = 5.0;  // m

// Aircraft displacement through the air mass over one step: the wind drift
// is removed from the Earth-frame displacement.
inline Vec2 wind_corrected_displacement(const Vec2& delta_abs, const WindVector& wind,
                                        double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("wind_corrected_displacement: dt must be > 0");
  }
  return delta_abs - wind * dt;
}

// Expected vertical air speed at the aircraft: W * exp(-(x^2+y^2)/R^2).
template <typename Scalar>
Scalar predicted_lift(const Vec4T<Scalar>& mean) {
  if (!(mean[1] > Scalar{0})) {
    throw std::invalid_argument("predicted_lift: radius component must be > 0");
  }
  const Scalar d2 = mean[2] * mean[2] + mean[3] * mean[3];
  return mean[0] * std::exp(-d2 / (mean[1] * mean[1]));
}

// Row Jacobian of predicted_lift. Derived by differentiating the lift model,
// so the position components carry the negative sign of the exponent.
template <typename Scalar>
RowVec4T<Scalar> observation_jacobian(const Vec4T<Scalar>& mean) {
  if (!(mean[1] > Scalar{0})) {
    throw std::invalid_argument("observation_jacobian: radius component must be > 0");
  }
  const Scalar w = mean[0];
  const Scalar r = mean[1];
  const Scalar x = mean[2];
  const Scalar y = mean[3];
  const Scalar d2 = x * x + y * y;
  const Scalar e = std::exp(-d2 / (r * r));
  RowVec4T<Scalar> h;
  h << e,
      Scalar{2} * w * d2 / (r * r * r) * e,
      Scalar{-2} * w * x / (r * r) * e,
      Scalar{-2} * w * y / (r * r) * e;
  return h;
}

template <typename Scalar>
Mat4T<Scalar> process_noise(const NoiseConfig& noise) {
  const Scalar q1 = static_cast<Scalar>(noise.q1);
  const Scalar q2 = static_cast<Scalar>(noise.q2);
  return Vec4T<Scalar>(q1 * q1, q2 * q2, q2 * q2, q2 * q2).asDiagonal();
}

// Prediction step. The aircraft moved (dx, dy) through the air mass, so the
// relative core moves by (-dx, -dy); with an identity transition the
// covariance picks up Q directly.
template <typename Scalar>
EstimatorStateT<Scalar> predict(const EstimatorStateT<Scalar>& state, Scalar dx, Scalar dy,
                                const NoiseConfig& noise) {
  EstimatorStateT<Scalar> out = state;
  out.mean[2] -= dx;
  out.mean[3] -= dy;
  out.cov += process_noise<Scalar>(noise);
  return out;
}

template <typename Scalar>
struct EkfUpdateT {
  EstimatorStateT<Scalar> state;
  Scalar innovation{0};
  Scalar gain_norm{0};
  bool ok{false};  // false: innovation variance not positive, covariance corrupt
};
using EkfUpdate = EkfUpdateT<double>;

// Scalar-observation measurement update. The innovation variance
// H*P*H^T + r^2 is a scalar, so the gain needs only a division.
template <typename Scalar>
EkfUpdateT<Scalar> update(const EstimatorStateT<Scalar>& state, Scalar observed_vario,
                          const NoiseConfig& noise,
                          Scalar radius_floor = Scalar{kRadiusFloor}) {
  EkfUpdateT<Scalar> out;
  out.state = state;

  // A corrupted belief (non-finite, non-positive radius, or non-positive
  // innovation variance) aborts the update; the caller resets the estimator.
  if (!state.mean.allFinite() || !state.cov.allFinite() || !(state.mean[1] > Scalar{0})) {
    return out;
  }
  const RowVec4T<Scalar> h = observation_jacobian(state.mean);
  const Scalar r_obs = static_cast<Scalar>(noise.r);
  const Scalar innovation_var = (h * state.cov * h.transpose())(0) + r_obs * r_obs;
  if (!std::isfinite(innovation_var) || !(innovation_var > Scalar{0})) {
    return out;
  }

  const Vec4T<Scalar> gain = state.cov * h.transpose() / innovation_var;
  out.innovation = observed_vario - predicted_lift(state.mean);
  out.state.mean += gain * out.innovation;
  out.state.mean[1] = std::max(out.state.mean[1], radius_floor);

  const Mat4T<Scalar> cov = (Mat4T<Scalar>::Identity() - gain * h) * state.cov;
  out.state.cov = Scalar{0.5} * (cov + cov.transpose());  // symmetrize

  out.gain_norm = gain.norm();
  out.ok = true;
  return out;
}

struct EstimatorInitConfig {
  double r_init{80};         // m, initial radius guess
  double d_ahead{30};        // m, core guess placed this far along the heading
  double sigma_strength{1};  // m/s
  double sigma_radius{40};   // m
  double sigma_position{30}; // m, usually equal to d_ahead
};

// Fresh belief at detection time: core d_ahead meters along the current
// heading, strength back-computed so the model reproduces the filtered vario
// at that distance.
inline EstimatorState initialize(double filtered_vario, double heading,
                                 const EstimatorInitConfig& config) {
  EstimatorState state;
  const double x = config.d_ahead * std::cos(heading);
  const double y = config.d_ahead * std::sin(heading);
  const double attenuation =
      std::exp(-(config.d_ahead * config.d_ahead) / (config.r_init * config.r_init));
  state.mean << filtered_vario / attenuation, config.r_init, x, y;
  state.cov = Vec4(config.sigma_strength * config.sigma_strength,
                   config.sigma_radius * config.sigma_radius,
                   config.sigma_position * config.sigma_position,
                   config.sigma_position * config.sigma_position)
                  .asDiagonal();
  return state;
}

}  // namespace soar
