#include "soar/polar_fit.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace soar {

PolarFitResult fit_polar(std::span<const GlideSample> samples, double k) {
  if (samples.size() < 2) {
    throw std::invalid_argument("fit_polar: need at least 2 samples");
  }
  if (!(k > 0.0)) {
    throw std::invalid_argument("fit_polar: k must be > 0");
  }

  // Basis: sink = c_d0 * (v^3/k) + b * (k / (v * cos^2(bank))).
  Eigen::Matrix2d normal = Eigen::Matrix2d::Zero();
  Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
  for (const auto& sample : samples) {
    if (!(sample.airspeed > 0.0)) {
      throw std::invalid_argument("fit_polar: sample airspeed must be > 0");
    }
    const double cos_bank = std::cos(sample.bank);
    const Eigen::Vector2d basis{
        sample.airspeed * sample.airspeed * sample.airspeed / k,
        k / (sample.airspeed * cos_bank * cos_bank)};
    normal += basis * basis.transpose();
    rhs += basis * sample.sink;
  }

  const double det = normal.determinant();
  const double scale = normal(0, 0) * normal(1, 1);
  if (!(det > 1e-12 * scale)) {
    throw std::invalid_argument("fit_polar: rank-deficient design (airspeeds not distinct)");
  }

  const Eigen::Vector2d coeffs = normal.inverse() * rhs;

  PolarFitResult result;
  result.c_d0 = coeffs[0];
  result.b = coeffs[1];
  result.suspect = !(result.c_d0 > 0.0 && result.b > 0.0);

  double sum_sq = 0.0;
  for (const auto& sample : samples) {
    const double cos_bank = std::cos(sample.bank);
    const double model = result.c_d0 * sample.airspeed * sample.airspeed * sample.airspeed / k +
                         result.b * k / (sample.airspeed * cos_bank * cos_bank);
    const double residual = sample.sink - model;
    sum_sq += residual * residual;
  }
  result.rms_residual = std::sqrt(sum_sq / static_cast<double>(samples.size()));
  return result;
}

}  // namespace soar
