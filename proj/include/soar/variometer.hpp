#pragma once

// Total-energy variometer synthesis: specific-energy rate from successive
// altitude/airspeed samples, netto correction for the airframe's own sink,
// and the first-order low-pass used for thermal detection.

#include <stdexcept>

#include "soar/polar.hpp"
#include "soar/types.hpp"

namespace soar {

struct VarioSample {
  double e_dot{0};       // m/s, rate of change of total specific energy
  double e_dot_net{0};   // m/s, e_dot corrected for still-air sink
  double e_dot_filt{0};  // m/s, low-pass-filtered e_dot_net
  double time{0};        // s
};

// Total specific energy h + v^2/(2g), in meters.
inline double specific_energy(double altitude, double airspeed, double g = kGravity) {
  return altitude + airspeed * airspeed / (2.0 * g);
}

// Finite-difference rate of the specific energy over one step.
inline double specific_energy_rate(double h_prev, double h_now, double v_prev, double v_now,
                                   double dt, double g = kGravity) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("specific_energy_rate: dt must be > 0");
  }
  return (specific_energy(h_now, v_now, g) - specific_energy(h_prev, v_prev, g)) / dt;
}

// Netto variometer: e_dot with the polar sink added back. Reads the air
// mass's vertical speed and is 0 in a steady glide through still air.
template <typename Scalar>
Scalar netto(Scalar e_dot, const PolarCoefficientsT<Scalar>& polar, Scalar airspeed, Scalar bank) {
  return e_dot + sink_rate(polar, airspeed, bank);
}

// One step of the detection filter: t_c * input + (1 - t_c) * previous.
inline double lowpass_step(double prev_filt, double e_dot_net, double t_c) {
  if (!(t_c > 0.0 && t_c <= 1.0)) {
    throw std::invalid_argument("lowpass_step: t_c must be in (0, 1]");
  }
  return t_c * e_dot_net + (1.0 - t_c) * prev_filt;
}

// Stateful synthesis at the control rate. The first sample after construction
// or reset has no history and reads all zeros.
class Variometer {
 public:
  explicit Variometer(PolarCoefficients polar, double t_c = 0.03, double g = kGravity)
      : polar_(polar), t_c_(t_c), g_(g) {
    if (!(t_c > 0.0 && t_c <= 1.0)) {
      throw std::invalid_argument("Variometer: t_c must be in (0, 1]");
    }
  }

  // `noise` is added to e_dot_net before filtering (simulated sensor noise
  // and turbulence). The sink correction uses the mid-step bank so the
  // finite difference and the correction span the same interval.
  VarioSample step(double altitude, double airspeed, double bank, double time,
                   double noise = 0.0) {
    VarioSample sample;
    sample.time = time;
    if (has_prev_) {
      const double dt = time - prev_time_;
      sample.e_dot = specific_energy_rate(prev_altitude_, altitude, prev_airspeed_, airspeed,
                                          dt, g_);
      const double mid_bank = 0.5 * (prev_bank_ + bank);
      sample.e_dot_net = netto(sample.e_dot, polar_, airspeed, mid_bank) + noise;
      filt_ = lowpass_step(filt_, sample.e_dot_net, t_c_);
    }
    sample.e_dot_filt = filt_;
    prev_altitude_ = altitude;
    prev_airspeed_ = airspeed;
    prev_bank_ = bank;
    prev_time_ = time;
    has_prev_ = true;
    return sample;
  }

  // Drop the filter back to `value`; used when the powered climb ends so the
  // climb-elevated reading cannot trigger a detection.
  void reset_filter(double value = 0.0) { filt_ = value; }

  double filtered() const { return filt_; }

 private:
  PolarCoefficients polar_;
  double t_c_;
  double g_;
  bool has_prev_{false};
  double prev_altitude_{0};
  double prev_airspeed_{0};
  double prev_bank_{0};
  double prev_time_{0};
  double filt_{0};
};

}  // namespace soar
