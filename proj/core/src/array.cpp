#include "dfrc/array.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dfrc {

void ArrayConfig::validate() const {
  if (n_tx < 2) {
    throw std::invalid_argument("ArrayConfig: n_tx must be >= 2, got " +
                                std::to_string(n_tx));
  }
  if (n_rx < 1) {
    throw std::invalid_argument("ArrayConfig: n_rx must be >= 1, got " +
                                std::to_string(n_rx));
  }
  if (!(d_tx > 0.0) || !std::isfinite(d_tx)) {
    throw std::invalid_argument("ArrayConfig: d_tx must be finite and > 0");
  }
  if (!(d_rx > 0.0) || !std::isfinite(d_rx)) {
    throw std::invalid_argument("ArrayConfig: d_rx must be finite and > 0");
  }
}

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_angle(double angle) {
  if (!(std::abs(angle) <= kHalfPi)) {
    throw std::domain_error("angle " + std::to_string(angle) +
                            " rad outside [-pi/2, pi/2]");
  }
}

}  // namespace

SteeringVector steering_vector(const ArrayConfig& config, double angle,
                               ArrayKind kind) {
  config.validate();
  check_angle(angle);

  const int n = kind == ArrayKind::transmit ? config.n_tx : config.n_rx;
  const double d = kind == ArrayKind::transmit ? config.d_tx : config.d_rx;
  const double phase_step = 2.0 * std::numbers::pi * d * std::sin(angle);

  SteeringVector out;
  out.angle = angle;
  out.kind = kind;
  out.entries.resize(n);
  for (int k = 0; k < n; ++k) {
    out.entries(k) = std::polar(1.0, phase_step * static_cast<double>(k));
  }
  return out;
}

std::complex<double> beampattern(const ArrayConfig& config, double theta_t,
                                 double theta_c) {
  config.validate();
  check_angle(theta_t);
  check_angle(theta_c);
  // a(theta)^H a(theta) = N_T identically; evaluating the sum would only
  // blur the unit value by rounding.
  if (theta_t == theta_c) {
    return {1.0, 0.0};
  }
  const auto a_t = steering_vector(config, theta_t, ArrayKind::transmit);
  const auto a_c = steering_vector(config, theta_c, ArrayKind::transmit);
  const std::complex<double> inner = a_c.entries.adjoint() * a_t.entries;
  return inner / static_cast<double>(config.n_tx);
}

double gain(const ArrayConfig& config, double theta_t, double theta_c) {
  const double g = std::abs(beampattern(config, theta_t, theta_c));
  return g > 1.0 ? 1.0 : g;
}

}  // namespace dfrc
