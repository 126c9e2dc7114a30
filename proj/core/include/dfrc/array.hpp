#pragma once

#include <Eigen/Dense>
#include <complex>

namespace dfrc {

/// Geometry of the colocated transmit/receive uniform linear arrays.
/// Spacings are expressed in wavelengths, so no carrier frequency is carried
/// around; all phase math below depends only on d/lambda.
struct ArrayConfig {
  int n_tx = 16;      // transmit elements, >= 2
  int n_rx = 16;      // receive elements, >= 1
  double d_tx = 0.5;  // transmit inter-element spacing in wavelengths
  double d_rx = 0.5;  // receive inter-element spacing in wavelengths

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

enum class ArrayKind { transmit, receive };

struct SteeringVector {
  Eigen::VectorXcd entries;
  double angle = 0.0;  // radians
  ArrayKind kind = ArrayKind::transmit;
};

/// ULA steering vector at `angle` (radians, measured from broadside).
///
/// Phase convention: element 0 is the phase reference and a positive angle
/// produces a positive phase progression, entry k = exp(+i 2 pi d k sin angle).
/// Every quantity in this library depends on steering vectors only through
/// inner products, so any consistent convention gives identical results.
///
/// Angles are restricted to [-pi/2, pi/2]; a ULA cannot distinguish an angle
/// from its mirror image about the array axis, and rejecting out-of-range
/// input beats silently aliasing it. Throws std::domain_error otherwise.
SteeringVector steering_vector(const ArrayConfig& config, double angle,
                               ArrayKind kind);

/// Normalized transmit beampattern a(theta_c)^H a(theta_t) / N_T.
/// Modulus is bounded by 1; equal angles give exactly 1 + 0i.
std::complex<double> beampattern(const ArrayConfig& config, double theta_t,
                                 double theta_c);

/// Normalized gain |beampattern|, clamped into [0, 1].
double gain(const ArrayConfig& config, double theta_t, double theta_c);

}  // namespace dfrc
