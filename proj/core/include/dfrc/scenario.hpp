#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "dfrc/array.hpp"

namespace dfrc {

/// One full problem instance: geometry, target/user directions, the desired
/// communication symbols, the energy budget and the noise level.
struct Scenario {
  ArrayConfig array;
  double theta_t = 0.0;   // target direction, radians
  double theta_c = 0.0;   // communication receiver direction, radians
  Eigen::VectorXcd d_c;   // desired communication symbols, length L
  double e_t = 0.0;       // total transmit energy
  double sigma2 = 1.0;    // noise variance per complex sample

  int code_length() const { return static_cast<int>(d_c.size()); }

  /// Throws std::invalid_argument on structural problems (empty d_c,
  /// non-positive energy/noise, bad array config, angles out of domain).
  void validate() const;
};

/// Transmit code matrix S (N_T x L) with its total energy tr(S S^H) cached.
struct WaveformMatrix {
  Eigen::MatrixXcd entries;
  double energy = 0.0;

  WaveformMatrix() = default;
  explicit WaveformMatrix(Eigen::MatrixXcd m)
      : entries(std::move(m)), energy(entries.squaredNorm()) {}
};

/// Raised when the energy budget cannot cover the minimum-energy waveform
/// that satisfies the communication constraint.
class InfeasibleScenarioError : public std::runtime_error {
 public:
  explicit InfeasibleScenarioError(double deficit);

  /// How much energy is missing (always > 0).
  double energy_deficit() const { return deficit_; }

 private:
  double deficit_;
};

}  // namespace dfrc
