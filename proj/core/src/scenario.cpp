#include "dfrc/scenario.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dfrc {

void Scenario::validate() const {
  array.validate();
  const double half_pi = std::numbers::pi / 2.0;
  if (!(std::abs(theta_t) <= half_pi)) {
    throw std::invalid_argument("Scenario: theta_t outside [-pi/2, pi/2]");
  }
  if (!(std::abs(theta_c) <= half_pi)) {
    throw std::invalid_argument("Scenario: theta_c outside [-pi/2, pi/2]");
  }
  if (d_c.size() == 0) {
    throw std::invalid_argument("Scenario: d_c is empty");
  }
  if (!d_c.allFinite()) {
    throw std::invalid_argument("Scenario: d_c has non-finite entries");
  }
  if (!(e_t > 0.0) || !std::isfinite(e_t)) {
    throw std::invalid_argument("Scenario: e_t must be finite and > 0");
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("Scenario: sigma2 must be finite and > 0");
  }
}

InfeasibleScenarioError::InfeasibleScenarioError(double deficit)
    : std::runtime_error(
          "infeasible scenario: transmit energy short by " +
          std::to_string(deficit) +
          " (e_t must be at least ||d_c||^2 / N_T)"),
      deficit_(deficit) {}

}  // namespace dfrc
