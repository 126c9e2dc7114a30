#pragma once

#include <Eigen/Dense>
#include <complex>

#include "dfrc/array.hpp"
#include "dfrc/scenario.hpp"

namespace dfrc {

/// Semi-unitary basis B (N_T x (N_T-1)) of the null space of a(theta_c)^H:
/// a_c^H B = 0, B^H B = I, and B B^H = I - a_c a_c^H / N_T.
struct NullSpaceBasis {
  Eigen::MatrixXcd entries;
};

enum class DesignCase {
  generic,             // 0 < G < 1
  comm_at_null,        // G ~ 0, the user sits in a pattern null
  comm_equals_target,  // G ~ 1, user and target directions coincide
};

/// Optimal waveform together with its beamformer decomposition
/// S = w d_c^T, w = alpha1 a(theta_c) + alpha2 a(theta_t).
struct DesignResult {
  WaveformMatrix waveform;
  Eigen::VectorXcd w;
  std::complex<double> alpha1;
  std::complex<double> alpha2;
  double achieved_snr_factor = 0.0;  // a(theta_t)^H S S^H a(theta_t)
  double residual_energy = 0.0;      // energy left after the forced part
  double gain = 0.0;                 // G = |B(theta_t, theta_c)|
  DesignCase degenerate_case = DesignCase::generic;
};

/// Deterministic null-space basis built from one complex Householder
/// reflection that maps a_c onto the first coordinate axis; the remaining
/// columns of the (Hermitian, unitary) reflector are the basis.
/// Requires length >= 2, else throws std::invalid_argument.
NullSpaceBasis null_space_basis(const SteeringVector& a_c);

/// Energy left once the minimum-energy waveform satisfying the communication
/// constraint is paid for: e_t - ||d_c||^2 / N_T. A negative return value
/// means the scenario is infeasible; it is a value, not an error, so sweeps
/// can report infeasibility row by row.
double residual_energy(const Scenario& scenario);

/// Closed-form solution of
///   max  a(theta_t)^H S S^H a(theta_t)
///   s.t. a(theta_c)^H S = d_c^T,  tr(S S^H) <= e_t.
///
/// The optimum is the rank-1 matrix S = w d_c^T (phased-array mode) with
/// w a linear combination of the two steering vectors. Degenerate branches:
///  - G ~ 1: null-space energy cannot raise the objective, so the
///    minimum-energy choice S = a_c d_c^T / N_T is returned and the unused
///    budget is reported via residual_energy.
///  - G ~ 0: the free direction is fixed to the continuous limit of the
///    generic formula, keeping the result rank 1 and deterministic.
/// Gains within 1e-12 of the endpoints select the degenerate branches.
///
/// Throws InfeasibleScenarioError when residual energy is negative and
/// std::invalid_argument when d_c is the zero vector.
DesignResult design_optimal_waveform(const Scenario& scenario);

/// Independent construction of the same optimum through the explicit
/// null-space parametrization S = S_hat + B V with V = sqrt(e_hat) u_bar
/// q_bar^H. Exercises a different algebraic route than
/// design_optimal_waveform; the two must agree entrywise.
WaveformMatrix design_via_nullspace(const Scenario& scenario);

/// Signal arriving at the communication receiver, a(theta_c)^H S,
/// returned as a length-L column. Throws std::invalid_argument on
/// dimension mismatch.
Eigen::VectorXcd synthesize_comm_signal(const WaveformMatrix& waveform,
                                        const SteeringVector& a_c);

}  // namespace dfrc
