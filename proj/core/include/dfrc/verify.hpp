#pragma once

#include <complex>
#include <cstdint>

#include "dfrc/scenario.hpp"
#include "dfrc/waveform.hpp"

namespace dfrc {

/// The reduced maximization obtained after eliminating the communication
/// equality constraint:
///   f(V) = u^H V V^H u + 2 Re(u^H V q) + q^H q,  tr(V V^H) <= e_hat,
/// with u = B^H a(theta_t) and q = S_hat^H a(theta_t). Exposed so the
/// gradient can be checked against finite differences independently of the
/// ascent loop.
struct ReducedProblem {
  Eigen::VectorXcd u;  // length N_T - 1
  Eigen::VectorXcd q;  // length L
  double e_hat = 0.0;

  static ReducedProblem from_scenario(const Scenario& scenario);

  double value(const Eigen::MatrixXcd& v) const;

  /// Gradient with respect to the real parametrization (Re V, Im V),
  /// packed as a complex matrix: d f / d Re V_ij = Re(grad_ij) and
  /// d f / d Im V_ij = Im(grad_ij). Equals 2 (u u^H V + u q^H).
  Eigen::MatrixXcd gradient(const Eigen::MatrixXcd& v) const;

  /// Optimal objective value from the closed form,
  /// (sqrt(e_hat) ||u|| + ||q||)^2.
  double closed_form_optimum() const;
};

struct OracleReport {
  double best_value = 0.0;
  double closed_form_value = 0.0;
  double relative_gap = 0.0;  // (closed - best) / closed
  int restarts = 0;
  long long iterations_total = 0;
  bool converged = false;  // best restart hit the tolerance before max_iters
};

/// Projected gradient ascent on the reduced problem from `restarts` random
/// starts (streams derived from `seed` by restart index, so the report is
/// reproducible and independent of scheduling). Backtracking line search;
/// projection rescales onto the Frobenius ball of radius sqrt(e_hat).
/// Convergence when the relative objective change drops below 1e-12.
/// The closed form is a proven global optimum, so relative_gap should sit
/// at numerical noise; a certifiably negative gap would falsify it.
OracleReport oracle_maximize(const Scenario& scenario, int restarts,
                             int max_iters, std::uint64_t seed);

/// Max relative error between the analytic gradient of f(V) and central
/// finite differences at a random point, over both real and imaginary
/// perturbations of randomly chosen entries. Healthy values sit below 1e-5.
double gradient_check(const Scenario& scenario, std::uint64_t seed);

/// Detection threshold for the statistic Re(alpha_t^* s^H A^H y): under H0
/// the statistic is zero-mean Gaussian with variance
/// sigma^2 |alpha_t|^2 ||A s||^2 / 2, hence
///   T_h = sigma |alpha_t| ||A s|| erfc_inv(2 p_fa),
/// where ||A s||^2 = N_R a^H S S^H a is evaluated without materializing A.
/// Requires p_fa in (0, 0.5]; throws std::domain_error otherwise.
double threshold_for_pfa(const WaveformMatrix& waveform,
                         const Scenario& scenario,
                         std::complex<double> alpha_t, double p_fa);

struct MonteCarloReport {
  long long trials = 0;
  double p_fa_hat = 0.0;
  double p_d_hat = 0.0;
  double p_fa_analytic = 0.0;
  double p_d_analytic = 0.0;
  double threshold = 0.0;
  std::uint64_t seed = 0;
  // Sample moments of the H0 statistic, for Gaussianity checks.
  double stat_mean = 0.0;
  double stat_var = 0.0;
};

/// Monte Carlo simulation of the threshold detector. Each trial draws the
/// full N_R x L noise matrix with i.i.d. CN(0, sigma^2) entries and reduces
/// the statistic through the matrix identity
///   Re(alpha_t^* s^H A^H y) = Re(alpha_t^* b^T Y S^H a),
/// so a trial costs O(N_R L) instead of O(N_R N_T L^2). The same noise
/// realization scores both hypotheses: under H1 the received matrix only
/// gains the deterministic mean alpha_t b^* a^H S.
/// Trials run in fixed-size blocks, one derived RNG stream per block,
/// merged in block order: reports are bit-for-bit reproducible for a given
/// seed no matter how many workers run. Requires trials >= 10^4 (anything
/// less estimates nothing useful); throws std::invalid_argument otherwise.
/// alpha_t = 0 degenerates the detector (statistic and threshold both
/// vanish); use a small nonzero amplitude to probe the H1 -> H0 limit.
MonteCarloReport monte_carlo_detector(const WaveformMatrix& waveform,
                                      const Scenario& scenario,
                                      std::complex<double> alpha_t,
                                      double p_fa, long long trials,
                                      std::uint64_t seed);

}  // namespace dfrc
