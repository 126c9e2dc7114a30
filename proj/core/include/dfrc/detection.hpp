#pragma once

#include <vector>

#include "dfrc/scenario.hpp"

namespace dfrc {

/// Complementary error function (2/sqrt(pi)) int_x^inf exp(-t^2) dt.
///
/// Power series for |x| < 2, Lentz-evaluated continued fraction of the
/// asymptotic expansion for x >= 2, reflection erfc(-x) = 2 - erfc(x) for
/// negative arguments. Relative error <= 1e-12 against high-precision
/// references on [-6, 6]; the far tail underflows gracefully to 0.
/// Double-precision tails matter here: the detector operates at
/// false-alarm rates down to 1e-6 and below.
double erfc(double x);

/// Inverse of erfc on (0, 2). Safeguarded Newton iteration (bisection
/// fallback keeps the bracket). Throws std::domain_error outside (0, 2).
double erfc_inv(double y);

/// Detection probability of the Neyman-Pearson threshold test,
///   P_D = erfc(erfc_inv(2 p_fa) - sqrt(snr)) / 2,
/// with `waveform_snr` in linear scale. Requires waveform_snr >= 0 and
/// p_fa in (0, 0.5]; throws std::domain_error otherwise.
double detection_probability(double waveform_snr, double p_fa);

/// One operating point of the detector. p_d >= p_fa always holds: the
/// threshold test is never worse than chance.
struct DetectionPoint {
  double input_snr = 0.0;     // |alpha_t|^2 / sigma^2, linear
  double waveform_snr = 0.0;  // post-processing SNR, linear
  double p_fa = 0.0;
  double p_d = 0.0;
};

/// Target SNR delivered by a waveform: N_R * input_snr * a^H S S^H a with
/// a = a(theta_t). `input_snr` is |alpha_t|^2 / sigma^2 in linear scale.
double snr_of_waveform(const WaveformMatrix& waveform,
                       const Scenario& scenario, double input_snr);

/// Closed-form SNR limits for one scenario. All SNRs are linear; dB only
/// appears in loss_db, which compares against the unconstrained bound.
struct SnrBudget {
  double snr_max = 0.0;         // best achievable under the comm constraint
  double mono_bound = 0.0;      // e_t N_T N_R * input_snr, no constraint
  double loss_db = 0.0;         // 10 log10(mono_bound / snr_max)
  double gain = 0.0;            // G toward the comm user
  double zero_loss_gain = 0.0;  // G* at which the constraint costs nothing
};

/// Maximum achievable SNR under the communication constraint,
///   snr_max = N_R * input_snr * (sqrt(e_hat N_T (1 - G^2)) + G ||d_c||)^2,
/// plus the mono-function bound and the loss between them.
/// Throws InfeasibleScenarioError when the energy budget is short.
SnrBudget max_snr_closed_form(const Scenario& scenario, double input_snr);

/// Gain G* = ||d_c|| / sqrt(e_t N_T) at which the constrained maximum meets
/// the mono-function bound, i.e. the communication constraint becomes free.
double zero_loss_gain(const Scenario& scenario);

/// All user directions whose gain equals zero_loss_gain, sorted ascending,
/// in radians. Bracketing on a dense grid (1e-3 rad, anchored at theta_t)
/// refined by bisection to 1e-13; the grid is far finer than any lobe of
/// the arrays considered here.
std::vector<double> zero_loss_angles(const Scenario& scenario);

}  // namespace dfrc
