#include "dfrc/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dfrc/array.hpp"

namespace dfrc {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// erf(x) = (2/sqrt(pi)) e^{-x^2} sum_{n>=0} (2x^2)^n x / (2n+1)!!.
// All terms are positive, so there is no cancellation inside the sum.
double erfc_by_series(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 1.0);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return 1.0 - (2.0 / kSqrtPi) * std::exp(-x2) * sum;
}

// Stieltjes continued fraction
//   erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// evaluated with the modified Lentz recurrence. Convergent for all x > 0,
// fast for x >= 2.
double erfc_by_cf(double x) {
  const double tiny = 1e-300;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int n = 1; n < 300; ++n) {
    const double a = 0.5 * n;
    d = x + a * d;
    if (d == 0.0) d = tiny;
    d = 1.0 / d;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return std::exp(-x * x) / (kSqrtPi * f);
}

}  // namespace

double erfc(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 - erfc(-x);
  if (x < 2.0) return erfc_by_series(x);
  if (x > 30.0) return 0.0;  // exp(-x^2) underflows; the true value does too
  return erfc_by_cf(x);
}

double erfc_inv(double y) {
  if (!(y > 0.0 && y < 2.0)) {
    throw std::domain_error("erfc_inv: argument must lie in (0, 2)");
  }
  if (y == 1.0) return 0.0;
  if (y > 1.0) return -erfc_inv(2.0 - y);

  // y in (0, 1): the root lies in (0, 28]; erfc(28) underflows to 0, so the
  // upper end always brackets. Safeguarded Newton: every iterate stays inside
  // the current bracket, falling back to bisection when the step leaves it.
  double lo = 0.0;
  double hi = 1.0;
  while (hi < 28.0 && erfc(hi) > y) {
    lo = hi;
    hi = std::min(2.0 * hi, 28.0);
  }

  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = erfc(x) - y;
    if (f == 0.0) return x;
    if (f > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double deriv = -(2.0 / kSqrtPi) * std::exp(-x * x);
    double next = deriv != 0.0 ? x - f / deriv : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool done = std::abs(next - x) <= 1e-16 * (1.0 + std::abs(x)) ||
                      hi - lo <= 1e-16 * (1.0 + lo);
    x = next;
    if (done) break;
  }
  return x;
}

double detection_probability(double waveform_snr, double p_fa) {
  if (!(waveform_snr >= 0.0) || !std::isfinite(waveform_snr)) {
    throw std::domain_error("detection_probability: snr must be finite and >= 0");
  }
  if (!(p_fa > 0.0 && p_fa <= 0.5)) {
    throw std::domain_error("detection_probability: p_fa must lie in (0, 0.5]");
  }
  return 0.5 * erfc(erfc_inv(2.0 * p_fa) - std::sqrt(waveform_snr));
}

double snr_of_waveform(const WaveformMatrix& waveform, const Scenario& scenario,
                       double input_snr) {
  scenario.validate();
  if (!(input_snr >= 0.0) || !std::isfinite(input_snr)) {
    throw std::domain_error("snr_of_waveform: input_snr must be finite and >= 0");
  }
  if (waveform.entries.rows() != scenario.array.n_tx) {
    throw std::invalid_argument("snr_of_waveform: waveform rows != n_tx");
  }
  const SteeringVector a_t =
      steering_vector(scenario.array, scenario.theta_t, ArrayKind::transmit);
  return scenario.array.n_rx * input_snr *
         (waveform.entries.adjoint() * a_t.entries).squaredNorm();
}

SnrBudget max_snr_closed_form(const Scenario& scenario, double input_snr) {
  scenario.validate();
  if (!(input_snr >= 0.0) || !std::isfinite(input_snr)) {
    throw std::domain_error("max_snr_closed_form: input_snr must be finite and >= 0");
  }
  const double dc_norm2 = scenario.d_c.squaredNorm();
  if (dc_norm2 == 0.0) {
    throw std::invalid_argument("max_snr_closed_form: d_c is the zero vector");
  }
  const double n_tx = scenario.array.n_tx;
  const double e_hat = scenario.e_t - dc_norm2 / n_tx;
  if (e_hat < 0.0) {
    throw InfeasibleScenarioError(-e_hat);
  }

  const double g = gain(scenario.array, scenario.theta_t, scenario.theta_c);
  const double f_max_sqrt =
      std::sqrt(e_hat * n_tx * (1.0 - g * g)) + g * std::sqrt(dc_norm2);
  const double f_max = f_max_sqrt * f_max_sqrt;
  const double f_mono = scenario.e_t * n_tx;

  SnrBudget budget;
  budget.gain = g;
  budget.zero_loss_gain = std::sqrt(dc_norm2 / f_mono);
  budget.snr_max = scenario.array.n_rx * input_snr * f_max;
  budget.mono_bound = scenario.array.n_rx * input_snr * f_mono;
  budget.loss_db = f_max > 0.0 ? 10.0 * std::log10(f_mono / f_max)
                               : std::numeric_limits<double>::infinity();
  return budget;
}

double zero_loss_gain(const Scenario& scenario) {
  scenario.validate();
  return std::sqrt(scenario.d_c.squaredNorm() / (scenario.e_t * scenario.array.n_tx));
}

std::vector<double> zero_loss_angles(const Scenario& scenario) {
  scenario.validate();
  const double g_star = zero_loss_gain(scenario);
  if (g_star > 1.0 + 1e-12) {
    throw InfeasibleScenarioError(scenario.d_c.squaredNorm() / scenario.array.n_tx -
                                  scenario.e_t);
  }

  const double half_pi = std::numbers::pi / 2.0;
  std::vector<double> roots;

  if (g_star >= 1.0 - 1e-12) {
    // The gain touches 1 only where sin(theta) matches sin(theta_t) modulo
    // the grating period 1/d; no bracketing interval exists there.
    const double s0 = std::sin(scenario.theta_t);
    const double period = 1.0 / scenario.array.d_tx;
    const long m_lo = static_cast<long>(std::ceil((-1.0 - s0) / period));
    const long m_hi = static_cast<long>(std::floor((1.0 - s0) / period));
    for (long m = m_lo; m <= m_hi; ++m) {
      roots.push_back(m == 0 ? scenario.theta_t : std::asin(s0 + m * period));
    }
    std::sort(roots.begin(), roots.end());
    return roots;
  }

  const auto h = [&](double theta) {
    return gain(scenario.array, scenario.theta_t, theta) - g_star;
  };

  // Grid anchored at theta_t so the mainlobe peak (where h > 0) lands on a
  // node; mirrored nodes around a broadside target are exact negations, which
  // keeps symmetric roots symmetric to the last bit.
  const double step = 1e-3;
  std::vector<double> grid;
  grid.push_back(-half_pi);
  const long k_lo = static_cast<long>(std::ceil((-half_pi - scenario.theta_t) / step));
  const long k_hi = static_cast<long>(std::floor((half_pi - scenario.theta_t) / step));
  for (long k = k_lo; k <= k_hi; ++k) {
    const double t = scenario.theta_t + k * step;
    if (t > -half_pi && t < half_pi) grid.push_back(t);
  }
  grid.push_back(half_pi);

  const auto bisect = [&](double lo, double hi, double f_lo) {
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = h(mid);
      if (f_mid == 0.0) return mid;
      if ((f_mid > 0.0) == (f_lo > 0.0)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  double f_prev = h(grid.front());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double f_cur = h(grid[i]);
    if (f_prev == 0.0) {
      roots.push_back(grid[i - 1]);
    } else if (f_cur != 0.0 && (f_prev > 0.0) != (f_cur > 0.0)) {
      roots.push_back(bisect(grid[i - 1], grid[i], f_prev));
    }
    f_prev = f_cur;
  }
  if (f_prev == 0.0) roots.push_back(grid.back());

  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-9; }),
              roots.end());
  return roots;
}

}  // namespace dfrc
