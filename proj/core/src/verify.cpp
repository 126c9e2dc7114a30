#include "dfrc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dfrc/array.hpp"
#include "dfrc/detection.hpp"
#include "dfrc/parallel.hpp"
#include "dfrc/rng.hpp"

namespace dfrc {

namespace {

Eigen::MatrixXcd random_matrix(Eigen::Index rows, Eigen::Index cols,
                               SplitMix64& rng) {
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      m(i, j) = rng.gaussian_complex();
    }
  }
  return m;
}

void project_onto_ball(Eigen::MatrixXcd& v, double radius) {
  const double norm = v.norm();
  if (norm > radius) {
    if (radius == 0.0) {
      v.setZero();
    } else {
      v *= radius / norm;
    }
  }
}

}  // namespace

ReducedProblem ReducedProblem::from_scenario(const Scenario& scenario) {
  scenario.validate();
  const double dc_norm2 = scenario.d_c.squaredNorm();
  if (dc_norm2 == 0.0) {
    throw std::invalid_argument("ReducedProblem: d_c is the zero vector");
  }
  const double e_hat = scenario.e_t - dc_norm2 / scenario.array.n_tx;
  if (e_hat < 0.0) {
    throw InfeasibleScenarioError(-e_hat);
  }

  const SteeringVector a_t =
      steering_vector(scenario.array, scenario.theta_t, ArrayKind::transmit);
  const SteeringVector a_c =
      steering_vector(scenario.array, scenario.theta_c, ArrayKind::transmit);

  ReducedProblem problem;
  problem.u = null_space_basis(a_c).entries.adjoint() * a_t.entries;
  // q = S_hat^H a_t collapses to B(theta_t, theta_c) conj(d_c): S_hat is the
  // outer product a_c d_c^T / N_T, so only the scalar a_c^H a_t survives.
  problem.q = beampattern(scenario.array, scenario.theta_t, scenario.theta_c) *
              scenario.d_c.conjugate();
  problem.e_hat = e_hat;
  return problem;
}

double ReducedProblem::value(const Eigen::MatrixXcd& v) const {
  const Eigen::RowVectorXcd uhv = u.adjoint() * v;
  const std::complex<double> cross = uhv * q;
  return uhv.squaredNorm() + 2.0 * cross.real() + q.squaredNorm();
}

Eigen::MatrixXcd ReducedProblem::gradient(const Eigen::MatrixXcd& v) const {
  return 2.0 * (u * (u.adjoint() * v + q.adjoint()));
}

double ReducedProblem::closed_form_optimum() const {
  const double root = std::sqrt(e_hat) * u.norm() + q.norm();
  return root * root;
}

OracleReport oracle_maximize(const Scenario& scenario, int restarts,
                             int max_iters, std::uint64_t seed) {
  if (restarts < 1 || max_iters < 1) {
    throw std::invalid_argument("oracle_maximize: restarts and max_iters must be >= 1");
  }
  const ReducedProblem problem = ReducedProblem::from_scenario(scenario);
  const double radius = std::sqrt(problem.e_hat);
  const Eigen::Index rows = problem.u.size();
  const Eigen::Index cols = problem.q.size();

  OracleReport report;
  report.restarts = restarts;
  report.closed_form_value = problem.closed_form_optimum();
  report.best_value = -std::numeric_limits<double>::infinity();

  for (int r = 0; r < restarts; ++r) {
    SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(r));

    Eigen::MatrixXcd v = random_matrix(rows, cols, rng);
    const double start_norm = v.norm();
    if (start_norm > 0.0) {
      // uniform radius fraction keeps starts spread through the ball instead
      // of piling up on the sphere
      v *= radius * rng.uniform01() / start_norm;
    }

    double f = problem.value(v);
    double step = 1.0;
    bool converged = false;

    for (int it = 0; it < max_iters; ++it) {
      ++report.iterations_total;
      const Eigen::MatrixXcd grad = problem.gradient(v);
      step = std::min(step * 2.0, 1e6);

      bool accepted = false;
      double f_next = f;
      Eigen::MatrixXcd v_next;
      for (int bt = 0; bt < 60; ++bt) {
        v_next = v + step * grad;
        project_onto_ball(v_next, radius);
        f_next = problem.value(v_next);
        if (f_next > f) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }

      if (!accepted) {
        // no ascent direction at line-search resolution: stationary point
        converged = true;
        break;
      }
      const double rel_change = (f_next - f) / std::max(std::abs(f_next), 1e-300);
      v.swap(v_next);
      f = f_next;
      if (rel_change < 1e-12) {
        converged = true;
        break;
      }
    }

    if (f > report.best_value) {
      report.best_value = f;
      report.converged = converged;
    }
  }

  report.relative_gap = (report.closed_form_value - report.best_value) /
                        std::max(report.closed_form_value, 1e-300);
  return report;
}

double gradient_check(const Scenario& scenario, std::uint64_t seed) {
  const ReducedProblem problem = ReducedProblem::from_scenario(scenario);
  SplitMix64 rng = SplitMix64::stream(seed, 0);
  const Eigen::Index rows = problem.u.size();
  const Eigen::Index cols = problem.q.size();

  // The ball constraint plays no role here: f is a smooth quadratic on the
  // whole space, so the check probes an unconstrained random point.
  Eigen::MatrixXcd v = random_matrix(rows, cols, rng);
  const Eigen::MatrixXcd grad = problem.gradient(v);

  const double h = 1e-5;
  double worst = 0.0;
  const int probes = 24;
  for (int p = 0; p < probes; ++p) {
    const Eigen::Index i = static_cast<Eigen::Index>(rng.next() % rows);
    const Eigen::Index j = static_cast<Eigen::Index>(rng.next() % cols);
    const bool imaginary_part = (p % 2) == 1;
    const std::complex<double> delta =
        imaginary_part ? std::complex<double>(0.0, h) : std::complex<double>(h, 0.0);

    Eigen::MatrixXcd v_plus = v;
    Eigen::MatrixXcd v_minus = v;
    v_plus(i, j) += delta;
    v_minus(i, j) -= delta;
    const double fd = (problem.value(v_plus) - problem.value(v_minus)) / (2.0 * h);
    const double analytic =
        imaginary_part ? grad(i, j).imag() : grad(i, j).real();
    const double rel =
        std::abs(fd - analytic) / std::max(1.0, std::abs(fd) + std::abs(analytic));
    worst = std::max(worst, rel);
  }
  return worst;
}

double threshold_for_pfa(const WaveformMatrix& waveform,
                         const Scenario& scenario,
                         std::complex<double> alpha_t, double p_fa) {
  if (!(p_fa > 0.0 && p_fa <= 0.5)) {
    throw std::domain_error("threshold_for_pfa: p_fa must lie in (0, 0.5]");
  }
  scenario.validate();
  if (waveform.entries.rows() != scenario.array.n_tx) {
    throw std::invalid_argument("threshold_for_pfa: waveform rows != n_tx");
  }
  const SteeringVector a_t =
      steering_vector(scenario.array, scenario.theta_t, ArrayKind::transmit);
  const double as_norm2 = scenario.array.n_rx *
                          (waveform.entries.adjoint() * a_t.entries).squaredNorm();
  return std::sqrt(scenario.sigma2) * std::abs(alpha_t) * std::sqrt(as_norm2) *
         erfc_inv(2.0 * p_fa);
}

MonteCarloReport monte_carlo_detector(const WaveformMatrix& waveform,
                                      const Scenario& scenario,
                                      std::complex<double> alpha_t,
                                      double p_fa, long long trials,
                                      std::uint64_t seed) {
  if (trials < 10000) {
    throw std::invalid_argument("monte_carlo_detector: trials must be >= 10^4");
  }
  if (!(p_fa > 0.0 && p_fa <= 0.5)) {
    throw std::domain_error("monte_carlo_detector: p_fa must lie in (0, 0.5]");
  }
  scenario.validate();
  if (waveform.entries.rows() != scenario.array.n_tx) {
    throw std::invalid_argument("monte_carlo_detector: waveform rows != n_tx");
  }

  const SteeringVector a_t =
      steering_vector(scenario.array, scenario.theta_t, ArrayKind::transmit);
  const SteeringVector b =
      steering_vector(scenario.array, scenario.theta_t, ArrayKind::receive);
  const Eigen::VectorXcd filter = waveform.entries.adjoint() * a_t.entries;
  const double as_norm2 = scenario.array.n_rx * filter.squaredNorm();
  const double abs_alpha = std::abs(alpha_t);
  const double sigma = std::sqrt(scenario.sigma2);
  const double threshold =
      sigma * abs_alpha * std::sqrt(as_norm2) * erfc_inv(2.0 * p_fa);
  const double mean_h1 = abs_alpha * abs_alpha * as_norm2;
  const std::complex<double> alpha_conj = std::conj(alpha_t);

  constexpr long long kBlock = 65536;
  const std::size_t n_blocks =
      static_cast<std::size_t>((trials + kBlock - 1) / kBlock);

  struct BlockStats {
    long long above_h0 = 0;
    long long above_h1 = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  std::vector<BlockStats> blocks(n_blocks);

  const int n_rx = scenario.array.n_rx;
  const Eigen::Index code_len = filter.size();
  parallel_for(n_blocks, [&](std::size_t bi) {
    SplitMix64 rng = SplitMix64::stream(seed, bi);
    const long long count = std::min<long long>(
        kBlock, trials - static_cast<long long>(bi) * kBlock);
    BlockStats st;
    for (long long t = 0; t < count; ++t) {
      // z = b^T N (S^H a); drawing N row by row avoids materializing it
      std::complex<double> z = 0.0;
      for (int k = 0; k < n_rx; ++k) {
        std::complex<double> row_dot = 0.0;
        for (Eigen::Index l = 0; l < code_len; ++l) {
          row_dot += rng.gaussian_complex() * filter(l);
        }
        z += b.entries(k) * row_dot;
      }
      const double stat_h0 = (alpha_conj * (sigma * z)).real();
      st.sum += stat_h0;
      st.sum_sq += stat_h0 * stat_h0;
      if (stat_h0 > threshold) ++st.above_h0;
      if (mean_h1 + stat_h0 > threshold) ++st.above_h1;
    }
    blocks[bi] = st;
  });

  long long above_h0 = 0;
  long long above_h1 = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const BlockStats& st : blocks) {
    above_h0 += st.above_h0;
    above_h1 += st.above_h1;
    sum += st.sum;
    sum_sq += st.sum_sq;
  }

  MonteCarloReport report;
  report.trials = trials;
  report.seed = seed;
  report.threshold = threshold;
  const double n = static_cast<double>(trials);
  report.p_fa_hat = static_cast<double>(above_h0) / n;
  report.p_d_hat = static_cast<double>(above_h1) / n;
  report.p_fa_analytic = p_fa;
  report.p_d_analytic = detection_probability(
      mean_h1 / scenario.sigma2, p_fa);
  report.stat_mean = sum / n;
  report.stat_var = (sum_sq - n * report.stat_mean * report.stat_mean) / (n - 1.0);
  return report;
}

}  // namespace dfrc
