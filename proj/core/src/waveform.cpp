#include "dfrc/waveform.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace dfrc {

namespace {

// Gains this close to the endpoints select the degenerate branches; the
// generic coefficients divide by ||u|| ||q||, which vanishes in both limits.
constexpr double kDegenerateTol = 1e-12;

struct DesignInputs {
  SteeringVector a_t;
  SteeringVector a_c;
  std::complex<double> bp;  // B(theta_t, theta_c)
  double g = 0.0;
  double dc_norm2 = 0.0;
  double e_hat = 0.0;
};

DesignInputs prepare(const Scenario& scenario) {
  scenario.validate();
  DesignInputs in;
  in.dc_norm2 = scenario.d_c.squaredNorm();
  if (in.dc_norm2 == 0.0) {
    throw std::invalid_argument("design: d_c is the zero vector");
  }
  in.e_hat = scenario.e_t - in.dc_norm2 / scenario.array.n_tx;
  if (in.e_hat < 0.0) {
    throw InfeasibleScenarioError(-in.e_hat);
  }
  in.a_t = steering_vector(scenario.array, scenario.theta_t, ArrayKind::transmit);
  in.a_c = steering_vector(scenario.array, scenario.theta_c, ArrayKind::transmit);
  in.bp = beampattern(scenario.array, scenario.theta_t, scenario.theta_c);
  in.g = std::min(std::abs(in.bp), 1.0);
  return in;
}

DesignCase classify(double g) {
  if (g >= 1.0 - kDegenerateTol) return DesignCase::comm_equals_target;
  if (g <= kDegenerateTol) return DesignCase::comm_at_null;
  return DesignCase::generic;
}

}  // namespace

NullSpaceBasis null_space_basis(const SteeringVector& a_c) {
  const Eigen::VectorXcd& x = a_c.entries;
  const Eigen::Index n = x.size();
  if (n < 2) {
    throw std::invalid_argument("null_space_basis: need length >= 2");
  }

  // One complex Householder reflection P = I - 2 h h^H / (h^H h) with
  // h = x - alpha e1 and alpha = -exp(i arg(x0)) ||x||. P is Hermitian and
  // unitary, P x = alpha e1, and the sign of alpha keeps h0 away from
  // cancellation. Columns 2..n of P are then an orthonormal basis of the
  // orthogonal complement of x.
  const double norm = x.norm();
  const std::complex<double> x0 = x(0);
  const std::complex<double> phase =
      std::abs(x0) > 0.0 ? x0 / std::abs(x0) : std::complex<double>(1.0, 0.0);
  const std::complex<double> alpha = -phase * norm;

  Eigen::VectorXcd h = x;
  h(0) -= alpha;
  const double h2 = h.squaredNorm();

  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(n, n);
  p.noalias() -= (2.0 / h2) * (h * h.adjoint());

  NullSpaceBasis basis;
  basis.entries = p.rightCols(n - 1);
  return basis;
}

double residual_energy(const Scenario& scenario) {
  scenario.validate();
  return scenario.e_t - scenario.d_c.squaredNorm() / scenario.array.n_tx;
}

DesignResult design_optimal_waveform(const Scenario& scenario) {
  const DesignInputs in = prepare(scenario);
  const double n_tx = scenario.array.n_tx;

  DesignResult result;
  result.residual_energy = in.e_hat;
  result.gain = in.g;
  result.degenerate_case = classify(in.g);

  switch (result.degenerate_case) {
    case DesignCase::comm_equals_target: {
      // The null space of a_c^H is orthogonal to a_t as well, so spending
      // the residual energy cannot raise the objective. Return the
      // minimum-energy waveform and leave the surplus unspent.
      result.alpha1 = 1.0 / n_tx;
      result.alpha2 = 0.0;
      break;
    }
    case DesignCase::comm_at_null: {
      // Limit of the generic coefficients as q -> 0 with the undetermined
      // unit phase fixed to 1; keeps the waveform rank 1 and deterministic.
      const double u_norm = std::sqrt(n_tx * (1.0 - in.g * in.g));
      const double beta = std::sqrt(in.e_hat) / (u_norm * std::sqrt(in.dc_norm2));
      result.alpha1 = 1.0 / n_tx - beta * in.bp;
      result.alpha2 = beta;
      break;
    }
    case DesignCase::generic: {
      const double u_norm = std::sqrt(n_tx * (1.0 - in.g * in.g));
      const double q_norm = in.g * std::sqrt(in.dc_norm2);
      const double scale = std::sqrt(in.e_hat) / (u_norm * q_norm);
      result.alpha1 = 1.0 / n_tx - scale * in.g * in.g;
      result.alpha2 = scale * std::conj(in.bp);
      break;
    }
  }

  result.w = result.alpha1 * in.a_c.entries + result.alpha2 * in.a_t.entries;
  result.waveform = WaveformMatrix(result.w * scenario.d_c.transpose());
  result.achieved_snr_factor =
      (result.waveform.entries.adjoint() * in.a_t.entries).squaredNorm();
  return result;
}

WaveformMatrix design_via_nullspace(const Scenario& scenario) {
  const DesignInputs in = prepare(scenario);
  const double n_tx = scenario.array.n_tx;

  const Eigen::MatrixXcd s_hat =
      (in.a_c.entries * scenario.d_c.transpose()) / n_tx;
  const Eigen::MatrixXcd b = null_space_basis(in.a_c).entries;
  const Eigen::VectorXcd u = b.adjoint() * in.a_t.entries;
  const Eigen::VectorXcd q = s_hat.adjoint() * in.a_t.entries;
  const double sqrt_e_hat = std::sqrt(in.e_hat);

  Eigen::MatrixXcd v;
  switch (classify(in.g)) {
    case DesignCase::comm_equals_target:
      // u = 0: any feasible V adds nothing, keep the forced part only.
      v = Eigen::MatrixXcd::Zero(b.cols(), scenario.code_length());
      break;
    case DesignCase::comm_at_null: {
      // q = 0 leaves the right factor free up to unit norm; fix it to the
      // same direction the limit of the generic branch selects.
      const Eigen::VectorXcd x = scenario.d_c.conjugate() / std::sqrt(in.dc_norm2);
      v = sqrt_e_hat * (u / u.norm()) * x.adjoint();
      break;
    }
    case DesignCase::generic:
      v = sqrt_e_hat * (u / u.norm()) * (q / q.norm()).adjoint();
      break;
  }

  return WaveformMatrix(s_hat + b * v);
}

Eigen::VectorXcd synthesize_comm_signal(const WaveformMatrix& waveform,
                                        const SteeringVector& a_c) {
  if (waveform.entries.rows() != a_c.entries.size()) {
    throw std::invalid_argument(
        "synthesize_comm_signal: waveform rows != steering length");
  }
  return (a_c.entries.adjoint() * waveform.entries).transpose();
}

}  // namespace dfrc
