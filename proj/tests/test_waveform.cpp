#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "dfrc/array.hpp"
#include "dfrc/rng.hpp"
#include "dfrc/scenario.hpp"
#include "dfrc/verify.hpp"
#include "dfrc/waveform.hpp"

using namespace dfrc;

namespace {

constexpr double kPi = std::numbers::pi;
double deg(double d) { return d * kPi / 180.0; }

// 16x16 half-wavelength reference scenario: user at 32 deg, 128 constant
// symbols of amplitude 0.1, budget 1.5x the constraint minimum.
Scenario reference_scenario() {
  Scenario sc;
  sc.array = {16, 16, 0.5, 0.5};
  sc.theta_t = 0.0;
  sc.theta_c = deg(32.0);
  sc.d_c = Eigen::VectorXcd::Constant(128, std::complex<double>(0.1, 0.0));
  sc.e_t = 1.5 * sc.d_c.squaredNorm() / sc.array.n_tx;
  sc.sigma2 = 1.0;
  return sc;
}

Scenario random_scenario(SplitMix64& rng) {
  const int nts[] = {2, 4, 8, 16};
  const int ls[] = {1, 4, 16, 64};
  Scenario sc;
  sc.array = {nts[rng.next() % 4], 1 + static_cast<int>(rng.next() % 8), 0.5, 0.5};
  sc.theta_t = deg(rng.uniform(-80.0, 80.0));
  sc.theta_c = deg(rng.uniform(-80.0, 80.0));
  sc.d_c.resize(ls[rng.next() % 4]);
  for (Eigen::Index i = 0; i < sc.d_c.size(); ++i) {
    sc.d_c(i) = rng.gaussian_complex();
  }
  const double surplus = rng.uniform(0.0, 0.99);
  sc.e_t = (sc.d_c.squaredNorm() / sc.array.n_tx) / (1.0 - surplus);
  sc.sigma2 = 1.0;
  return sc;
}

}  // namespace

TEST_CASE("null-space basis is semi-unitary and annihilates a_c") {
  SplitMix64 rng(31);
  for (int i = 0; i < 60; ++i) {
    const int n = 2 + static_cast<int>(rng.next() % 15);
    const ArrayConfig cfg{n, 1, 0.5, 0.5};
    const auto a_c =
        steering_vector(cfg, deg(rng.uniform(-89.0, 89.0)), ArrayKind::transmit);
    const Eigen::MatrixXcd b = null_space_basis(a_c).entries;

    REQUIRE(b.rows() == n);
    REQUIRE(b.cols() == n - 1);
    CHECK((b.adjoint() * b - Eigen::MatrixXcd::Identity(n - 1, n - 1)).norm() <
          1e-12);
    CHECK((a_c.entries.adjoint() * b).norm() < 1e-12);
    const Eigen::MatrixXcd projector =
        Eigen::MatrixXcd::Identity(n, n) -
        a_c.entries * a_c.entries.adjoint() / static_cast<double>(n);
    CHECK((b * b.adjoint() - projector).norm() < 1e-12);
  }
}

TEST_CASE("null-space basis rejects length-1 vectors") {
  SteeringVector a;
  a.entries = Eigen::VectorXcd::Ones(1);
  CHECK_THROWS_AS(null_space_basis(a), std::invalid_argument);
}

TEST_CASE("residual energy at the reference point") {
  const Scenario sc = reference_scenario();
  // e_t - ||d_c||^2 / N_T = 0.12 - 0.08
  CHECK(residual_energy(sc) == doctest::Approx(0.04).epsilon(1e-12));
  Scenario tight = sc;
  tight.e_t = sc.d_c.squaredNorm() / sc.array.n_tx;
  CHECK(residual_energy(tight) == 0.0);
  tight.e_t *= 0.5;
  CHECK(residual_energy(tight) < 0.0);
}

TEST_CASE("reference design: objective, energy, constraint, decomposition") {
  const Scenario sc = reference_scenario();
  const DesignResult res = design_optimal_waveform(sc);

  // 25-digit evaluation of (sqrt(e_hat N (1-G^2)) + G ||d_c||)^2.
  CHECK(res.achieved_snr_factor ==
        doctest::Approx(0.7464552649346332579629985).epsilon(1e-12));
  CHECK(res.waveform.energy == doctest::Approx(sc.e_t).epsilon(1e-12));
  CHECK(res.degenerate_case == DesignCase::generic);
  CHECK(res.gain == doctest::Approx(0.05772686734293844793593802).epsilon(1e-13));
  CHECK(res.residual_energy == doctest::Approx(0.04).epsilon(1e-12));

  // exact communication constraint
  const auto a_c = steering_vector(sc.array, sc.theta_c, ArrayKind::transmit);
  const Eigen::VectorXcd synthesized = synthesize_comm_signal(res.waveform, a_c);
  CHECK((synthesized - sc.d_c).cwiseAbs().maxCoeff() < 1e-12);

  // beamformer decomposition recomposes the waveform
  const auto a_t = steering_vector(sc.array, sc.theta_t, ArrayKind::transmit);
  const Eigen::VectorXcd w =
      res.alpha1 * a_c.entries + res.alpha2 * a_t.entries;
  CHECK((res.w - w).norm() < 1e-14);
  CHECK((res.waveform.entries - w * sc.d_c.transpose()).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("optimal waveform is rank one") {
  SplitMix64 rng(37);
  for (int i = 0; i < 20; ++i) {
    const Scenario sc = random_scenario(rng);
    const DesignResult res = design_optimal_waveform(sc);
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(res.waveform.entries);
    const auto& sv = svd.singularValues();
    REQUIRE(sv(0) > 0.0);
    if (sv.size() > 1) {
      CHECK(sv(1) <= 1e-12 * sv(0));
    }
  }
}

TEST_CASE("both construction routes agree entrywise") {
  SplitMix64 rng(41);
  for (int i = 0; i < 60; ++i) {
    const Scenario sc = random_scenario(rng);
    const WaveformMatrix direct = design_optimal_waveform(sc).waveform;
    const WaveformMatrix via_null = design_via_nullspace(sc);
    const double scale = std::max(1.0, direct.entries.cwiseAbs().maxCoeff());
    CHECK((direct.entries - via_null.entries).cwiseAbs().maxCoeff() <
          1e-9 * scale);
  }
}

TEST_CASE("reduced-problem identities: ||u||, ||q||, objective chain") {
  SplitMix64 rng(43);
  for (int i = 0; i < 40; ++i) {
    const Scenario sc = random_scenario(rng);
    const ReducedProblem problem = ReducedProblem::from_scenario(sc);
    const double n = sc.array.n_tx;
    const double g = gain(sc.array, sc.theta_t, sc.theta_c);

    // u = B^H a_t has squared norm N_T (1 - G^2); q has norm G ||d_c||.
    CHECK(problem.u.squaredNorm() ==
          doctest::Approx(n * (1.0 - g * g)).epsilon(1e-11));
    CHECK(problem.q.norm() ==
          doctest::Approx(g * sc.d_c.norm()).epsilon(1e-11));

    // Pulling the designed waveform back through S = S_hat + B V must land
    // the reduced objective exactly on both the achieved SNR factor and the
    // closed-form optimum: the chain is tight end to end.
    const DesignResult res = design_optimal_waveform(sc);
    const auto a_c = steering_vector(sc.array, sc.theta_c, ArrayKind::transmit);
    const Eigen::MatrixXcd s_hat = a_c.entries * sc.d_c.transpose() / n;
    const Eigen::MatrixXcd b = null_space_basis(a_c).entries;
    const Eigen::MatrixXcd v = b.adjoint() * (res.waveform.entries - s_hat);
    const double f = problem.value(v);
    CHECK(f == doctest::Approx(res.achieved_snr_factor).epsilon(1e-9));
    CHECK(f == doctest::Approx(problem.closed_form_optimum()).epsilon(1e-9));
  }
}

TEST_CASE("achieved objective is monotone in the energy budget") {
  SplitMix64 rng(47);
  for (int i = 0; i < 25; ++i) {
    Scenario sc = random_scenario(rng);
    const double f_low = design_optimal_waveform(sc).achieved_snr_factor;
    sc.e_t *= 1.0 + rng.uniform(0.1, 3.0);
    const double f_high = design_optimal_waveform(sc).achieved_snr_factor;
    CHECK(f_high >= f_low * (1.0 - 1e-12));
  }
}

TEST_CASE("two-element hand example, frozen entries") {
  // N_T = 2, L = 1, target at 30 deg, user at 90 deg (array endfire),
  // d_c = 0.1, e_t = 0.03. The optimum was worked out by hand:
  //   S = [0.05 + i sqrt(0.025)/2, -0.05 + i sqrt(0.025)/2] with the second
  // component carrying the residual energy along u.
  Scenario sc;
  sc.array = {2, 1, 0.5, 0.5};
  sc.theta_t = kPi / 6.0;
  sc.theta_c = kPi / 2.0;
  sc.d_c = Eigen::VectorXcd::Constant(1, std::complex<double>(0.1, 0.0));
  sc.e_t = 0.03;
  const DesignResult res = design_optimal_waveform(sc);

  const std::complex<double> s0(0.05, 0.1118033988749894848204587);
  const std::complex<double> s1(-0.05, 0.1118033988749894848204587);
  CHECK(std::abs(res.waveform.entries(0, 0) - s0) < 1e-15);
  CHECK(std::abs(res.waveform.entries(1, 0) - s1) < 1e-15);
  CHECK(res.achieved_snr_factor ==
        doctest::Approx(0.05236067977499789696409174).epsilon(1e-12));
}

TEST_CASE("user in a pattern null: energy goes to the target unharmed") {
  // sin(theta_c) = 1/8 nulls a 16-element half-wavelength pattern exactly.
  Scenario sc = reference_scenario();
  sc.theta_c = std::asin(0.125);
  const DesignResult res = design_optimal_waveform(sc);

  CHECK(res.degenerate_case == DesignCase::comm_at_null);
  CHECK(res.gain < 1e-12);
  // G = 0 limit of the closed form: e_hat N_T
  CHECK(res.achieved_snr_factor ==
        doctest::Approx(0.04 * 16.0).epsilon(1e-10));
  CHECK(res.waveform.energy == doctest::Approx(sc.e_t).epsilon(1e-12));
  const auto a_c = steering_vector(sc.array, sc.theta_c, ArrayKind::transmit);
  CHECK((synthesize_comm_signal(res.waveform, a_c) - sc.d_c)
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  const WaveformMatrix via_null = design_via_nullspace(sc);
  CHECK((res.waveform.entries - via_null.entries).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("user on the mainlobe peak: surplus energy stays unspent") {
  Scenario sc = reference_scenario();
  sc.theta_c = sc.theta_t;
  const DesignResult res = design_optimal_waveform(sc);

  CHECK(res.degenerate_case == DesignCase::comm_equals_target);
  CHECK(res.gain == 1.0);
  // minimum-energy waveform a_c d_c^T / N_T; the objective is ||d_c||^2
  CHECK(res.achieved_snr_factor ==
        doctest::Approx(sc.d_c.squaredNorm()).epsilon(1e-12));
  CHECK(res.waveform.energy ==
        doctest::Approx(sc.d_c.squaredNorm() / sc.array.n_tx).epsilon(1e-12));
  CHECK(res.residual_energy == doctest::Approx(0.04).epsilon(1e-12));
  const auto a_c = steering_vector(sc.array, sc.theta_c, ArrayKind::transmit);
  CHECK((synthesize_comm_signal(res.waveform, a_c) - sc.d_c)
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  const WaveformMatrix via_null = design_via_nullspace(sc);
  CHECK((res.waveform.entries - via_null.entries).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("zero residual energy forces the minimum-energy waveform") {
  Scenario sc = reference_scenario();
  sc.e_t = sc.d_c.squaredNorm() / sc.array.n_tx;
  const DesignResult res = design_optimal_waveform(sc);
  const auto a_c = steering_vector(sc.array, sc.theta_c, ArrayKind::transmit);
  const Eigen::MatrixXcd s_hat =
      a_c.entries * sc.d_c.transpose() / static_cast<double>(sc.array.n_tx);
  CHECK((res.waveform.entries - s_hat).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(res.residual_energy == 0.0);
}

TEST_CASE("degenerate inputs raise the documented errors") {
  Scenario sc = reference_scenario();

  Scenario infeasible = sc;
  infeasible.e_t = 0.5 * sc.d_c.squaredNorm() / sc.array.n_tx;
  CHECK_THROWS_AS(design_optimal_waveform(infeasible), InfeasibleScenarioError);
  CHECK_THROWS_AS(design_via_nullspace(infeasible), InfeasibleScenarioError);
  try {
    design_optimal_waveform(infeasible);
  } catch (const InfeasibleScenarioError& e) {
    CHECK(e.energy_deficit() == doctest::Approx(0.04).epsilon(1e-12));
  }

  Scenario zero_symbols = sc;
  zero_symbols.d_c.setZero();
  CHECK_THROWS_AS(design_optimal_waveform(zero_symbols), std::invalid_argument);

  Scenario empty = sc;
  empty.d_c.resize(0);
  CHECK_THROWS_AS(design_optimal_waveform(empty), std::invalid_argument);

  const DesignResult res = design_optimal_waveform(sc);
  SteeringVector wrong;
  wrong.entries = Eigen::VectorXcd::Ones(7);
  CHECK_THROWS_AS(synthesize_comm_signal(res.waveform, wrong),
                  std::invalid_argument);
}
