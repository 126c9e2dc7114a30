#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "dfrc/array.hpp"
#include "dfrc/detection.hpp"
#include "dfrc/parallel.hpp"
#include "dfrc/verify.hpp"
#include "dfrc/waveform.hpp"

#ifndef DFRC_TOOLS_VERSION
#define DFRC_TOOLS_VERSION "0.0.0"
#endif

namespace dfrc::tools {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex16(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::filesystem::path output_path(const ExperimentConfig& cfg,
                                  const std::string& filename) {
  std::filesystem::create_directories(cfg.output_dir);
  return std::filesystem::path(cfg.output_dir) / filename;
}

std::ofstream open_output(const ExperimentConfig& cfg,
                          const std::string& filename) {
  const auto path = output_path(cfg, filename);
  std::ofstream out(path, std::ios::binary);  // binary keeps LF on any host
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  return out;
}

void write_metadata(std::ostream& out, const ExperimentConfig& cfg) {
  out << "# config_hash=" << hex16(fnv1a64(cfg.canonical_text())) << "\n";
  out << "# seed=" << cfg.seed << "\n";
  out << "# version=" << DFRC_TOOLS_VERSION << "\n";
}

double db_of(double linear) { return 10.0 * std::log10(linear); }

double linear_of_db(double db) { return std::pow(10.0, db / 10.0); }

constexpr double kToRad = std::numbers::pi / 180.0;
constexpr double kToDeg = 180.0 / std::numbers::pi;

}  // namespace

int cmd_signal_check(const ExperimentConfig& cfg, std::ostream& log) {
  const Scenario sc = cfg.to_scenario();
  DesignResult design;
  try {
    design = design_optimal_waveform(sc);
  } catch (const InfeasibleScenarioError& e) {
    log << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  }

  const SteeringVector a_c =
      steering_vector(sc.array, sc.theta_c, ArrayKind::transmit);
  const Eigen::VectorXcd synthesized =
      synthesize_comm_signal(design.waveform, a_c);

  auto out = open_output(cfg, "signal.csv");
  write_metadata(out, cfg);
  out << "sample_index,desired_re,desired_im,synthesized_re,synthesized_im,"
         "abs_error\n";
  double max_error = 0.0;
  for (Eigen::Index l = 0; l < sc.d_c.size(); ++l) {
    const double err = std::abs(synthesized(l) - sc.d_c(l));
    max_error = std::max(max_error, err);
    out << l << "," << num(sc.d_c(l).real()) << "," << num(sc.d_c(l).imag())
        << "," << num(synthesized(l).real()) << ","
        << num(synthesized(l).imag()) << "," << num(err) << "\n";
  }

  log << "max_abs_error=" << num(max_error) << "\n";
  log << "wrote " << output_path(cfg, "signal.csv").string() << "\n";
  return max_error > 1e-6 ? kExitFailure : kExitOk;
}

int cmd_pd_curve(const ExperimentConfig& cfg, std::ostream& log) {
  const Scenario sc = cfg.to_scenario();
  DesignResult design;
  try {
    design = design_optimal_waveform(sc);
  } catch (const InfeasibleScenarioError& e) {
    log << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  }

  auto out = open_output(cfg, "pd_curve.csv");
  write_metadata(out, cfg);
  out << "input_snr_db,waveform_snr_db,p_d\n";
  for (const double input_db : cfg.input_snr_grid_db) {
    const double waveform_snr =
        snr_of_waveform(design.waveform, sc, linear_of_db(input_db));
    const double p_d = detection_probability(waveform_snr, cfg.p_fa);
    out << num(input_db) << "," << num(db_of(waveform_snr)) << "," << num(p_d)
        << "\n";
  }

  log << "wrote " << output_path(cfg, "pd_curve.csv").string() << "\n";
  return kExitOk;
}

int cmd_theta_sweep(const ExperimentConfig& cfg, std::ostream& log) {
  const Scenario base = cfg.to_scenario();
  const double input_snr = linear_of_db(cfg.sweep_input_snr_db);

  struct Row {
    double theta_c_deg = 0.0;
    double gain = 0.0;
    double snr_max_db = 0.0;
    double mono_bound_db = 0.0;
    double loss_db = 0.0;
    double p_d = 0.0;
    bool feasible = true;
  };

  const ThetaSweepSpec& sweep = cfg.theta_sweep;
  const long count = static_cast<long>(std::floor(
                         (sweep.stop_deg - sweep.start_deg) / sweep.step_deg +
                         1e-9)) +
                     1;
  std::vector<Row> rows(static_cast<std::size_t>(count));

  try {
    parallel_for(rows.size(), [&](std::size_t i) {
      // clamp: accumulated grid rounding must not push past the angle domain
      const double theta_deg = std::clamp(
          sweep.start_deg + static_cast<double>(i) * sweep.step_deg, -90.0, 90.0);
      Scenario sc = base;
      sc.theta_c = theta_deg * kToRad;
      const SnrBudget budget = max_snr_closed_form(sc, input_snr);
      Row& row = rows[i];
      row.theta_c_deg = theta_deg;
      row.gain = budget.gain;
      row.snr_max_db = db_of(budget.snr_max);
      row.mono_bound_db = db_of(budget.mono_bound);
      row.loss_db = budget.loss_db;
      row.p_d = detection_probability(budget.snr_max, cfg.p_fa);
    });
  } catch (const InfeasibleScenarioError& e) {
    log << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  }

  // Summary values: loss with the user on the mainlobe peak, loss at an exact
  // pattern null (none exists when N_T d_tx < 1), and the zero-loss angles.
  Scenario mainlobe = base;
  mainlobe.theta_c = base.theta_t;
  const double mainlobe_loss =
      max_snr_closed_form(mainlobe, input_snr).loss_db;

  const double null_sin = 1.0 / (base.array.n_tx * base.array.d_tx);
  double null_loss = std::numeric_limits<double>::quiet_NaN();
  if (null_sin <= 1.0) {
    Scenario at_null = base;
    at_null.theta_c = std::asin(null_sin);
    null_loss = max_snr_closed_form(at_null, input_snr).loss_db;
  }

  const std::vector<double> zero_loss = zero_loss_angles(base);

  auto out = open_output(cfg, "theta_sweep.csv");
  write_metadata(out, cfg);
  out << "theta_c_deg,gain,snr_max_db,mono_bound_db,loss_db,p_d,feasible\n";
  for (const Row& row : rows) {
    out << num(row.theta_c_deg) << "," << num(row.gain) << ","
        << num(row.snr_max_db) << "," << num(row.mono_bound_db) << ","
        << num(row.loss_db) << "," << num(row.p_d) << ","
        << (row.feasible ? 1 : 0) << "\n";
  }
  out << "# summary mainlobe_loss_db=" << num(mainlobe_loss) << "\n";
  out << "# summary exact_null_loss_db=" << num(null_loss) << "\n";
  out << "# summary zero_loss_angles_deg=";
  for (std::size_t i = 0; i < zero_loss.size(); ++i) {
    if (i) out << ",";
    out << num(zero_loss[i] * kToDeg);
  }
  out << "\n";

  log << "mainlobe_loss_db=" << num(mainlobe_loss) << "\n";
  log << "exact_null_loss_db=" << num(null_loss) << "\n";
  log << "wrote " << output_path(cfg, "theta_sweep.csv").string() << "\n";
  return kExitOk;
}

int cmd_verify(const ExperimentConfig& cfg, std::ostream& log) {
  auto out = open_output(cfg, "verify.txt");
  write_metadata(out, cfg);

  const Scenario sc = cfg.to_scenario();
  DesignResult design;
  try {
    design = design_optimal_waveform(sc);
  } catch (const InfeasibleScenarioError& e) {
    out << "check=feasibility value=" << num(-e.energy_deficit())
        << " limit=0 status=fail\n";
    out << "overall=infeasible\n";
    log << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  }

  bool all_pass = true;
  const auto emit = [&](const std::string& name, double value, double limit) {
    const bool pass = value <= limit;
    all_pass = all_pass && pass;
    const std::string line = "check=" + name + " value=" + num(value) +
                             " limit=" + num(limit) +
                             (pass ? " status=pass" : " status=fail");
    out << line << "\n";
    log << line << "\n";
  };

  const SteeringVector a_c =
      steering_vector(sc.array, sc.theta_c, ArrayKind::transmit);
  const Eigen::VectorXcd synthesized =
      synthesize_comm_signal(design.waveform, a_c);
  emit("comm_fidelity_max_abs",
       (synthesized - sc.d_c).cwiseAbs().maxCoeff(), 1e-9);

  const double expected_energy =
      design.degenerate_case == DesignCase::comm_equals_target
          ? sc.d_c.squaredNorm() / sc.array.n_tx
          : sc.e_t;
  emit("energy_saturation_rel",
       std::abs(design.waveform.energy / expected_energy - 1.0), 1e-12);

  const WaveformMatrix via_nullspace = design_via_nullspace(sc);
  emit("path_equivalence_max_abs",
       (design.waveform.entries - via_nullspace.entries).cwiseAbs().maxCoeff(),
       1e-9);

  const SnrBudget budget = max_snr_closed_form(sc, 1.0);
  emit("snr_closed_form_rel",
       std::abs(snr_of_waveform(design.waveform, sc, 1.0) - budget.snr_max) /
           budget.snr_max,
       1e-9);

  emit("gradient_check_rel", gradient_check(sc, cfg.seed), 1e-5);

  const OracleReport oracle = oracle_maximize(sc, 16, 20000, cfg.seed);
  emit("oracle_gap_rel", std::abs(oracle.relative_gap), 1e-6);
  emit("oracle_excess_rel", std::max(0.0, -oracle.relative_gap), 1e-6);

  // Monte Carlo operating point: a false-alarm rate the trial budget can
  // resolve (>= 100 expected counts) and an amplitude giving an 8 dB
  // waveform SNR, which puts P_D mid-range.
  const double p_fa_mc =
      std::min(0.5, std::max(cfg.p_fa, 100.0 / static_cast<double>(cfg.mc_trials)));
  const double snr_factor = snr_of_waveform(design.waveform, sc, 1.0);
  const double alpha =
      std::sqrt(linear_of_db(8.0) * sc.sigma2 / snr_factor);
  const MonteCarloReport mc = monte_carlo_detector(
      design.waveform, sc, {alpha, 0.0}, p_fa_mc, cfg.mc_trials, cfg.seed);
  out << "# mc p_fa=" << num(p_fa_mc) << " trials=" << mc.trials
      << " p_fa_hat=" << num(mc.p_fa_hat) << " p_d_hat=" << num(mc.p_d_hat)
      << " p_d_analytic=" << num(mc.p_d_analytic) << "\n";

  const double n = static_cast<double>(mc.trials);
  const double sd_fa = std::sqrt(p_fa_mc * (1.0 - p_fa_mc) / n);
  emit("mc_pfa_dev_sigmas", std::abs(mc.p_fa_hat - p_fa_mc) / sd_fa, 3.0);
  const double sd_d =
      std::sqrt(mc.p_d_analytic * (1.0 - mc.p_d_analytic) / n);
  emit("mc_pd_dev_sigmas", std::abs(mc.p_d_hat - mc.p_d_analytic) / sd_d, 3.0);

  const double stat_var_true = sc.sigma2 * alpha * alpha * snr_factor / 2.0;
  emit("mc_mean_dev_ses",
       std::abs(mc.stat_mean) / std::sqrt(stat_var_true / n), 5.0);
  emit("mc_var_dev_ses",
       std::abs(mc.stat_var - stat_var_true) /
           (stat_var_true * std::sqrt(2.0 / (n - 1.0))),
       5.0);

  out << (all_pass ? "overall=pass" : "overall=fail") << "\n";
  log << (all_pass ? "overall=pass" : "overall=fail") << "\n";
  log << "wrote " << output_path(cfg, "verify.txt").string() << "\n";
  return all_pass ? kExitOk : kExitFailure;
}

}  // namespace dfrc::tools
