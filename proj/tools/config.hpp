#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfrc/scenario.hpp"

namespace dfrc::tools {

enum class CommModulation { bpsk, explicit_vector };

struct ThetaSweepSpec {
  double start_deg = -90.0;
  double stop_deg = 90.0;
  double step_deg = 0.1;
};

/// Parse or validation failure; the message carries <origin>:<line> and the
/// offending field wherever that is known.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Experiment configuration in boundary units: angles in degrees, SNR in dB.
/// Defaults reproduce the reference operating point (16x16 half-wavelength
/// arrays, user at 32 degrees, 128 BPSK symbols of amplitude 0.1, energy
/// budget 1.5x the constraint minimum, P_FA = 1e-6).
struct ExperimentConfig {
  int n_tx = 16;
  int n_rx = 16;
  double d_tx_wavelengths = 0.5;
  double d_rx_wavelengths = 0.5;
  double theta_t_deg = 0.0;
  double theta_c_deg = 32.0;
  int code_length = 128;
  CommModulation comm_modulation = CommModulation::bpsk;
  double bpsk_amplitude = 0.1;
  std::string comm_symbols_file;          // explicit_vector only
  std::optional<double> e_t;              // absent: 1.5 ||d_c||^2 / N_T
  double sigma2 = 1.0;
  double p_fa = 1e-6;
  std::vector<double> input_snr_grid_db;  // defaulted in default_config()
  double sweep_input_snr_db = 0.0;
  ThetaSweepSpec theta_sweep;
  long long mc_trials = 1000000;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  // Resolved beside the file at parse time for explicit_vector.
  Eigen::VectorXcd explicit_symbols;

  /// Communication symbols: BPSK signs come from an RNG stream derived from
  /// `seed`, so they are reproducible and change with the seed.
  Eigen::VectorXcd comm_symbols() const;

  /// Resolved energy budget (explicit value or the 1.5x default).
  double resolved_e_t() const;

  /// Library-units scenario: radians inside, symbols resolved.
  Scenario to_scenario() const;

  /// Every resolved field (including the symbol values) as key=value lines in
  /// fixed order. Two configs behave identically iff these bytes match, which
  /// is what the CSV metadata hash is taken over.
  std::string canonical_text() const;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

ExperimentConfig default_config();

/// Flat key = value file; '#' comments, blank lines ignored. Unknown or
/// duplicate keys, type mismatches and range errors all throw ConfigError
/// with <path>:<line>. An empty file yields default_config().
ExperimentConfig parse_config(const std::string& path);

/// Same grammar from an in-memory string; `origin` labels error messages.
/// Relative comm_symbols_file paths resolve against `base_dir`.
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin,
                                   const std::string& base_dir);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(const std::string& data);

}  // namespace dfrc::tools
