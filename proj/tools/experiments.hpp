#pragma once

#include <iosfwd>

#include "config.hpp"

namespace dfrc::tools {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitInfeasible = 3;

/// Synthesized vs. desired communication signal, written to
/// <output_dir>/signal.csv. Prints the max per-sample error; returns
/// kExitFailure when it exceeds 1e-6, kExitInfeasible when the energy budget
/// cannot cover the constraint.
int cmd_signal_check(const ExperimentConfig& cfg, std::ostream& log);

/// Detection probability of the optimal waveform across the configured input
/// SNR grid, written to <output_dir>/pd_curve.csv. The CSV rows are exactly
/// detection_probability(snr_of_waveform(...)) pointwise; the command adds no
/// arithmetic of its own.
int cmd_pd_curve(const ExperimentConfig& cfg, std::ostream& log);

/// Closed-form performance versus user direction, one row per theta_c, with
/// a trailing summary block (mainlobe loss, exact-null loss, zero-loss
/// angles), written to <output_dir>/theta_sweep.csv. Rows evaluate
/// concurrently; output order is by theta_c regardless of scheduling.
int cmd_theta_sweep(const ExperimentConfig& cfg, std::ostream& log);

/// Self-check report written to <output_dir>/verify.txt: one
/// "check=<name> value=<v> limit=<l> status=pass|fail" line per invariant
/// (design identities, ascent oracle, gradient check, Monte Carlo detector),
/// then "overall=pass|fail". Byte-identical for a fixed (config, seed).
int cmd_verify(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace dfrc::tools
