#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "dfrc/scenario.hpp"
#include "experiments.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<long long> trials;
};

void add_common(CLI::App* sub, CommonOptions& opts) {
  sub->add_option("--config", opts.config_path,
                  "configuration file (key = value lines); omitted = defaults");
  sub->add_option("--out", opts.out_dir, "output directory override");
  sub->add_option("--seed", opts.seed, "RNG seed override");
  sub->add_option("--trials", opts.trials, "Monte Carlo trial count override");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dfrc::tools;

  CLI::App app{"Dual-function radar/communication waveform design experiments"};
  app.require_subcommand(1);
  CommonOptions opts;

  CLI::App* signal = app.add_subcommand(
      "signal-check", "compare the synthesized communication signal with the "
                      "desired symbol stream");
  CLI::App* pd = app.add_subcommand(
      "pd-curve", "detection probability of the optimal waveform across the "
                  "input SNR grid");
  CLI::App* sweep = app.add_subcommand(
      "theta-sweep", "closed-form SNR, loss and detection probability versus "
                     "user direction");
  CLI::App* verify = app.add_subcommand(
      "verify", "self-check report: design identities, ascent oracle, "
                "gradient and Monte Carlo checks");
  for (CLI::App* sub : {signal, pd, sweep, verify}) add_common(sub, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = opts.config_path.empty()
                               ? default_config()
                               : parse_config(opts.config_path);
    if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.trials) cfg.mc_trials = *opts.trials;
    cfg.validate();  // overrides can re-break a valid config

    if (signal->parsed()) return cmd_signal_check(cfg, std::cout);
    if (pd->parsed()) return cmd_pd_curve(cfg, std::cout);
    if (sweep->parsed()) return cmd_theta_sweep(cfg, std::cout);
    return cmd_verify(cfg, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const dfrc::InfeasibleScenarioError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
