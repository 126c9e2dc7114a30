#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "dfrc/detection.hpp"
#include "dfrc/waveform.hpp"
#include "experiments.hpp"

using namespace dfrc::tools;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

/// Data rows of a CSV body: comment and header lines stripped, fields split.
std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  bool header_seen = false;
  for (const std::string& line : lines_of(text)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      row.push_back(std::strtod(field.c_str(), nullptr));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path("tmp_test_experiments") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentConfig quick_config(const std::string& out_dir) {
  ExperimentConfig cfg = default_config();
  cfg.output_dir = out_dir;
  return cfg;
}

}  // namespace

TEST_CASE("empty and comment-only texts yield the defaults") {
  const ExperimentConfig defaults = default_config();
  CHECK(parse_config_text("", "mem", ".").canonical_text() ==
        defaults.canonical_text());
  CHECK(parse_config_text("# nothing here\n\n   \n", "mem", ".")
            .canonical_text() == defaults.canonical_text());
  CHECK(defaults.input_snr_grid_db.size() == 41);  // -5:15:0.5
}

TEST_CASE("scalar keys, auto energy and grid syntaxes") {
  const std::string text =
      "n_tx = 8\n"
      "theta_c_deg = 20.5   # inline comment\n"
      "e_t = auto\n"
      "input_snr_grid_db = 0,2.5,5\n"
      "sweep_input_snr_db = 3\n"
      "theta_sweep_start_deg = -30\n"
      "theta_sweep_stop_deg = 30\n"
      "theta_sweep_step_deg = 0.5\n"
      "seed = 42\n";
  const ExperimentConfig cfg = parse_config_text(text, "mem", ".");
  CHECK(cfg.n_tx == 8);
  CHECK(cfg.theta_c_deg == 20.5);
  CHECK(!cfg.e_t.has_value());
  CHECK(cfg.resolved_e_t() ==
        doctest::Approx(1.5 * cfg.comm_symbols().squaredNorm() / 8.0)
            .epsilon(1e-14));
  REQUIRE(cfg.input_snr_grid_db.size() == 3);
  CHECK(cfg.input_snr_grid_db[1] == 2.5);
  CHECK(cfg.sweep_input_snr_db == 3.0);
  CHECK(cfg.theta_sweep.step_deg == 0.5);
  CHECK(cfg.seed == 42);

  const ExperimentConfig ranged =
      parse_config_text("input_snr_grid_db = -5:15:0.5\n", "mem", ".");
  REQUIRE(ranged.input_snr_grid_db.size() == 41);
  CHECK(ranged.input_snr_grid_db.front() == -5.0);
  CHECK(ranged.input_snr_grid_db.back() == 15.0);

  const ExperimentConfig fixed = parse_config_text("e_t = 0.2\n", "mem", ".");
  CHECK(fixed.resolved_e_t() == 0.2);
}

TEST_CASE("parse errors carry origin, line and field") {
  auto message_of = [](const std::string& text) {
    try {
      parse_config_text(text, "mem", ".");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };

  const std::string unknown = message_of("n_tx=4\n\nno_such_key=1\n");
  CHECK(unknown.find("mem:3") != std::string::npos);
  CHECK(unknown.find("no_such_key") != std::string::npos);

  CHECK(message_of("seed=1\nseed=2\n").find("duplicate") != std::string::npos);
  CHECK(message_of("p_fa=abc\n").find("p_fa") != std::string::npos);
  CHECK(message_of("n_tx=4x\n").find("n_tx") != std::string::npos);
  CHECK(message_of("just a line without equals\n").find("mem:1") !=
        std::string::npos);

  // range violations are reported against the offending field
  CHECK(message_of("e_t=-1\n").find("e_t") != std::string::npos);
  CHECK(message_of("p_fa=0.7\n").find("p_fa") != std::string::npos);
  CHECK(message_of("mc_trials=5000\n").find("mc_trials") != std::string::npos);
  CHECK(message_of("theta_sweep_step_deg=0\n").find("theta_sweep_step_deg") !=
        std::string::npos);
  CHECK(message_of("n_tx=1\n").find("n_tx") != std::string::npos);
  CHECK(message_of("bpsk_amplitude=0\n").find("bpsk_amplitude") !=
        std::string::npos);
  CHECK(message_of("code_length=0\n").find("code_length") !=
        std::string::npos);
  CHECK(message_of("comm_modulation=qam\n").find("comm_modulation") !=
        std::string::npos);
}

TEST_CASE("explicit symbol vectors load from a referenced file") {
  const fs::path dir = fresh_dir("symbols");
  {
    std::ofstream f(dir / "symbols.txt");
    f << "# three symbols\n0.5 0.25\n-0.5 0\n1 1\n";
  }
  const std::string text =
      "comm_modulation = explicit_vector\n"
      "comm_symbols_file = symbols.txt\n"
      "code_length = 3\n";
  const ExperimentConfig cfg = parse_config_text(text, "mem", dir.string());
  const Eigen::VectorXcd d = cfg.comm_symbols();
  REQUIRE(d.size() == 3);
  CHECK(d(0) == std::complex<double>(0.5, 0.25));
  CHECK(d(1) == std::complex<double>(-0.5, 0.0));
  CHECK(d(2) == std::complex<double>(1.0, 1.0));

  const std::string wrong_len =
      "comm_modulation = explicit_vector\n"
      "comm_symbols_file = symbols.txt\n"
      "code_length = 4\n";
  CHECK_THROWS_AS(parse_config_text(wrong_len, "mem", dir.string()),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("comm_symbols_file = missing.txt\n", "mem",
                                    dir.string()),
                  ConfigError);
}

TEST_CASE("canonical text drives the hash; the seed drives the symbols") {
  const ExperimentConfig a = parse_config_text("seed=7\n", "mem", ".");
  const ExperimentConfig b = parse_config_text("seed=7\n", "mem", ".");
  const ExperimentConfig c = parse_config_text("seed=8\n", "mem", ".");
  CHECK(fnv1a64(a.canonical_text()) == fnv1a64(b.canonical_text()));
  CHECK(fnv1a64(a.canonical_text()) != fnv1a64(c.canonical_text()));
  // BPSK signs are a function of the seed
  CHECK((a.comm_symbols() - c.comm_symbols()).norm() > 0.0);
  // output location does not change behavior, so it is not hashed
  ExperimentConfig moved = a;
  moved.output_dir = "elsewhere";
  CHECK(fnv1a64(moved.canonical_text()) == fnv1a64(a.canonical_text()));
}

TEST_CASE("to_scenario converts boundary units") {
  const ExperimentConfig cfg = default_config();
  const dfrc::Scenario sc = cfg.to_scenario();
  CHECK(sc.array.n_tx == 16);
  CHECK(sc.theta_c ==
        doctest::Approx(32.0 * std::numbers::pi / 180.0).epsilon(1e-15));
  CHECK(sc.d_c.size() == 128);
  CHECK(sc.e_t == cfg.resolved_e_t());
  for (Eigen::Index i = 0; i < sc.d_c.size(); ++i) {
    CHECK(std::abs(sc.d_c(i)) == doctest::Approx(0.1).epsilon(1e-15));
  }
}

TEST_CASE("signal-check writes a faithful per-sample comparison") {
  const fs::path dir = fresh_dir("signal");
  const ExperimentConfig cfg = quick_config(dir.string());
  std::ostringstream log;
  CHECK(cmd_signal_check(cfg, log) == kExitOk);
  CHECK(log.str().find("max_abs_error") != std::string::npos);

  const std::string text = slurp(dir / "signal.csv");
  const std::vector<std::string> all = lines_of(text);
  REQUIRE(all.size() >= 4);
  CHECK(all[0].rfind("# config_hash=", 0) == 0);
  CHECK(all[0].substr(14) == [&] {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(
                      fnv1a64(cfg.canonical_text())));
    return std::string(buf);
  }());
  CHECK(all[1] == "# seed=1");
  CHECK(all[2].rfind("# version=", 0) == 0);
  CHECK(all[3] ==
        "sample_index,desired_re,desired_im,synthesized_re,synthesized_im,"
        "abs_error");

  const auto rows = csv_rows(text);
  REQUIRE(rows.size() == 128);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 6);
    CHECK(row[5] <= 1e-9);
  }
}

TEST_CASE("pd-curve rows are the library evaluated pointwise") {
  const fs::path dir = fresh_dir("pd_curve");
  ExperimentConfig cfg = quick_config(dir.string());
  cfg.input_snr_grid_db = {-5.0, 0.0, 1.8319731268003994483, 5.0, 10.0};
  std::ostringstream log;
  REQUIRE(cmd_pd_curve(cfg, log) == kExitOk);

  const auto rows = csv_rows(slurp(dir / "pd_curve.csv"));
  REQUIRE(rows.size() == cfg.input_snr_grid_db.size());

  const dfrc::Scenario sc = cfg.to_scenario();
  const dfrc::WaveformMatrix waveform = design_optimal_waveform(sc).waveform;
  double prev = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 3);
    CHECK(rows[i][0] == cfg.input_snr_grid_db[i]);
    const double input = std::pow(10.0, cfg.input_snr_grid_db[i] / 10.0);
    const double snr = snr_of_waveform(waveform, sc, input);
    // 17 significant digits round-trip doubles exactly
    CHECK(rows[i][1] == 10.0 * std::log10(snr));
    CHECK(rows[i][2] == dfrc::detection_probability(snr, cfg.p_fa));
    CHECK(rows[i][2] >= prev);
    prev = rows[i][2];
  }
  // the reference input SNR delivers P_D = 0.9 at P_FA = 1e-6
  CHECK(rows[2][2] == doctest::Approx(0.9).epsilon(1e-9));
}

TEST_CASE("theta-sweep rows match the closed form and stay nonnegative") {
  const fs::path dir = fresh_dir("sweep");
  ExperimentConfig cfg = quick_config(dir.string());
  cfg.theta_sweep = {-10.0, 10.0, 1.0};
  std::ostringstream log;
  REQUIRE(cmd_theta_sweep(cfg, log) == kExitOk);

  const std::string text = slurp(dir / "theta_sweep.csv");
  const auto rows = csv_rows(text);
  REQUIRE(rows.size() == 21);

  const dfrc::Scenario base = cfg.to_scenario();
  const double input = std::pow(10.0, cfg.sweep_input_snr_db / 10.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 7);
    const double theta_deg = -10.0 + static_cast<double>(i);
    CHECK(rows[i][0] == theta_deg);
    dfrc::Scenario sc = base;
    sc.theta_c = theta_deg * (std::numbers::pi / 180.0);  // match the CLI's
                                                          // conversion order
    const dfrc::SnrBudget budget = dfrc::max_snr_closed_form(sc, input);
    CHECK(rows[i][1] == budget.gain);
    CHECK(rows[i][4] == budget.loss_db);
    CHECK(rows[i][5] == dfrc::detection_probability(budget.snr_max, cfg.p_fa));
    CHECK(rows[i][4] >= -1e-9);
    CHECK(rows[i][6] == 1.0);
  }
  // the user on the target peak costs exactly the surplus factor
  CHECK(rows[10][4] ==
        doctest::Approx(10.0 * std::log10(1.5)).epsilon(1e-12));

  // summary block
  CHECK(text.find("# summary mainlobe_loss_db=") != std::string::npos);
  CHECK(text.find("# summary exact_null_loss_db=") != std::string::npos);
  const auto pos = text.find("# summary zero_loss_angles_deg=");
  REQUIRE(pos != std::string::npos);
  const std::string tail =
      text.substr(pos + std::string("# summary zero_loss_angles_deg=").size());
  const char* p = tail.c_str();
  char* end = nullptr;
  const double first = std::strtod(p, &end);
  REQUIRE(*end == ',');
  const double second = std::strtod(end + 1, nullptr);
  CHECK(first == doctest::Approx(-2.46823717744910513907802).epsilon(1e-10));
  CHECK(second == doctest::Approx(2.46823717744910513907802).epsilon(1e-10));
}

TEST_CASE("outputs are byte-identical across runs") {
  const fs::path dir_a = fresh_dir("det_a");
  const fs::path dir_b = fresh_dir("det_b");
  ExperimentConfig cfg = quick_config(dir_a.string());
  cfg.input_snr_grid_db = {0.0, 5.0, 10.0};
  std::ostringstream log;
  REQUIRE(cmd_pd_curve(cfg, log) == kExitOk);
  cfg.output_dir = dir_b.string();
  REQUIRE(cmd_pd_curve(cfg, log) == kExitOk);
  CHECK(slurp(dir_a / "pd_curve.csv") == slurp(dir_b / "pd_curve.csv"));
}

TEST_CASE("infeasible budgets exit with the dedicated code") {
  const fs::path dir = fresh_dir("infeasible");
  ExperimentConfig cfg = quick_config(dir.string());
  cfg.e_t = 0.05;  // constraint minimum is 0.08 for the default symbols
  std::ostringstream log;
  CHECK(cmd_signal_check(cfg, log) == kExitInfeasible);
  CHECK(cmd_theta_sweep(cfg, log) == kExitInfeasible);
  CHECK(cmd_verify(cfg, log) == kExitInfeasible);
  const std::string report = slurp(dir / "verify.txt");
  CHECK(report.find("overall=infeasible") != std::string::npos);
}

TEST_CASE("verify passes end to end and is deterministic") {
  const fs::path dir = fresh_dir("verify");
  ExperimentConfig cfg = quick_config(dir.string());
  cfg.mc_trials = 20000;  // enough for the 3-sigma gates at p_fa = 5e-3
  std::ostringstream log;
  REQUIRE(cmd_verify(cfg, log) == kExitOk);

  const std::string report = slurp(dir / "verify.txt");
  CHECK(report.find("overall=pass") != std::string::npos);
  CHECK(report.find("status=fail") == std::string::npos);
  std::size_t checks = 0;
  for (const std::string& line : lines_of(report)) {
    if (line.rfind("check=", 0) == 0) ++checks;
  }
  CHECK(checks == 11);

  REQUIRE(cmd_verify(cfg, log) == kExitOk);
  CHECK(slurp(dir / "verify.txt") == report);
}
