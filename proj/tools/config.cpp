#include "config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "dfrc/rng.hpp"

namespace dfrc::tools {

namespace {

constexpr std::uint64_t kBpskStream = 0x6270736b;  // symbol stream tag

struct Cursor {
  const std::string* origin;
  int line = 0;
  std::string key;
};

[[noreturn]] void fail(const Cursor& c, const std::string& msg) {
  throw ConfigError(*c.origin + ":" + std::to_string(c.line) + ": field '" +
                    c.key + "': " + msg);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const Cursor& c, const std::string& s) {
  if (s.empty()) fail(c, "empty value");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    fail(c, "expected a finite real number, got '" + s + "'");
  }
  return v;
}

long long to_int(const Cursor& c, const std::string& s) {
  if (s.empty()) fail(c, "empty value");
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE) {
    fail(c, "expected an integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t to_u64(const Cursor& c, const std::string& s) {
  if (s.empty() || s[0] == '-') fail(c, "expected an unsigned integer, got '" + s + "'");
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE) {
    fail(c, "expected an unsigned integer, got '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string::size_type pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    parts.push_back(trim(s.substr(pos, next - pos)));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return parts;
}

// Either "a,b,c" or "lo:hi:step".
std::vector<double> to_grid(const Cursor& c, const std::string& s) {
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) fail(c, "range needs exactly lo:hi:step");
    const double lo = to_double(c, parts[0]);
    const double hi = to_double(c, parts[1]);
    const double step = to_double(c, parts[2]);
    if (!(step > 0.0)) fail(c, "range step must be > 0");
    if (hi < lo) fail(c, "range hi must be >= lo");
    const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (long k = 0; k < count; ++k) grid[k] = lo + k * step;
    return grid;
  }
  std::vector<double> grid;
  for (const auto& part : split(s, ',')) grid.push_back(to_double(c, part));
  return grid;
}

CommModulation to_modulation(const Cursor& c, const std::string& s) {
  if (s == "bpsk") return CommModulation::bpsk;
  if (s == "explicit_vector") return CommModulation::explicit_vector;
  fail(c, "expected 'bpsk' or 'explicit_vector', got '" + s + "'");
}

Eigen::VectorXcd read_symbols_file(const Cursor& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(c, "cannot open symbol file '" + path + "'");
  std::vector<std::complex<double>> symbols;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream iss(line);
    double re = 0.0;
    double im = 0.0;
    std::string extra;
    if (!(iss >> re >> im) || (iss >> extra)) {
      fail(c, "symbol file '" + path + "' line " + std::to_string(line_no) +
                  ": expected 're im'");
    }
    symbols.emplace_back(re, im);
  }
  Eigen::VectorXcd out(static_cast<Eigen::Index>(symbols.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = symbols[i];
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad_field(const std::string& field, const std::string& msg) {
  throw ConfigError("field '" + field + "': " + msg);
}

}  // namespace

Eigen::VectorXcd ExperimentConfig::comm_symbols() const {
  if (comm_modulation == CommModulation::explicit_vector) {
    return explicit_symbols;
  }
  SplitMix64 rng = SplitMix64::stream(seed, kBpskStream);
  Eigen::VectorXcd d(code_length);
  for (Eigen::Index l = 0; l < d.size(); ++l) {
    const double sign = (rng.next() >> 63) ? -1.0 : 1.0;
    d(l) = std::complex<double>(sign * bpsk_amplitude, 0.0);
  }
  return d;
}

double ExperimentConfig::resolved_e_t() const {
  if (e_t) return *e_t;
  return 1.5 * comm_symbols().squaredNorm() / n_tx;
}

Scenario ExperimentConfig::to_scenario() const {
  constexpr double to_rad = std::numbers::pi / 180.0;
  Scenario sc;
  sc.array = {n_tx, n_rx, d_tx_wavelengths, d_rx_wavelengths};
  sc.theta_t = theta_t_deg * to_rad;
  sc.theta_c = theta_c_deg * to_rad;
  sc.d_c = comm_symbols();
  sc.e_t = resolved_e_t();
  sc.sigma2 = sigma2;
  return sc;
}

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream out;
  out << "n_tx=" << n_tx << "\n";
  out << "n_rx=" << n_rx << "\n";
  out << "d_tx_wavelengths=" << num(d_tx_wavelengths) << "\n";
  out << "d_rx_wavelengths=" << num(d_rx_wavelengths) << "\n";
  out << "theta_t_deg=" << num(theta_t_deg) << "\n";
  out << "theta_c_deg=" << num(theta_c_deg) << "\n";
  out << "code_length=" << code_length << "\n";
  out << "comm_modulation="
      << (comm_modulation == CommModulation::bpsk ? "bpsk" : "explicit_vector")
      << "\n";
  out << "bpsk_amplitude=" << num(bpsk_amplitude) << "\n";
  out << "e_t=" << num(resolved_e_t()) << "\n";
  out << "sigma2=" << num(sigma2) << "\n";
  out << "p_fa=" << num(p_fa) << "\n";
  out << "input_snr_grid_db=";
  for (std::size_t i = 0; i < input_snr_grid_db.size(); ++i) {
    if (i) out << ",";
    out << num(input_snr_grid_db[i]);
  }
  out << "\n";
  out << "sweep_input_snr_db=" << num(sweep_input_snr_db) << "\n";
  out << "theta_sweep=" << num(theta_sweep.start_deg) << ":"
      << num(theta_sweep.stop_deg) << ":" << num(theta_sweep.step_deg) << "\n";
  out << "mc_trials=" << mc_trials << "\n";
  out << "seed=" << seed << "\n";
  const Eigen::VectorXcd d = comm_symbols();
  for (Eigen::Index l = 0; l < d.size(); ++l) {
    out << "d_c[" << l << "]=" << num(d(l).real()) << " " << num(d(l).imag())
        << "\n";
  }
  return out.str();
}

void ExperimentConfig::validate() const {
  if (n_tx < 2) bad_field("n_tx", "must be >= 2");
  if (n_rx < 1) bad_field("n_rx", "must be >= 1");
  if (!(d_tx_wavelengths > 0.0)) bad_field("d_tx_wavelengths", "must be > 0");
  if (!(d_rx_wavelengths > 0.0)) bad_field("d_rx_wavelengths", "must be > 0");
  if (!(std::abs(theta_t_deg) <= 90.0)) bad_field("theta_t_deg", "must lie in [-90, 90]");
  if (!(std::abs(theta_c_deg) <= 90.0)) bad_field("theta_c_deg", "must lie in [-90, 90]");
  if (code_length < 1) bad_field("code_length", "must be >= 1");
  if (comm_modulation == CommModulation::bpsk) {
    if (!(bpsk_amplitude > 0.0)) bad_field("bpsk_amplitude", "must be > 0");
  } else {
    if (comm_symbols_file.empty()) {
      bad_field("comm_symbols_file", "required for explicit_vector modulation");
    }
    if (explicit_symbols.size() != code_length) {
      bad_field("comm_symbols_file",
                "length mismatch: file has " + std::to_string(explicit_symbols.size()) +
                    " symbols, code_length is " + std::to_string(code_length));
    }
  }
  if (e_t && !(*e_t > 0.0)) bad_field("e_t", "must be > 0");
  if (!(sigma2 > 0.0)) bad_field("sigma2", "must be > 0");
  if (!(p_fa > 0.0 && p_fa <= 0.5)) bad_field("p_fa", "must lie in (0, 0.5]");
  if (input_snr_grid_db.empty()) bad_field("input_snr_grid_db", "must be non-empty");
  if (!(theta_sweep.step_deg > 0.0)) bad_field("theta_sweep_step_deg", "must be > 0");
  if (theta_sweep.stop_deg < theta_sweep.start_deg) {
    bad_field("theta_sweep_stop_deg", "must be >= theta_sweep_start_deg");
  }
  if (!(std::abs(theta_sweep.start_deg) <= 90.0) ||
      !(std::abs(theta_sweep.stop_deg) <= 90.0)) {
    bad_field("theta_sweep_start_deg", "sweep must stay within [-90, 90]");
  }
  if (mc_trials < 10000) bad_field("mc_trials", "must be >= 10000");
  if (output_dir.empty()) bad_field("output_dir", "must be non-empty");
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  for (double db = -5.0; db <= 15.0 + 1e-9; db += 0.5) {
    cfg.input_snr_grid_db.push_back(db);
  }
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string base_dir = std::filesystem::path(path).parent_path().string();
  return parse_config_text(buf.str(), path, base_dir.empty() ? "." : base_dir);
}

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin,
                                   const std::string& base_dir) {
  ExperimentConfig cfg = default_config();
  std::set<std::string> seen;
  Cursor c{&origin, 0, ""};
  Cursor symbols_cursor = c;  // where comm_symbols_file appeared

  std::istringstream lines(text);
  std::string raw;
  while (std::getline(lines, raw)) {
    ++c.line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      c.key = line;
      fail(c, "expected 'key = value'");
    }
    c.key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (c.key.empty()) fail(c, "missing key before '='");
    if (!seen.insert(c.key).second) fail(c, "duplicate key");

    if (c.key == "n_tx") {
      cfg.n_tx = static_cast<int>(to_int(c, value));
    } else if (c.key == "n_rx") {
      cfg.n_rx = static_cast<int>(to_int(c, value));
    } else if (c.key == "d_tx_wavelengths") {
      cfg.d_tx_wavelengths = to_double(c, value);
    } else if (c.key == "d_rx_wavelengths") {
      cfg.d_rx_wavelengths = to_double(c, value);
    } else if (c.key == "theta_t_deg") {
      cfg.theta_t_deg = to_double(c, value);
    } else if (c.key == "theta_c_deg") {
      cfg.theta_c_deg = to_double(c, value);
    } else if (c.key == "code_length") {
      cfg.code_length = static_cast<int>(to_int(c, value));
    } else if (c.key == "comm_modulation") {
      cfg.comm_modulation = to_modulation(c, value);
    } else if (c.key == "bpsk_amplitude") {
      cfg.bpsk_amplitude = to_double(c, value);
    } else if (c.key == "comm_symbols_file") {
      cfg.comm_symbols_file = value;
      symbols_cursor = c;
    } else if (c.key == "e_t") {
      if (value == "auto") {
        cfg.e_t.reset();
      } else {
        cfg.e_t = to_double(c, value);
      }
    } else if (c.key == "sigma2") {
      cfg.sigma2 = to_double(c, value);
    } else if (c.key == "p_fa") {
      cfg.p_fa = to_double(c, value);
    } else if (c.key == "input_snr_grid_db") {
      cfg.input_snr_grid_db = to_grid(c, value);
    } else if (c.key == "sweep_input_snr_db") {
      cfg.sweep_input_snr_db = to_double(c, value);
    } else if (c.key == "theta_sweep_start_deg") {
      cfg.theta_sweep.start_deg = to_double(c, value);
    } else if (c.key == "theta_sweep_stop_deg") {
      cfg.theta_sweep.stop_deg = to_double(c, value);
    } else if (c.key == "theta_sweep_step_deg") {
      cfg.theta_sweep.step_deg = to_double(c, value);
    } else if (c.key == "mc_trials") {
      cfg.mc_trials = to_int(c, value);
    } else if (c.key == "seed") {
      cfg.seed = to_u64(c, value);
    } else if (c.key == "output_dir") {
      if (value.empty()) fail(c, "must be non-empty");
      cfg.output_dir = value;
    } else {
      fail(c, "unknown key");
    }
  }

  // Referenced files must exist at parse time even if modulation makes the
  // contents unused.
  if (!cfg.comm_symbols_file.empty()) {
    std::filesystem::path p(cfg.comm_symbols_file);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    cfg.explicit_symbols = read_symbols_file(symbols_cursor, p.string());
  }

  cfg.validate();
  return cfg;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const char ch : data) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace dfrc::tools
