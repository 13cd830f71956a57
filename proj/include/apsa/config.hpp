#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace apsa {

enum class Algorithm {
  apsa_fixed,       // sign update, constant step
  apa_fixed,        // affine projection, constant step
  shin_vss,         // decay-only L1-normalized rule
  shao_oracle_vss,  // rule fed the true near-end mean
  proposed_vss,     // estimator-driven energy-recovery rule
};

inline const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::apsa_fixed: return "apsa_fixed";
    case Algorithm::apa_fixed: return "apa_fixed";
    case Algorithm::shin_vss: return "shin_vss";
    case Algorithm::shao_oracle_vss: return "shao_oracle_vss";
    case Algorithm::proposed_vss: return "proposed_vss";
  }
  return "unknown";
}

inline Algorithm algorithm_from_name(std::string_view name) {
  if (name == "apsa_fixed") return Algorithm::apsa_fixed;
  if (name == "apa_fixed") return Algorithm::apa_fixed;
  if (name == "shin_vss") return Algorithm::shin_vss;
  if (name == "shao_oracle_vss") return Algorithm::shao_oracle_vss;
  if (name == "proposed_vss") return Algorithm::proposed_vss;
  throw std::invalid_argument("unknown algorithm: " + std::string(name));
}

/// Full description of one simulated echo-cancellation run. Field names are
/// the config-file keys.
struct ExperimentConfig {
  int L = 128;             // echo path / filter length
  int P = 5;               // projection order
  int n_samples = 30000;
  double pole = 0.8;       // AR(1) pole of the far-end signal
  double snr_db = 30.0;    // background WGN level vs. echo power
  std::optional<double> sir_db;         // impulsive noise level, absent = none
  double bernoulli_p = 0.1;             // impulse occurrence probability
  std::optional<int> path_change_at;    // sample index of echo path switch

  Algorithm algorithm = Algorithm::proposed_vss;
  double mu = 0.001;       // fixed step for apsa_fixed / apa_fixed
  double alpha = 0.99;     // controller smoothing factor
  double mu_max = 0.05;    // cap applied to every controller output
  double mu_init = 0.05;   // starting step of the decay-only rule

  std::uint64_t seed_path = 101;
  std::uint64_t seed_far_end = 202;
  std::uint64_t seed_noise = 303;
  std::uint64_t seed_impulse = 404;
  std::uint64_t seed_path2 = 505;

  int monte_carlo_runs = 10;
};

inline void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("config: " + msg);
  };
  if (c.L < 1) fail("L must be >= 1");
  if (c.P < 1) fail("P must be >= 1");
  if (c.P > c.L) fail("P must not exceed L");
  if (c.n_samples < 1) fail("n_samples must be >= 1");
  if (!(std::abs(c.pole) < 1.0)) fail("pole must satisfy |pole| < 1");
  if (!(c.bernoulli_p >= 0.0 && c.bernoulli_p <= 1.0)) {
    fail("bernoulli_p must be in [0, 1]");
  }
  if (c.path_change_at && *c.path_change_at < 0) {
    fail("path_change_at must be >= 0");
  }
  if (!(c.alpha >= 0.0 && c.alpha < 1.0)) fail("alpha must be in [0, 1)");
  if (!(c.mu_max > 0.0)) fail("mu_max must be > 0");
  if (!(c.mu_init >= 0.0)) fail("mu_init must be >= 0");
  if (!(c.mu >= 0.0)) fail("mu must be >= 0");
  if (c.monte_carlo_runs < 1) fail("monte_carlo_runs must be >= 1");
}

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline double parse_real(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  double out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad value for " + key + ": " + v);
  }
  if (pos != v.size()) {
    throw std::invalid_argument("config: bad value for " + key + ": " + v);
  }
  return out;
}

inline long long parse_int(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  long long out;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad value for " + key + ": " + v);
  }
  if (pos != v.size()) {
    throw std::invalid_argument("config: bad value for " + key + ": " + v);
  }
  return out;
}

inline std::uint64_t parse_seed(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  std::uint64_t out;
  try {
    out = std::stoull(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad value for " + key + ": " + v);
  }
  if (pos != v.size()) {
    throw std::invalid_argument("config: bad value for " + key + ": " + v);
  }
  return out;
}

}  // namespace detail

/// Parse `key = value` lines; '#' starts a comment, blank lines are skipped.
/// Keys must match ExperimentConfig field names; anything else is an error.
inline ExperimentConfig parse_config_text(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string stripped = detail::trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " is not 'key = value'");
    }
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));

    if (key == "L") cfg.L = static_cast<int>(detail::parse_int(value, key));
    else if (key == "P") cfg.P = static_cast<int>(detail::parse_int(value, key));
    else if (key == "n_samples") cfg.n_samples = static_cast<int>(detail::parse_int(value, key));
    else if (key == "pole") cfg.pole = detail::parse_real(value, key);
    else if (key == "snr_db") cfg.snr_db = detail::parse_real(value, key);
    else if (key == "sir_db") cfg.sir_db = detail::parse_real(value, key);
    else if (key == "bernoulli_p") cfg.bernoulli_p = detail::parse_real(value, key);
    else if (key == "path_change_at") cfg.path_change_at = static_cast<int>(detail::parse_int(value, key));
    else if (key == "algorithm") cfg.algorithm = algorithm_from_name(value);
    else if (key == "mu") cfg.mu = detail::parse_real(value, key);
    else if (key == "alpha") cfg.alpha = detail::parse_real(value, key);
    else if (key == "mu_max") cfg.mu_max = detail::parse_real(value, key);
    else if (key == "mu_init") cfg.mu_init = detail::parse_real(value, key);
    else if (key == "seed_path") cfg.seed_path = detail::parse_seed(value, key);
    else if (key == "seed_far_end") cfg.seed_far_end = detail::parse_seed(value, key);
    else if (key == "seed_noise") cfg.seed_noise = detail::parse_seed(value, key);
    else if (key == "seed_impulse") cfg.seed_impulse = detail::parse_seed(value, key);
    else if (key == "seed_path2") cfg.seed_path2 = detail::parse_seed(value, key);
    else if (key == "monte_carlo_runs") cfg.monte_carlo_runs = static_cast<int>(detail::parse_int(value, key));
    else throw std::invalid_argument("config: unknown key: " + key);
  }
  validate(cfg);
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config_text(in);
}

inline std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "L = " << c.L << '\n';
  out << "P = " << c.P << '\n';
  out << "n_samples = " << c.n_samples << '\n';
  out << "pole = " << c.pole << '\n';
  out << "snr_db = " << c.snr_db << '\n';
  if (c.sir_db) out << "sir_db = " << *c.sir_db << '\n';
  out << "bernoulli_p = " << c.bernoulli_p << '\n';
  if (c.path_change_at) out << "path_change_at = " << *c.path_change_at << '\n';
  out << "algorithm = " << algorithm_name(c.algorithm) << '\n';
  out << "mu = " << c.mu << '\n';
  out << "alpha = " << c.alpha << '\n';
  out << "mu_max = " << c.mu_max << '\n';
  out << "mu_init = " << c.mu_init << '\n';
  out << "seed_path = " << c.seed_path << '\n';
  out << "seed_far_end = " << c.seed_far_end << '\n';
  out << "seed_noise = " << c.seed_noise << '\n';
  out << "seed_impulse = " << c.seed_impulse << '\n';
  out << "seed_path2 = " << c.seed_path2 << '\n';
  out << "monte_carlo_runs = " << c.monte_carlo_runs << '\n';
  return out.str();
}

}  // namespace apsa
