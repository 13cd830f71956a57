#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "apsa/config.hpp"
#include "apsa/rng.hpp"

namespace apsa {

/// Unit-norm random echo path: i.i.d. standard Gaussian taps, normalized so
/// misalignment denominators are 1 and paths are comparable across seeds.
inline std::vector<double> gen_echo_path(int length, std::uint64_t seed) {
  if (length < 1) throw std::invalid_argument("gen_echo_path: length must be >= 1");
  SplitMix64 rng(seed);
  std::vector<double> taps(static_cast<std::size_t>(length));
  double energy = 0.0;
  for (auto& t : taps) {
    t = rng.next_gaussian();
    energy += t * t;
  }
  const double norm = std::sqrt(energy);
  if (norm > 0.0) {
    for (auto& t : taps) t /= norm;
  }
  return taps;
}

/// First-order autoregressive sequence u(k) = pole u(k-1) + w(k), w ~ N(0,1),
/// u(0) = w(0).
inline std::vector<double> gen_ar1(int n_samples, double pole,
                                   std::uint64_t seed) {
  if (!(std::abs(pole) < 1.0)) {
    throw std::invalid_argument("gen_ar1: |pole| must be < 1");
  }
  if (n_samples < 0) throw std::invalid_argument("gen_ar1: negative length");
  SplitMix64 rng(seed);
  std::vector<double> out(static_cast<std::size_t>(n_samples));
  double prev = 0.0;
  for (auto& u : out) {
    prev = pole * prev + rng.next_gaussian();
    u = prev;
  }
  return out;
}

/// Bernoulli-Gaussian impulse train: z(k) = w(k) n(k) with w ~ Bernoulli(p)
/// and n ~ N(0, sigma_sq) drawn from independent substreams. Mean power is
/// p * sigma_sq.
inline std::vector<double> gen_bg(int n_samples, double p, double sigma_sq,
                                  std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gen_bg: p not in [0, 1]");
  if (!(sigma_sq > 0.0)) throw std::invalid_argument("gen_bg: sigma_sq must be > 0");
  if (n_samples < 0) throw std::invalid_argument("gen_bg: negative length");
  SplitMix64 gate(derive_seed(seed, 0));
  SplitMix64 noise(derive_seed(seed, 1));
  const double sigma = std::sqrt(sigma_sq);
  std::vector<double> out(static_cast<std::size_t>(n_samples));
  for (auto& z : out) {
    const bool on = gate.next_unit() < p;
    const double g = noise.next_gaussian();  // drawn either way, keeps streams aligned
    z = on ? sigma * g : 0.0;
  }
  return out;
}

/// Noise power hitting a dB target: signal_power * 10^(-ratio_db / 10).
inline double power_for_ratio(double signal_power, double ratio_db) {
  if (!(signal_power > 0.0)) {
    throw std::invalid_argument("power_for_ratio: signal power must be > 0");
  }
  return signal_power * std::pow(10.0, -ratio_db / 10.0);
}

/// Everything one run consumes, plus the pieces the oracle rule and the
/// ratio checks need (near_end = background + impulses).
struct Scenario {
  std::vector<double> far_end;
  std::vector<double> echo;
  std::vector<double> background;
  std::vector<double> impulses;
  std::vector<double> near_end;
  std::vector<double> microphone;
  std::vector<double> path_primary;
  std::vector<double> path_secondary;  // empty unless a path change is configured
};

/// Build all signals of one scenario around the given echo paths (the
/// secondary path is ignored unless a change is configured). The echo is x
/// convolved with the active path, switching at path_change_at; noise levels
/// are calibrated against the echo power of a pilot segment, the first
/// min(5000, n) samples before any noise is added.
inline Scenario synthesize_with_paths(const ExperimentConfig& cfg,
                                      std::vector<double> path_primary,
                                      std::vector<double> path_secondary) {
  validate(cfg);
  const int n = cfg.n_samples;
  const int length = cfg.L;
  if (static_cast<int>(path_primary.size()) != length ||
      (cfg.path_change_at && static_cast<int>(path_secondary.size()) != length)) {
    throw std::invalid_argument("synthesize_with_paths: path length mismatch");
  }
  Scenario sc;
  sc.far_end = gen_ar1(n, cfg.pole, cfg.seed_far_end);
  sc.path_primary = std::move(path_primary);
  sc.path_secondary = std::move(path_secondary);

  sc.echo.assign(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    const std::vector<double>& path =
        (cfg.path_change_at && k >= *cfg.path_change_at) ? sc.path_secondary
                                                         : sc.path_primary;
    double acc = 0.0;
    const int taps = std::min(length, k + 1);
    for (int i = 0; i < taps; ++i) {
      acc += path[static_cast<std::size_t>(i)] *
             sc.far_end[static_cast<std::size_t>(k - i)];
    }
    sc.echo[static_cast<std::size_t>(k)] = acc;
  }

  const int pilot = std::min(5000, n);
  double echo_power = 0.0;
  for (int k = 0; k < pilot; ++k) {
    echo_power += sc.echo[static_cast<std::size_t>(k)] * sc.echo[static_cast<std::size_t>(k)];
  }
  echo_power /= pilot;

  sc.background.assign(static_cast<std::size_t>(n), 0.0);
  if (echo_power > 0.0) {
    const double wgn_sigma = std::sqrt(power_for_ratio(echo_power, cfg.snr_db));
    SplitMix64 rng(cfg.seed_noise);
    for (auto& w : sc.background) w = wgn_sigma * rng.next_gaussian();
  }

  sc.impulses.assign(static_cast<std::size_t>(n), 0.0);
  if (cfg.sir_db && cfg.bernoulli_p > 0.0 && echo_power > 0.0) {
    const double bg_power = power_for_ratio(echo_power, *cfg.sir_db);
    sc.impulses = gen_bg(n, cfg.bernoulli_p, bg_power / cfg.bernoulli_p,
                         cfg.seed_impulse);
  }

  sc.near_end.assign(static_cast<std::size_t>(n), 0.0);
  sc.microphone.assign(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    sc.near_end[i] = sc.background[i] + sc.impulses[i];
    sc.microphone[i] = sc.echo[i] + sc.near_end[i];
  }
  return sc;
}

/// Scenario with freshly generated random unit-norm echo paths.
inline Scenario synthesize_scenario(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<double> secondary;
  if (cfg.path_change_at) secondary = gen_echo_path(cfg.L, cfg.seed_path2);
  return synthesize_with_paths(cfg, gen_echo_path(cfg.L, cfg.seed_path),
                               std::move(secondary));
}

/// Raw little-endian float64 dump, one value after another.
inline void write_raw_f64(const std::string& path,
                          const std::vector<double>& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (double v : data) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    if constexpr (std::endian::native == std::endian::big) {
      std::uint64_t sw = 0;
      for (int i = 0; i < 8; ++i) sw = (sw << 8) | ((bits >> (8 * i)) & 0xFF);
      bits = sw;
    }
    char buf[8];
    std::memcpy(buf, &bits, 8);
    out.write(buf, 8);
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

/// Export a scenario as <prefix>.{x,y,v,d}.f64 raw streams plus a
/// <prefix>.meta sidecar holding the producing parameters and seeds in the
/// config-file format.
inline void export_scenario(const Scenario& sc, const ExperimentConfig& cfg,
                            const std::string& prefix) {
  write_raw_f64(prefix + ".x.f64", sc.far_end);
  write_raw_f64(prefix + ".y.f64", sc.echo);
  write_raw_f64(prefix + ".v.f64", sc.near_end);
  write_raw_f64(prefix + ".d.f64", sc.microphone);
  std::ofstream meta(prefix + ".meta", std::ios::binary);
  if (!meta) throw std::runtime_error("cannot open for writing: " + prefix + ".meta");
  meta << serialize_config(cfg);
  if (!meta) throw std::runtime_error("write failed: " + prefix + ".meta");
}

}  // namespace apsa
