#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "apsa/config.hpp"
#include "apsa/core.hpp"
#include "apsa/signal.hpp"
#include "apsa/stepsize.hpp"
#include "apsa/window.hpp"

namespace apsa {

/// Per-sample traces of one run (or of an ensemble mean). Entry k of
/// misalignment_db is the state entering sample k, so a zero-initialized
/// filter starts at exactly 0 dB against a unit-norm path; step_size and
/// residual are the step applied at k and the leading a priori error at k.
struct TraceSet {
  std::string name;
  std::vector<double> misalignment_db;
  std::vector<double> step_size;
  std::vector<double> residual;
  ExperimentConfig config;
  std::optional<long long> diverged_at;
};

/// 20 log10(||h - h_est|| / ||h||), floored at -120 dB.
inline double misalignment_db(std::span<const double> path,
                              std::span<const double> estimate) {
  if (path.size() != estimate.size()) {
    throw std::invalid_argument("misalignment_db: length mismatch");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double d = path[i] - estimate[i];
    num += d * d;
    den += path[i] * path[i];
  }
  if (!(den > 0.0)) throw std::invalid_argument("misalignment_db: zero path norm");
  constexpr double kFloorDb = -120.0;
  if (!(num > 0.0)) return kFloorDb;
  return std::max(10.0 * std::log10(num / den), kFloorDb);
}

inline std::string trace_label(const ExperimentConfig& cfg) {
  std::string label = algorithm_name(cfg.algorithm);
  if (cfg.algorithm == Algorithm::apsa_fixed ||
      cfg.algorithm == Algorithm::apa_fixed) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "_%g", cfg.mu);
    label += buf;
  }
  return label;
}

/// Coefficient blow-up guard: any non-finite tap or magnitude above 1e6
/// terminates a run as diverged.
inline bool diverged(std::span<const double> coeffs) noexcept {
  for (double c : coeffs) {
    if (!std::isfinite(c) || std::abs(c) > 1.0e6) return true;
  }
  return false;
}

/// Adaptation loop over an already synthesized scenario. Exposed separately
/// so reference implementations and signal dumps can share the exact inputs.
inline TraceSet run_filter(const ExperimentConfig& cfg, const Scenario& sc) {
  validate(cfg);
  const int n = cfg.n_samples;
  const int length = cfg.L;
  const int order = cfg.P;
  const double delta_reg = 1.0e-10 * length;

  TraceSet trace;
  trace.name = trace_label(cfg);
  trace.config = cfg;
  trace.misalignment_db.assign(static_cast<std::size_t>(n), 0.0);
  trace.step_size.assign(static_cast<std::size_t>(n), 0.0);
  trace.residual.assign(static_cast<std::size_t>(n), 0.0);

  RegressorWindow window(length, order);
  std::vector<double> coeffs(static_cast<std::size_t>(length), 0.0);
  std::vector<double> desired(static_cast<std::size_t>(order), 0.0);
  std::vector<double> steps(static_cast<std::size_t>(order), 0.0);
  std::vector<double> column(static_cast<std::size_t>(length), 0.0);

  const bool needs_moments = cfg.algorithm == Algorithm::shao_oracle_vss ||
                             cfg.algorithm == Algorithm::proposed_vss;
  MomentState moments(length, order, needs_moments ? cfg.alpha : 0.0);
  ShinState shin{cfg.alpha, std::clamp(cfg.mu_init, 0.0, cfg.mu_max)};
  OracleNearEnd oracle;
  std::vector<double> err_abs_mean(static_cast<std::size_t>(order), 0.0);
  std::vector<double> mu_lanes(static_cast<std::size_t>(order), 0.0);
  double abs_v_sum = 0.0, sq_v_sum = 0.0, power_sum = 0.0;

  for (int k = 0; k < n; ++k) {
    const auto ki = static_cast<std::size_t>(k);
    const std::vector<double>& active_path =
        (cfg.path_change_at && k >= *cfg.path_change_at) ? sc.path_secondary
                                                         : sc.path_primary;
    trace.misalignment_db[ki] = misalignment_db(active_path, coeffs);

    window.push(sc.far_end[ki]);
    for (int l = 0; l < order; ++l) {
      desired[static_cast<std::size_t>(l)] =
          k - l >= 0 ? sc.microphone[static_cast<std::size_t>(k - l)] : 0.0;
    }
    const std::vector<double> err = error_vector(window, desired, coeffs);

    double step_recorded = 0.0;
    if (cfg.algorithm == Algorithm::apa_fixed) {
      power_sum += sc.far_end[ki] * sc.far_end[ki];
      const double diag_load = 1.0e-6 * (power_sum / (k + 1) + 1.0);
      apa_update(coeffs, window, err, cfg.mu, diag_load);
      step_recorded = cfg.mu;
    } else {
      std::vector<double> signs(static_cast<std::size_t>(order));
      for (int l = 0; l < order; ++l) {
        signs[static_cast<std::size_t>(l)] = sign_of(err[static_cast<std::size_t>(l)]);
      }
      const double delta = delta_norm(window, signs, delta_reg);

      switch (cfg.algorithm) {
        case Algorithm::apsa_fixed:
          std::fill(steps.begin(), steps.end(), cfg.mu);
          break;
        case Algorithm::shin_vss: {
          const double mu = shin_step(shin, err, delta);
          std::fill(steps.begin(), steps.end(), std::clamp(mu, 0.0, cfg.mu_max));
          break;
        }
        case Algorithm::shao_oracle_vss: {
          abs_v_sum += std::abs(sc.near_end[ki]);
          sq_v_sum += sc.near_end[ki] * sc.near_end[ki];
          oracle.abs_mean = abs_v_sum / (k + 1);
          oracle.sq_mean = sq_v_sum / (k + 1);
          for (int l = 0; l < order; ++l) {
            const auto li = static_cast<std::size_t>(l);
            window.copy_column(l, column);
            update_moments(moments, l, column, err[li]);
            err_abs_mean[li] = cfg.alpha * err_abs_mean[li] +
                               (1.0 - cfg.alpha) * std::abs(err[li]);
          }
          steps = shao_oracle_step(oracle, err_abs_mean, moments, delta, cfg.mu_max);
          break;
        }
        case Algorithm::proposed_vss: {
          for (int l = 0; l < order; ++l) {
            window.copy_column(l, column);
            update_moments(moments, l, column, err[static_cast<std::size_t>(l)]);
          }
          steps = proposed_step(mu_lanes, moments, delta, cfg.alpha, cfg.mu_max);
          mu_lanes = steps;
          break;
        }
        default:
          break;
      }
      apsa_update(coeffs, window, err, steps, delta_reg);
      double mean_step = 0.0;
      for (double s : steps) mean_step += s;
      step_recorded = mean_step / order;
    }

    trace.step_size[ki] = step_recorded;
    trace.residual[ki] = err[0];

    if (diverged(coeffs)) {
      trace.diverged_at = k;
      for (int j = k + 1; j < n; ++j) {
        const auto ji = static_cast<std::size_t>(j);
        trace.misalignment_db[ji] = trace.misalignment_db[ki];
        trace.step_size[ji] = trace.step_size[ki];
        trace.residual[ji] = trace.residual[ki];
      }
      break;
    }
  }
  return trace;
}

inline TraceSet run_experiment(const ExperimentConfig& cfg) {
  return run_filter(cfg, synthesize_scenario(cfg));
}

/// Seeds of ensemble member `run`. Run 0 uses the configured seeds verbatim,
/// so a one-run ensemble reproduces run_experiment exactly.
inline ExperimentConfig config_for_run(const ExperimentConfig& base, int run) {
  if (run == 0) return base;
  ExperimentConfig cfg = base;
  const auto r = static_cast<std::uint64_t>(run);
  cfg.seed_path = derive_seed(base.seed_path, r);
  cfg.seed_far_end = derive_seed(base.seed_far_end, r);
  cfg.seed_noise = derive_seed(base.seed_noise, r);
  cfg.seed_impulse = derive_seed(base.seed_impulse, r);
  cfg.seed_path2 = derive_seed(base.seed_path2, r);
  return cfg;
}

/// Element-wise mean of equal-length traces; misalignment is averaged in the
/// dB domain. The earliest divergence of any member marks the mean trace.
inline TraceSet ensemble_mean(const std::vector<TraceSet>& members) {
  if (members.empty()) throw std::invalid_argument("ensemble_mean: no traces");
  const std::size_t n = members.front().misalignment_db.size();
  for (const auto& m : members) {
    if (m.misalignment_db.size() != n) {
      throw std::invalid_argument("ensemble_mean: trace length mismatch");
    }
  }
  TraceSet mean = members.front();
  for (std::size_t r = 1; r < members.size(); ++r) {
    const TraceSet& m = members[r];
    for (std::size_t k = 0; k < n; ++k) {
      mean.misalignment_db[k] += m.misalignment_db[k];
      mean.step_size[k] += m.step_size[k];
      mean.residual[k] += m.residual[k];
    }
    if (m.diverged_at &&
        (!mean.diverged_at || *m.diverged_at < *mean.diverged_at)) {
      mean.diverged_at = m.diverged_at;
    }
  }
  const double scale = 1.0 / static_cast<double>(members.size());
  for (std::size_t k = 0; k < n; ++k) {
    mean.misalignment_db[k] *= scale;
    mean.step_size[k] *= scale;
    mean.residual[k] *= scale;
  }
  return mean;
}

/// Independent runs with per-run derived seeds, merged by index after all
/// complete. Runs execute concurrently when hardware allows.
inline TraceSet run_monte_carlo(const ExperimentConfig& cfg) {
  validate(cfg);
  const int runs = cfg.monte_carlo_runs;
  std::vector<TraceSet> members(static_cast<std::size_t>(runs));
  const unsigned hw = std::thread::hardware_concurrency();
  if (hw > 1 && runs > 1) {
    std::vector<std::future<TraceSet>> futures;
    futures.reserve(static_cast<std::size_t>(runs));
    for (int r = 0; r < runs; ++r) {
      futures.push_back(std::async(std::launch::async, [&cfg, r] {
        return run_experiment(config_for_run(cfg, r));
      }));
    }
    for (int r = 0; r < runs; ++r) {
      members[static_cast<std::size_t>(r)] = futures[static_cast<std::size_t>(r)].get();
    }
  } else {
    for (int r = 0; r < runs; ++r) {
      members[static_cast<std::size_t>(r)] = run_experiment(config_for_run(cfg, r));
    }
  }
  TraceSet mean = ensemble_mean(members);
  mean.config = cfg;
  return mean;
}

}  // namespace apsa
