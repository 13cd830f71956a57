#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "apsa/core.hpp"

namespace apsa {

/// Recursive moment estimates for one projection lane, all exponential moving
/// averages with a shared smoothing factor. The instantaneous quantities use
/// x = x(n-l) and e = e_{l+1}(n), the lane's regressor and error element.
struct LaneMoments {
  double energy_abs_err = 0.0;  // EMA of (x^T x) |e|
  double energy_sq = 0.0;       // EMA of (x^T x)^2
  double norm_mean = 0.0;       // EMA of sqrt(x^T x)
  double energy_mean = 0.0;     // EMA of x^T x, used by the oracle rule
  std::vector<double> corr_err;       // EMA of x e
  std::vector<double> corr_sign_err;  // EMA of x sgn(e)
};

struct MomentState {
  MomentState(int filter_length, int lanes, double smoothing)
      : alpha(smoothing), lane(static_cast<std::size_t>(lanes)) {
    if (filter_length < 1 || lanes < 1) {
      throw std::invalid_argument("MomentState: bad dimensions");
    }
    if (!(smoothing >= 0.0 && smoothing <= 1.0)) {
      throw std::invalid_argument("MomentState: smoothing must be in [0, 1]");
    }
    for (auto& ln : lane) {
      ln.corr_err.assign(static_cast<std::size_t>(filter_length), 0.0);
      ln.corr_sign_err.assign(static_cast<std::size_t>(filter_length), 0.0);
    }
  }

  double alpha;
  std::vector<LaneMoments> lane;
};

/// Advance every moment of one lane with the sample-n quantities.
inline void update_moments(MomentState& state, int lane,
                           std::span<const double> x_lane, double lane_error) {
  LaneMoments& ln = state.lane.at(static_cast<std::size_t>(lane));
  if (x_lane.size() != ln.corr_err.size()) {
    throw std::invalid_argument("update_moments: regressor length mismatch");
  }
  double energy = 0.0;
  for (double v : x_lane) energy += v * v;
  const double a = state.alpha;
  const double b = 1.0 - a;
  const double abs_err = std::abs(lane_error);
  const double sgn_err = sign_of(lane_error);
  ln.energy_abs_err = a * ln.energy_abs_err + b * energy * abs_err;
  ln.energy_sq = a * ln.energy_sq + b * energy * energy;
  ln.norm_mean = a * ln.norm_mean + b * std::sqrt(energy);
  ln.energy_mean = a * ln.energy_mean + b * energy;
  for (std::size_t i = 0; i < x_lane.size(); ++i) {
    ln.corr_err[i] = a * ln.corr_err[i] + b * x_lane[i] * lane_error;
    ln.corr_sign_err[i] = a * ln.corr_sign_err[i] + b * x_lane[i] * sgn_err;
  }
}

/// Estimate of E[e^2] - E[v^2] for one lane, recovered from the correlation
/// between the regressor and the error/error-sign. Zero while the norm
/// average is still warming up.
inline double near_end_excess(const MomentState& state, int lane) {
  const LaneMoments& ln = state.lane.at(static_cast<std::size_t>(lane));
  if (!(ln.norm_mean > 0.0)) return 0.0;
  double dot = 0.0;
  for (std::size_t i = 0; i < ln.corr_err.size(); ++i) {
    dot += ln.corr_err[i] * ln.corr_sign_err[i];
  }
  return dot / ln.norm_mean;
}

/// Smaller root of  mu^2 A / delta^2 - 2 mu B / delta + C = 0, the step that
/// drives the expected a posteriori error energy down to the near-end energy.
/// A negative discriminant clamps to zero, as does a negative root.
inline double quadratic_step(double a, double b, double c, double delta,
                             double mu_max) {
  if (!(a > 0.0)) {
    throw std::invalid_argument("quadratic_step: quadratic coefficient must be > 0");
  }
  const double disc = b * b - a * c;
  const double root = (delta / a) * (b - std::sqrt(std::max(disc, 0.0)));
  return std::clamp(root, 0.0, mu_max);
}

/// State of the decay-only rule: mu(n) is a smoothed minimum of the
/// L1-normalized error and its own past, so it never increases.
struct ShinState {
  double alpha = 0.99;
  double mu_prev = 0.05;
};

inline double shin_step(ShinState& state, std::span<const double> error,
                        double delta) {
  double l1 = 0.0;
  for (double e : error) l1 += std::abs(e);
  const double candidate = std::min(l1 / delta, state.mu_prev);
  state.mu_prev = state.alpha * state.mu_prev + (1.0 - state.alpha) * candidate;
  return state.mu_prev;
}

/// True near-end statistics, supplied from the injected signals. Only a
/// simulation can provide these; the rule using them is the reference optimum.
struct OracleNearEnd {
  double abs_mean = 0.0;  // E[|v|]
  double sq_mean = 0.0;   // E[v^2]
};

/// Per-lane step from the known near-end mean:
///   mu_l = delta (E[|e_l|] - E[|v|]) / E[x^T x],
/// clamped to [0, mu_max]. Zero while the energy average is warming up.
inline std::vector<double> shao_oracle_step(const OracleNearEnd& oracle,
                                            std::span<const double> err_abs_mean,
                                            const MomentState& moments,
                                            double delta, double mu_max) {
  std::vector<double> steps(err_abs_mean.size(), 0.0);
  for (std::size_t l = 0; l < err_abs_mean.size(); ++l) {
    const double energy = moments.lane.at(l).energy_mean;
    if (!(energy > 0.0)) continue;
    const double raw = delta * (err_abs_mean[l] - oracle.abs_mean) / energy;
    steps[l] = std::clamp(raw, 0.0, mu_max);
  }
  return steps;
}

/// Per-lane step of the estimator-driven rule. With A = E[x^T x |e|]/E[(x^T x)^2]
/// and B = r_xe . r_xsgn / (E[(x^T x)^2] E[sqrt(x^T x)]),
///
///   raw_l = delta [ A - sqrt(max(A^2 - B, 0)) ]
///
/// clamped to [0, mu_max] (a negative B means the near-end energy already
/// exceeds the error energy, so the step clamps to zero), then smoothed:
/// mu_l(n) = alpha mu_l(n-1) + (1-alpha) raw_l.
inline std::vector<double> proposed_step(std::span<const double> mu_prev,
                                         const MomentState& moments,
                                         double delta, double alpha,
                                         double mu_max) {
  std::vector<double> steps(mu_prev.size(), 0.0);
  for (std::size_t l = 0; l < mu_prev.size(); ++l) {
    const LaneMoments& ln = moments.lane.at(l);
    double raw = 0.0;
    if (ln.energy_sq > 0.0 && ln.norm_mean > 0.0) {
      const double ratio = ln.energy_abs_err / ln.energy_sq;
      double dot = 0.0;
      for (std::size_t i = 0; i < ln.corr_err.size(); ++i) {
        dot += ln.corr_err[i] * ln.corr_sign_err[i];
      }
      const double excess = dot / (ln.energy_sq * ln.norm_mean);
      raw = delta * (ratio - std::sqrt(std::max(ratio * ratio - excess, 0.0)));
      raw = std::clamp(raw, 0.0, mu_max);
    }
    steps[l] = alpha * mu_prev[l] + (1.0 - alpha) * raw;
  }
  return steps;
}

}  // namespace apsa
