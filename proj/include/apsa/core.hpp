#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "apsa/window.hpp"

namespace apsa {

/// Sign with sgn(0) = 0, so a zero error never moves the filter.
inline double sign_of(double v) noexcept {
  return static_cast<double>((v > 0.0) - (v < 0.0));
}

/// A priori error e(n) = d(n) - X^T(n) h; element l is d(n-l) - x(n-l)^T h.
inline std::vector<double> error_vector(const RegressorWindow& window,
                                        std::span<const double> desired,
                                        std::span<const double> coeffs) {
  const int order = window.projection_order();
  if (static_cast<int>(desired.size()) != order ||
      static_cast<int>(coeffs.size()) != window.filter_length()) {
    throw std::invalid_argument("error_vector: dimension mismatch");
  }
  std::vector<double> err(static_cast<std::size_t>(order));
  for (int l = 0; l < order; ++l) {
    err[static_cast<std::size_t>(l)] =
        desired[static_cast<std::size_t>(l)] - window.dot_column(l, coeffs);
  }
  return err;
}

/// sqrt(||X s||^2 + regularizer) for a sign vector s. Computed through the
/// combined column X s, which keeps the quadratic form exactly nonnegative.
inline double delta_norm(const RegressorWindow& window,
                         std::span<const double> sign_vec, double regularizer) {
  const int order = window.projection_order();
  if (static_cast<int>(sign_vec.size()) != order) {
    throw std::invalid_argument("delta_norm: sign vector length mismatch");
  }
  std::vector<double> combined(static_cast<std::size_t>(window.filter_length()),
                               0.0);
  for (int l = 0; l < order; ++l) {
    const double s = sign_vec[static_cast<std::size_t>(l)];
    if (s != 0.0) window.axpy_column(l, s, combined);
  }
  double energy = 0.0;
  for (double v : combined) energy += v * v;
  return std::sqrt(energy + regularizer);
}

/// Sign-algorithm coefficient update with one step size per projection lane:
///
///   h <- h + X(n) diag(lane_steps) sgn(e(n)) / delta
///
/// The correction is added so the a posteriori error contracts to
/// e - X^T X diag(lane_steps) sgn(e) / delta. A uniform lane_steps vector
/// gives the fixed-step sign update.
inline void apsa_update(std::span<double> coeffs, const RegressorWindow& window,
                        std::span<const double> error,
                        std::span<const double> lane_steps, double regularizer) {
  const int order = window.projection_order();
  if (static_cast<int>(error.size()) != order ||
      static_cast<int>(lane_steps.size()) != order ||
      static_cast<int>(coeffs.size()) != window.filter_length()) {
    throw std::invalid_argument("apsa_update: dimension mismatch");
  }
  for (int l = 0; l < order; ++l) {
    const double e = error[static_cast<std::size_t>(l)];
    const double mu = lane_steps[static_cast<std::size_t>(l)];
    if (!std::isfinite(e) || !std::isfinite(mu)) {
      throw std::domain_error("apsa_update: non-finite error or step size");
    }
  }
  std::vector<double> signs(static_cast<std::size_t>(order));
  for (int l = 0; l < order; ++l) {
    signs[static_cast<std::size_t>(l)] = sign_of(error[static_cast<std::size_t>(l)]);
  }
  const double delta = delta_norm(window, signs, regularizer);
  if (delta <= 0.0) return;  // zero direction with zero regularizer
  for (int l = 0; l < order; ++l) {
    const double scale =
        lane_steps[static_cast<std::size_t>(l)] * signs[static_cast<std::size_t>(l)] / delta;
    if (scale != 0.0) window.axpy_column(l, scale, coeffs);
  }
}

/// Affine projection baseline: h <- h + mu X (X^T X + diag_load I)^-1 e.
/// With P = 1 this is NLMS. Throws if the loaded Gram matrix is not positive
/// definite (possible only when diag_load is zero and X is rank deficient).
inline void apa_update(std::span<double> coeffs, const RegressorWindow& window,
                       std::span<const double> error, double step,
                       double diag_load) {
  const int order = window.projection_order();
  if (static_cast<int>(error.size()) != order ||
      static_cast<int>(coeffs.size()) != window.filter_length()) {
    throw std::invalid_argument("apa_update: dimension mismatch");
  }
  const std::size_t p = static_cast<std::size_t>(order);
  std::vector<double> gram(p * p);
  for (int a = 0; a < order; ++a) {
    for (int b = a; b < order; ++b) {
      const double g = window.column_dot(a, b);
      gram[static_cast<std::size_t>(a) * p + static_cast<std::size_t>(b)] = g;
      gram[static_cast<std::size_t>(b) * p + static_cast<std::size_t>(a)] = g;
    }
    gram[static_cast<std::size_t>(a) * p + static_cast<std::size_t>(a)] += diag_load;
  }

  // Cholesky factorization, lower triangle in place.
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = gram[i * p + j];
      for (std::size_t k = 0; k < j; ++k) sum -= gram[i * p + k] * gram[j * p + k];
      if (i == j) {
        if (sum <= 0.0) {
          throw std::domain_error("apa_update: gram matrix not positive definite");
        }
        gram[i * p + i] = std::sqrt(sum);
      } else {
        gram[i * p + j] = sum / gram[j * p + j];
      }
    }
  }
  std::vector<double> sol(error.begin(), error.end());
  for (std::size_t i = 0; i < p; ++i) {  // forward
    for (std::size_t k = 0; k < i; ++k) sol[i] -= gram[i * p + k] * sol[k];
    sol[i] /= gram[i * p + i];
  }
  for (std::size_t i = p; i-- > 0;) {  // backward
    for (std::size_t k = i + 1; k < p; ++k) sol[i] -= gram[k * p + i] * sol[k];
    sol[i] /= gram[i * p + i];
  }

  for (int l = 0; l < order; ++l) {
    const double scale = step * sol[static_cast<std::size_t>(l)];
    if (scale != 0.0) window.axpy_column(l, scale, coeffs);
  }
}

}  // namespace apsa
