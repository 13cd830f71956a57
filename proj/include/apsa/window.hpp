#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace apsa {

/// Tapped-delay-line view of the P most recent length-L input vectors.
///
/// Column j is x(n-j) = [x(n-j), x(n-j-1), ..., x(n-j-L+1)]; pushing a sample
/// shifts every column by one position. Entries older than the first pushed
/// sample read as zero (pre-windowed start). Backed by a ring buffer of the
/// L+P-1 distinct samples the columns share.
class RegressorWindow {
 public:
  RegressorWindow(int filter_length, int projection_order)
      : length_(filter_length), order_(projection_order) {
    if (filter_length < 1 || projection_order < 1) {
      throw std::invalid_argument(
          "RegressorWindow: filter length and projection order must be >= 1");
    }
    ring_.assign(static_cast<std::size_t>(length_ + order_ - 1), 0.0);
  }

  int filter_length() const noexcept { return length_; }
  int projection_order() const noexcept { return order_; }
  long long samples_seen() const noexcept { return seen_; }

  void push(double x_new) noexcept {
    head_ = head_ + 1 == static_cast<int>(ring_.size()) ? 0 : head_ + 1;
    ring_[static_cast<std::size_t>(head_)] = x_new;
    ++seen_;
  }

  /// x(n - lane - tap); lane in [0,P), tap in [0,L).
  double tap(int lane, int tap_index) const noexcept {
    return ring_[slot(lane + tap_index)];
  }

  void copy_column(int lane, std::span<double> out) const noexcept {
    int idx = static_cast<int>(slot(lane));
    for (int k = 0; k < length_; ++k) {
      out[static_cast<std::size_t>(k)] = ring_[static_cast<std::size_t>(idx)];
      idx = step_back(idx);
    }
  }

  /// x(n-a)^T x(n-b).
  double column_dot(int a, int b) const noexcept {
    int ia = static_cast<int>(slot(a));
    int ib = static_cast<int>(slot(b));
    double acc = 0.0;
    for (int k = 0; k < length_; ++k) {
      acc +=
          ring_[static_cast<std::size_t>(ia)] * ring_[static_cast<std::size_t>(ib)];
      ia = step_back(ia);
      ib = step_back(ib);
    }
    return acc;
  }

  double column_energy(int lane) const noexcept { return column_dot(lane, lane); }

  /// x(n-lane)^T w for a length-L vector w.
  double dot_column(int lane, std::span<const double> w) const noexcept {
    int idx = static_cast<int>(slot(lane));
    double acc = 0.0;
    for (int k = 0; k < length_; ++k) {
      acc += ring_[static_cast<std::size_t>(idx)] * w[static_cast<std::size_t>(k)];
      idx = step_back(idx);
    }
    return acc;
  }

  /// w += scale * x(n-lane).
  void axpy_column(int lane, double scale, std::span<double> w) const noexcept {
    int idx = static_cast<int>(slot(lane));
    for (int k = 0; k < length_; ++k) {
      w[static_cast<std::size_t>(k)] += scale * ring_[static_cast<std::size_t>(idx)];
      idx = step_back(idx);
    }
  }

 private:
  std::size_t slot(int age) const noexcept {
    int idx = head_ - age;
    if (idx < 0) idx += static_cast<int>(ring_.size());
    return static_cast<std::size_t>(idx);
  }

  int step_back(int idx) const noexcept {
    return idx == 0 ? static_cast<int>(ring_.size()) - 1 : idx - 1;
  }

  int length_;
  int order_;
  int head_ = 0;
  long long seen_ = 0;
  std::vector<double> ring_;
};

}  // namespace apsa
