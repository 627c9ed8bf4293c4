#pragma once

#include <functional>
#include <span>
#include <string>

namespace lpg {

enum class Smoothness { Bump, CubicSpline };

std::string to_string(Smoothness s);
Smoothness smoothness_from_string(const std::string& s);

/// Telescoping dyadic partition of unity built from a transition h with h = 0 on
/// (-inf, 1/4] and h = 1 on [1/2, inf):
///   psi_0(t) = 1 - h(t/2),  psi_l(t) = h(2^-l t) - h(2^-l-1 t)  (l >= 1).
/// supp psi_0 in [0, 1], supp psi_l in [2^{l-2}, 2^l], and psi_l(t) = psi_1(2^{1-l} t).
class DyadicPartition {
 public:
  DyadicPartition(int l_max, Smoothness smoothness = Smoothness::Bump);

  int l_max() const { return l_max_; }
  int block_count() const { return l_max_ + 1; }
  Smoothness smoothness() const { return smoothness_; }

  /// The transition function h.
  double transition(double t) const;
  /// psi_l(t); zero for l outside [0, l_max].
  double psi(int l, double t) const;
  /// sum_{l=0}^{l_max} psi_l(t) = 1 - h(2^{-l_max-1} t).
  double sum(double t) const;

  /// Smallest block count whose finite sum is exactly 1 on [0, lambda_max].
  static int l_max_for(double lambda_max);

 private:
  int l_max_;
  Smoothness smoothness_;
};

inline DyadicPartition make_dyadic_partition(int l_max, Smoothness smoothness = Smoothness::Bump) {
  return DyadicPartition(l_max, smoothness);
}

struct PartitionReport {
  double max_sum_deviation = 0.0;   ///< max_t |sum_l psi_l(t) - 1|
  double worst_t = 0.0;             ///< sample attaining max_sum_deviation
  int support_violations = 0;       ///< psi_l(t) != 0 outside its support interval
  int range_violations = 0;         ///< psi_l(t) outside [0, 1]
  double max_support_leak = 0.0;
  double max_range_excess = 0.0;
  bool passed = false;
};

/// Partition-of-unity, support and range checks on the given samples (tolerance 1e-10).
/// Samples above 2^{l_max-1}, where the finite sum legitimately drops below 1, are
/// checked for support and range only.
PartitionReport validate_partition(const DyadicPartition& p, std::span<const double> samples);

/// Same checks for an arbitrary family psi(l, t), l = 0..l_max (used to test corrupted families).
PartitionReport validate_partition(const std::function<double(int, double)>& psi, int l_max,
                                   std::span<const double> samples);

}  // namespace lpg
