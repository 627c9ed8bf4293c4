#include "lpg/partition.hpp"

#include <algorithm>
#include <cmath>

#include "lpg/error.hpp"

namespace lpg {

std::string to_string(Smoothness s) { return s == Smoothness::Bump ? "bump" : "cubic"; }

Smoothness smoothness_from_string(const std::string& s) {
  if (s == "bump") return Smoothness::Bump;
  if (s == "cubic" || s == "cubic-spline") return Smoothness::CubicSpline;
  throw InvalidArgument("unknown partition smoothness '" + s + "' (expected bump or cubic)");
}

DyadicPartition::DyadicPartition(int l_max, Smoothness smoothness) : l_max_(l_max), smoothness_(smoothness) {
  if (l_max < 2) throw InvalidArgument("dyadic partition needs l_max >= 2");
}

double DyadicPartition::transition(double t) const {
  const double s = 4.0 * t - 1.0;  // maps [1/4, 1/2] onto [0, 1]
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  if (smoothness_ == Smoothness::CubicSpline) return s * s * (3.0 - 2.0 * s);
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

double DyadicPartition::psi(int l, double t) const {
  if (l < 0 || l > l_max_) return 0.0;
  if (l == 0) return 1.0 - transition(0.5 * t);
  return transition(std::ldexp(t, -l)) - transition(std::ldexp(t, -l - 1));
}

double DyadicPartition::sum(double t) const {
  double s = 0.0;
  for (int l = 0; l <= l_max_; ++l) s += psi(l, t);
  return s;
}

int DyadicPartition::l_max_for(double lambda_max) {
  int l = 2;
  while (std::ldexp(1.0, l - 1) <= lambda_max) ++l;
  return l;
}

PartitionReport validate_partition(const std::function<double(int, double)>& psi, int l_max,
                                   std::span<const double> samples) {
  constexpr double tol = 1e-10;
  PartitionReport rep;
  const double full_range = std::ldexp(1.0, l_max - 1);
  for (double t : samples) {
    if (t < 0.0) throw InvalidArgument("partition samples must be nonnegative");
    double s = 0.0;
    for (int l = 0; l <= l_max; ++l) {
      const double v = psi(l, t);
      s += v;
      const double lo = l == 0 ? 0.0 : std::ldexp(1.0, l - 2);
      const double hi = std::ldexp(1.0, l);
      if ((t < lo || t > hi) && std::abs(v) > tol) {
        ++rep.support_violations;
        rep.max_support_leak = std::max(rep.max_support_leak, std::abs(v));
      }
      const double excess = std::max(-v, v - 1.0);
      if (excess > tol) {
        ++rep.range_violations;
        rep.max_range_excess = std::max(rep.max_range_excess, excess);
      }
    }
    if (t <= full_range) {
      const double dev = std::abs(s - 1.0);
      if (dev > rep.max_sum_deviation) {
        rep.max_sum_deviation = dev;
        rep.worst_t = t;
      }
    }
  }
  rep.passed = rep.max_sum_deviation <= tol && rep.support_violations == 0 && rep.range_violations == 0;
  return rep;
}

PartitionReport validate_partition(const DyadicPartition& p, std::span<const double> samples) {
  return validate_partition([&p](int l, double t) { return p.psi(l, t); }, p.l_max(), samples);
}

}  // namespace lpg
