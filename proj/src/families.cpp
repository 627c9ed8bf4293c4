#include "lpg/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace lpg {

namespace {

constexpr double kWidthFractions[] = {0.10, 0.075, 0.06};

std::vector<double> widths_for(const Grid& g, double fraction) {
  std::vector<double> w(g.dim());
  for (std::size_t i = 0; i < g.dim(); ++i) w[i] = std::max(fraction * g.half_extent(i), 1.5 * g.spacing(i));
  return w;
}

double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

}  // namespace

SampledFunction gaussian(const Grid& grid, const std::vector<double>& widths) {
  return SampledFunction::sample(grid, [&](std::span<const double> x) {
    double e = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) e += x[i] * x[i] / (2.0 * widths[i] * widths[i]);
    return Complex(std::exp(-e));
  });
}

SampledFunction smoothed_indicator(const Grid& grid) {
  return SampledFunction::sample(grid, [&](std::span<const double> x) {
    double v = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double edge = 0.2 * grid.half_extent(i);
      const double ramp = std::max(3.0 * grid.spacing(i), 0.05 * grid.half_extent(i));
      v *= 1.0 - smooth_step((std::abs(x[i]) - edge) / ramp);
    }
    return Complex(v);
  });
}

SampledFunction spike(const Grid& grid) {
  std::vector<double> w(grid.dim());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 0.5 * grid.spacing(i);
  return gaussian(grid, w);
}

std::vector<FamilyMember> gaussian_family(const Grid& grid) {
  std::vector<FamilyMember> out;
  for (int k = 0; k < 3; ++k)
    out.push_back({"gaussian_" + std::to_string(k), gaussian(grid, widths_for(grid, kWidthFractions[k]))});
  return out;
}

std::vector<FamilyMember> standard_family(const Grid& grid, std::uint64_t seed) {
  auto out = gaussian_family(grid);
  const std::size_t n = grid.dim();

  const auto mid = widths_for(grid, kWidthFractions[1]);
  const double nyquist = std::numbers::pi / grid.spacing(0);
  for (int k = 1; k <= 3; ++k) {
    // Keep the carrier well below the resolvable band of the envelope.
    const double xi = std::min(k / 8.0 * nyquist, 3.0 * k / mid[0]);
    auto g = gaussian(grid, mid);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= std::exp(Complex(0.0, xi * grid.node(i)[0]));
    out.push_back({"modulated_" + std::to_string(k), std::move(g)});
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto window = widths_for(grid, kWidthFractions[0]);
  for (int d = 0; d < 5; ++d) {
    struct Mode {
      std::vector<double> xi;
      Complex c;
    };
    std::vector<Mode> modes;
    for (int m = 0; m < 8; ++m) {
      Mode md;
      md.xi.resize(n);
      for (std::size_t i = 0; i < n; ++i) md.xi[i] = normal(rng) * 0.5 / window[i];
      const double re = normal(rng);
      const double im = normal(rng);
      md.c = Complex(re, im);
      modes.push_back(std::move(md));
    }
    auto g = SampledFunction::sample(grid, [&](std::span<const double> x) {
      Complex s = 0.0;
      for (const auto& md : modes) {
        double ph = 0.0;
        for (std::size_t i = 0; i < n; ++i) ph += md.xi[i] * x[i];
        s += md.c * std::exp(Complex(0.0, ph));
      }
      double e = 0.0;
      for (std::size_t i = 0; i < n; ++i) e += x[i] * x[i] / (2.0 * window[i] * window[i]);
      return s * std::exp(-e);
    });
    out.push_back({"random_" + std::to_string(d), std::move(g)});
  }

  auto ind = smoothed_indicator(grid);
  out.push_back({"indicator", std::move(ind)});
  return out;
}

}  // namespace lpg
