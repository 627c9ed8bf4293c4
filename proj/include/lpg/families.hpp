#pragma once

// Seeded test families used by every experiment.

#include <cstdint>
#include <string>
#include <vector>

#include "lpg/group.hpp"

namespace lpg {

struct FamilyMember {
  std::string name;
  SampledFunction f;
};

/// Gaussians (3 widths), modulated Gaussians (3 frequencies), 5 random windowed
/// trigonometric sums drawn from `seed`, and one smoothed indicator. Widths are
/// set from the grid extents so that members are well inside the box and resolved.
std::vector<FamilyMember> standard_family(const Grid& grid, std::uint64_t seed);

/// Only the three centered Gaussians.
std::vector<FamilyMember> gaussian_family(const Grid& grid);

/// Product of smoothed box indicators: 1 on |x_i| <= 0.2 L_i, exactly 0 beyond 0.2 L_i + max(3 h_i, 0.05 L_i).
SampledFunction smoothed_indicator(const Grid& grid);

/// Narrow Gaussian of width h_i / 2: nearly flat spectrum up to the grid's resolution.
SampledFunction spike(const Grid& grid);

/// Centered Gaussian exp(-sum_i x_i^2 / (2 s_i^2)).
SampledFunction gaussian(const Grid& grid, const std::vector<double>& widths);

}  // namespace lpg
