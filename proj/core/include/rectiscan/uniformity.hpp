#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rectiscan/kernels.hpp"
#include "rectiscan/measure.hpp"
#include "rectiscan/spatial_index.hpp"

namespace rectiscan {

struct WcdOptions {
  /// Support points y drawn from the ball.
  std::size_t samples = 64;
  std::uint64_t seed = 1;
  /// Ratio of the geometric t grid between the resolution and r.
  double scale_ratio = 1.4142135623730951;
};

struct WcdDefect {
  std::vector<double> center;
  double radius = 0.0;
  double c1 = 0.0;
  /// max over samples of |mu(B(y,t)) - c1 t^n| / r^n.
  double defect = 0.0;
  std::size_t samples = 0;
  std::vector<double> scales;
};

/// Best constant-density defect of the measure on B(x0, r). Throws
/// RangeError when r < 10 * resolution and InvalidArgument when the ball
/// holds fewer than two points.
WcdDefect wcd_defect(const DiscreteMeasure& measure, const SpatialIndex& index,
                     std::span<const double> x0, double r, const WcdOptions& options = {});

struct UniformityCheck {
  double variation = 0.0;
  /// Median of t^-n int f(|x-y|^2/t^2) dmu(y) over the grid.
  double constant = 0.0;
  /// Row-major centers x scales.
  std::vector<double> values;
  std::vector<std::string> warnings;
};

/// max |value / c - 1| with value = t^-n int f(|x-y|^2/t^2) dmu(y), where f is
/// the profile of a smooth kernel, and c the median value.
UniformityCheck uniformity_identity_check(const DiscreteMeasure& measure,
                                          const SpatialIndex& index, const KernelSpec& profile,
                                          std::span<const std::size_t> centers,
                                          std::span<const double> scales);

}  // namespace rectiscan
