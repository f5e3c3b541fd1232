#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rectiscan/square_functions.hpp"

namespace rectiscan {

struct Ball {
  std::vector<double> center;
  double radius = 0.0;
};

struct CarlesonBall {
  std::vector<double> center;
  double radius = 0.0;
  /// R^-n sum_j sum_i |v(x_i, r_j)|^2 w_i ln(ratio) over r_j <= R.
  double value = 0.0;
  std::size_t centers = 0;
  std::size_t cells = 0;
  bool skipped = false;
};

struct CarlesonReport {
  std::string functional;
  double r_min = 0.0;
  double scale_ratio = 0.0;
  std::vector<CarlesonBall> balls;
  double sup = 0.0;
  /// Fit of value against log2(R / r_min) over the balls that were kept.
  double slope = 0.0;
  double intercept = 0.0;
  double correlation = 0.0;
  std::vector<std::string> warnings;
};

/// Carleson sums from a precomputed field. The field's scales must be the
/// midpoints of a log grid (see log_midpoint_grid). Sampled center weights
/// are rescaled so that, within each ball, they add up to mu(B).
CarlesonReport carleson_norm(const CoefficientField& field, const DiscreteMeasure& measure,
                             const SpatialIndex& index, const std::vector<Ball>& balls,
                             bool exclude_boundary = false);

struct CarlesonOptions {
  /// Lower end of the scale integral; 0 selects the measure resolution.
  double r_min = 0.0;
  double scale_ratio = 1.4142135623730951;
  std::size_t max_centers_per_ball = 1000;
  bool exclude_boundary = false;
};

/// Carleson sums computed ball by ball: each ball gets its own center sample
/// and only the scales below its radius are evaluated.
CarlesonReport carleson_scan(const DiscreteMeasure& measure, const SpatialIndex& index,
                             const Functional& functional, const std::vector<Ball>& balls,
                             const CarlesonOptions& options = {});

}  // namespace rectiscan
