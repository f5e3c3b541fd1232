#pragma once

#include <span>

namespace rectiscan {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Pearson correlation; 0 when either variable is constant.
  double correlation = 0.0;
};

/// Ordinary least squares y ~ slope * x + intercept. Needs two or more
/// points with distinct x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace rectiscan
