#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rectiscan {

__extension__ typedef __int128 FixedMass;

/// Squared Euclidean distance, accumulated coordinate by coordinate in
/// index order. Every ball test in the library goes through this function so
/// indexed and brute-force membership decisions agree exactly.
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

/// Exact, order-independent summation of weights.
///
/// Each weight is rounded once to an integer multiple of a power-of-two
/// quantum (about 2^-100 times the total mass), after which sums are exact
/// 128-bit integer sums. Any two routes that add the same set of weights
/// produce the same double, whatever the order of accumulation.
class MassQuantizer {
 public:
  MassQuantizer() = default;
  explicit MassQuantizer(double total_mass_hint);

  FixedMass quantize(double weight) const;
  double to_mass(FixedMass q) const;
  double quantum() const;

 private:
  int exponent_ = -100;
};

/// Weighted point cloud approximating an n-dimensional measure in R^d.
class DiscreteMeasure {
 public:
  /// coords is row-major, size() * ambient_dim entries. When resolution is
  /// not given it defaults to 3 * min_spacing (clamped to the diameter), or to
  /// 1e-6 * diameter-unit when all points coincide.
  DiscreteMeasure(std::vector<double> coords, std::vector<double> weights, int ambient_dim,
                  int target_dim, std::optional<double> resolution = std::nullopt);

  std::size_t size() const { return weights_.size(); }
  int ambient_dim() const { return d_; }
  int target_dim() const { return n_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& coords() const { return coords_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Exact sum of all weights under the quantizer.
  double total_mass() const { return total_mass_; }
  double diameter() const { return diameter_; }
  /// Smallest positive pairwise distance; 0 when fewer than two distinct points.
  double spacing() const { return spacing_; }
  double resolution() const { return resolution_; }
  /// Length unit used to normalise dyadic scales: the diameter, or 1 for a
  /// single location.
  double unit() const { return diameter_ > 0.0 ? diameter_ : 1.0; }
  const MassQuantizer& quantizer() const { return quantizer_; }

  /// Copy with a different resolution (validated like the constructor).
  DiscreteMeasure with_resolution(double resolution) const;

 private:
  std::vector<double> coords_;
  std::vector<double> weights_;
  int d_ = 0;
  int n_ = 0;
  MassQuantizer quantizer_;
  double total_mass_ = 0.0;
  double diameter_ = 0.0;
  double spacing_ = 0.0;
  double resolution_ = 0.0;
};

class SpatialIndex;

/// mu(B(center, radius)) for the closed ball.
double ball_mass(const DiscreteMeasure& measure, const SpatialIndex& index,
                 std::span<const double> center, double radius);

/// Minimum pairwise distance between distinct locations. Throws
/// InvalidArgument with fewer than two distinct points.
double min_spacing(const DiscreteMeasure& measure);

/// Per-scale extremes of mu(B(x,r)) / r^n over sampled support points.
struct AdProfile {
  std::vector<double> scales;
  std::vector<double> min_ratio;
  std::vector<double> max_ratio;
  /// max(max ratio, 1 / min ratio) over all scales; >= 1.
  double c0 = 1.0;
};

AdProfile ad_regularity_profile(const DiscreteMeasure& measure, const SpatialIndex& index,
                                std::span<const std::size_t> centers,
                                std::span<const double> scales);

/// lo, lo*ratio, lo*ratio^2, ... up to and including hi (within 1e-12 relative).
std::vector<double> geometric_grid(double lo, double hi, double ratio);

}  // namespace rectiscan
