#include "rectiscan/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rectiscan/errors.hpp"
#include "rectiscan/spatial_index.hpp"

namespace rectiscan {

MassQuantizer::MassQuantizer(double total_mass_hint) {
  if (!(total_mass_hint > 0.0) || !std::isfinite(total_mass_hint))
    throw_invalid("mass quantizer: total mass must be positive and finite");
  exponent_ = std::ilogb(total_mass_hint) - 100;
}

FixedMass MassQuantizer::quantize(double weight) const {
  return static_cast<FixedMass>(std::nearbyint(std::ldexp(weight, -exponent_)));
}

double MassQuantizer::to_mass(FixedMass q) const {
  return std::ldexp(static_cast<double>(q), exponent_);
}

double MassQuantizer::quantum() const { return std::ldexp(1.0, exponent_); }

DiscreteMeasure::DiscreteMeasure(std::vector<double> coords, std::vector<double> weights,
                                 int ambient_dim, int target_dim,
                                 std::optional<double> resolution)
    : coords_(std::move(coords)), weights_(std::move(weights)), d_(ambient_dim), n_(target_dim) {
  if (d_ <= 0) throw_invalid("measure: ambient dimension must be positive");
  if (n_ <= 0 || n_ >= d_)
    throw_invalid("measure: target dimension n must satisfy 0 < n < d (n=" + std::to_string(n_) +
                  ", d=" + std::to_string(d_) + ")");
  if (weights_.empty()) throw_invalid("measure: at least one point is required");
  if (coords_.size() != weights_.size() * static_cast<std::size_t>(d_))
    throw_invalid("measure: every point needs exactly d coordinates");
  for (double c : coords_)
    if (!std::isfinite(c)) throw_invalid("measure: coordinates must be finite");
  double naive = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw_invalid("measure: weights must be positive");
    naive += w;
  }
  if (!std::isfinite(naive)) throw_invalid("measure: total mass must be finite");
  quantizer_ = MassQuantizer(naive);
  FixedMass total = 0;
  for (double w : weights_) total += quantizer_.quantize(w);
  total_mass_ = quantizer_.to_mass(total);

  SpatialIndex index(coords_, weights_, d_, quantizer_);
  diameter_ = index.diameter();
  if (weights_.size() >= 2 && diameter_ > 0.0) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < weights_.size(); ++i)
      best = std::min(best, index.nearest_positive_distance(point(i)));
    spacing_ = best;
  }
  if (resolution) {
    resolution_ = *resolution;
  } else if (spacing_ > 0.0) {
    resolution_ = std::min(3.0 * spacing_, diameter_);
  } else {
    resolution_ = 1e-6 * unit();
  }
  if (!(resolution_ > 0.0) || !std::isfinite(resolution_))
    throw_invalid("measure: resolution must be positive");
  if (diameter_ > 0.0 && resolution_ > diameter_)
    throw_invalid("measure: resolution exceeds the diameter of the point set");
}

DiscreteMeasure DiscreteMeasure::with_resolution(double resolution) const {
  DiscreteMeasure copy = *this;
  if (!(resolution > 0.0) || !std::isfinite(resolution))
    throw_invalid("measure: resolution must be positive");
  if (diameter_ > 0.0 && resolution > diameter_)
    throw_invalid("measure: resolution exceeds the diameter of the point set");
  copy.resolution_ = resolution;
  return copy;
}

double ball_mass(const DiscreteMeasure& measure, const SpatialIndex& index,
                 std::span<const double> center, double radius) {
  if (!(radius > 0.0)) throw_invalid("ball_mass: radius must be positive");
  if (center.size() != static_cast<std::size_t>(measure.ambient_dim()))
    throw_invalid("ball_mass: center has wrong dimension");
  return index.ball_mass(center, radius);
}

double min_spacing(const DiscreteMeasure& measure) {
  if (measure.spacing() <= 0.0)
    throw_invalid("min_spacing: need at least two distinct points");
  return measure.spacing();
}

AdProfile ad_regularity_profile(const DiscreteMeasure& measure, const SpatialIndex& index,
                                std::span<const std::size_t> centers,
                                std::span<const double> scales) {
  if (centers.empty()) throw_invalid("ad_regularity_profile: empty center sample");
  if (scales.empty()) throw_invalid("ad_regularity_profile: empty scale grid");
  for (std::size_t j = 0; j < scales.size(); ++j) {
    if (!(scales[j] > 0.0)) throw_invalid("ad_regularity_profile: scales must be positive");
    if (j > 0 && !(scales[j] > scales[j - 1]))
      throw_invalid("ad_regularity_profile: scale grid must be strictly increasing");
  }
  for (std::size_t c : centers)
    if (c >= measure.size()) throw_invalid("ad_regularity_profile: center index out of range");

  const int n = measure.target_dim();
  AdProfile out;
  out.scales.assign(scales.begin(), scales.end());
  out.min_ratio.assign(scales.size(), std::numeric_limits<double>::infinity());
  out.max_ratio.assign(scales.size(), 0.0);
  double c0 = 1.0;
  for (std::size_t j = 0; j < scales.size(); ++j) {
    const double rn = std::pow(scales[j], n);
    for (std::size_t c : centers) {
      double ratio = index.ball_mass(measure.point(c), scales[j]) / rn;
      out.min_ratio[j] = std::min(out.min_ratio[j], ratio);
      out.max_ratio[j] = std::max(out.max_ratio[j], ratio);
    }
    c0 = std::max(c0, out.max_ratio[j]);
    if (out.min_ratio[j] > 0.0) {
      c0 = std::max(c0, 1.0 / out.min_ratio[j]);
    } else {
      c0 = std::numeric_limits<double>::infinity();
    }
  }
  out.c0 = c0;
  return out;
}

std::vector<double> geometric_grid(double lo, double hi, double ratio) {
  if (!(lo > 0.0) || !(hi >= lo)) throw_invalid("geometric_grid: need 0 < lo <= hi");
  if (!(ratio > 1.0)) throw_invalid("geometric_grid: ratio must exceed 1");
  std::vector<double> grid;
  const double steps = std::floor(std::log(hi / lo) / std::log(ratio) + 1e-9);
  for (int i = 0; i <= static_cast<int>(steps); ++i) grid.push_back(lo * std::pow(ratio, i));
  return grid;
}

}  // namespace rectiscan
