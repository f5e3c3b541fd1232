#include "rectiscan/uniformity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rectiscan/errors.hpp"
#include "rectiscan/parallel.hpp"
#include "rectiscan/square_functions.hpp"

namespace rectiscan {

WcdDefect wcd_defect(const DiscreteMeasure& measure, const SpatialIndex& index,
                     std::span<const double> x0, double r, const WcdOptions& options) {
  if (x0.size() != static_cast<std::size_t>(measure.ambient_dim()))
    throw_invalid("wcd_defect: center has wrong dimension");
  if (!(r > 0.0)) throw_invalid("wcd_defect: radius must be positive");
  if (r < 10.0 * measure.resolution() * (1.0 - 1e-12))
    throw RangeError("wcd_defect: radius must be at least 10 * resolution");
  if (options.samples == 0) throw_invalid("wcd_defect: need at least one sample");
  if (!(options.scale_ratio > 1.0)) throw_invalid("wcd_defect: scale ratio must exceed 1");
  std::vector<std::size_t> pool = index.points_in_ball(x0, r);
  if (pool.size() < 2) throw_invalid("wcd_defect: fewer than two support points in the ball");

  // Partial Fisher-Yates with a seeded 64-bit generator.
  std::mt19937_64 rng(options.seed);
  const std::size_t take = std::min(options.samples, pool.size());
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(take);
  std::sort(pool.begin(), pool.end());

  WcdDefect out;
  out.center.assign(x0.begin(), x0.end());
  out.radius = r;
  out.samples = take;
  for (double t = measure.resolution(); t <= r * (1.0 + 1e-12); t *= options.scale_ratio)
    out.scales.push_back(t);

  const int n = measure.target_dim();
  const std::size_t ns = out.scales.size();
  std::vector<double> mass(take * ns);
  parallel_for(take, [&](std::size_t i) {
    for (std::size_t j = 0; j < ns; ++j)
      mass[i * ns + j] = index.ball_mass(measure.point(pool[i]), out.scales[j]);
  });
  std::vector<double> tn(ns);
  double max_ratio = 0.0;
  for (std::size_t j = 0; j < ns; ++j) tn[j] = std::pow(out.scales[j], n);
  for (std::size_t c = 0; c < mass.size(); ++c) max_ratio = std::max(max_ratio, mass[c] / tn[c % ns]);

  const double rn = std::pow(r, n);
  auto defect = [&](double c1) {
    double worst = 0.0;
    for (std::size_t c = 0; c < mass.size(); ++c)
      worst = std::max(worst, std::abs(mass[c] - c1 * tn[c % ns]));
    return worst / rn;
  };
  // The defect is a maximum of convex functions of c1, so golden section
  // converges to the global minimum.
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 2.0 * max_ratio;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = defect(x1), f2 = defect(x2);
  for (int it = 0; it < 100 && b - a > 1e-14 * std::max(1.0, max_ratio); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = defect(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = defect(x2);
    }
  }
  out.c1 = f1 <= f2 ? x1 : x2;
  out.defect = std::min(f1, f2);
  return out;
}

UniformityCheck uniformity_identity_check(const DiscreteMeasure& measure,
                                          const SpatialIndex& index, const KernelSpec& profile,
                                          std::span<const std::size_t> centers,
                                          std::span<const double> scales) {
  if (!profile.smooth())
    throw UnsupportedKernel("uniformity_identity_check: needs a gauss or invpow profile");
  if (centers.empty() || scales.empty())
    throw_invalid("uniformity_identity_check: empty center or scale grid");
  UniformityCheck out;
  const double lo = 5.0 * measure.resolution();
  const double hi = measure.diameter() / 4.0;
  for (double t : scales) {
    if (!(t > 0.0)) throw_invalid("uniformity_identity_check: scales must be positive");
    if (t < lo * (1.0 - 1e-12) || t > hi * (1.0 + 1e-12))
      out.warnings.push_back("scale " + std::to_string(t) + " lies outside [5 * resolution, " +
                             "diameter / 4]");
  }
  for (std::size_t c : centers)
    if (c >= measure.size()) throw_invalid("uniformity_identity_check: center out of range");
  const RadialKernel kernel(profile, KernelKind::Phi);
  const std::size_t ns = scales.size();
  out.values.assign(centers.size() * ns, 0.0);
  parallel_for(centers.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < ns; ++j)
      out.values[i * ns + j] = kernel_sum(measure, index, kernel, measure.point(centers[i]), scales[j]);
  });
  std::vector<double> sorted = out.values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  out.constant = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  if (!(out.constant > 0.0)) throw_invalid("uniformity_identity_check: median value is zero");
  for (double v : out.values) out.variation = std::max(out.variation, std::abs(v / out.constant - 1.0));
  return out;
}

}  // namespace rectiscan
