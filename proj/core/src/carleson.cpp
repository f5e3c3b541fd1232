#include "rectiscan/carleson.hpp"

#include <cmath>
#include <optional>

#include "rectiscan/errors.hpp"
#include "rectiscan/parallel.hpp"
#include "rectiscan/regression.hpp"

namespace rectiscan {
namespace {

void summarize(CarlesonReport& report) {
  std::vector<double> x, y;
  report.sup = 0.0;
  for (const CarlesonBall& b : report.balls) {
    if (b.skipped) continue;
    report.sup = std::max(report.sup, b.value);
    x.push_back(std::log2(b.radius / report.r_min));
    y.push_back(b.value);
  }
  bool distinct = false;
  for (double v : x) distinct = distinct || v != x.front();
  if (x.size() >= 2 && distinct) {
    const LinearFit fit = linear_fit(x, y);
    report.slope = fit.slope;
    report.intercept = fit.intercept;
    report.correlation = fit.correlation;
  }
}

void check_ball(const DiscreteMeasure& measure, const Ball& ball) {
  if (ball.center.size() != static_cast<std::size_t>(measure.ambient_dim()))
    throw_invalid("carleson: ball center has wrong dimension");
  if (!(ball.radius > 0.0)) throw_invalid("carleson: ball radius must be positive");
}

}  // namespace

CarlesonReport carleson_norm(const CoefficientField& field, const DiscreteMeasure& measure,
                             const SpatialIndex& index, const std::vector<Ball>& balls,
                             bool exclude_boundary) {
  if (field.scales.empty()) throw_invalid("carleson_norm: field has no scales");
  CarlesonReport report;
  report.functional = field.functional.name();
  report.scale_ratio =
      field.scales.size() >= 2 ? field.scales[1] / field.scales[0] : std::sqrt(2.0);
  report.r_min = field.scales.front() / std::sqrt(report.scale_ratio);
  const double w = std::log(report.scale_ratio);
  const int n = measure.target_dim();
  const std::size_t ns = field.scales.size();
  const double half = std::sqrt(report.scale_ratio);
  for (const Ball& ball : balls) {
    check_ball(measure, ball);
    CarlesonBall row{ball.center, ball.radius};
    const double r2 = ball.radius * ball.radius;
    std::vector<std::size_t> inside;
    double sampled = 0.0;
    for (std::size_t i = 0; i < field.centers.size(); ++i) {
      if (squared_distance(measure.point(field.centers[i]), ball.center) <= r2) {
        inside.push_back(i);
        sampled += field.center_mass[i];
      }
    }
    if (inside.empty()) {
      row.skipped = true;
      report.warnings.push_back("ball of radius " + std::to_string(ball.radius) +
                                " contains no sampled centers; skipped");
      report.balls.push_back(std::move(row));
      continue;
    }
    const double rescale = index.ball_mass(ball.center, ball.radius) / sampled;
    std::size_t poisoned = 0;
    double sum = 0.0;
    for (std::size_t i : inside) {
      const double wi = field.center_mass[i] * rescale;
      for (std::size_t j = 0; j < ns; ++j) {
        if (field.scales[j] * half > ball.radius * (1.0 + 1e-12)) break;
        const std::size_t cell = i * ns + j;
        if (exclude_boundary && field.boundary[cell]) continue;
        const double v = field.values[cell];
        if (std::isnan(v)) {
          ++poisoned;
          continue;
        }
        sum += v * v * wi * w;
        ++row.cells;
      }
    }
    if (poisoned)
      report.warnings.push_back(std::to_string(poisoned) + " poisoned cells ignored in ball " +
                                "of radius " + std::to_string(ball.radius));
    row.centers = inside.size();
    row.value = sum / std::pow(ball.radius, n);
    report.balls.push_back(std::move(row));
  }
  summarize(report);
  return report;
}

CarlesonReport carleson_scan(const DiscreteMeasure& measure, const SpatialIndex& index,
                             const Functional& functional, const std::vector<Ball>& balls,
                             const CarlesonOptions& options) {
  CarlesonReport report;
  report.functional = functional.name();
  report.r_min = options.r_min > 0.0 ? options.r_min : measure.resolution();
  report.scale_ratio = options.scale_ratio;
  if (report.r_min < measure.resolution() * (1.0 - 1e-12))
    throw RangeError("carleson_scan: r_min lies below the measure resolution");
  if (!(options.scale_ratio > 1.0)) throw_invalid("carleson_scan: scale ratio must exceed 1");
  const double w = std::log(options.scale_ratio);
  const int n = measure.target_dim();
  std::optional<BoundaryModel> boundary;
  if (options.exclude_boundary) boundary.emplace(measure);

  for (const Ball& ball : balls) {
    check_ball(measure, ball);
    CarlesonBall row{ball.center, ball.radius};
    const std::vector<std::size_t> pool = index.points_in_ball(ball.center, ball.radius);
    std::vector<double> scales;
    if (ball.radius > report.r_min * options.scale_ratio * (1.0 - 1e-12))
      scales = log_midpoint_grid(report.r_min, ball.radius, options.scale_ratio);
    if (pool.empty() || scales.empty()) {
      row.skipped = true;
      report.warnings.push_back("ball of radius " + std::to_string(ball.radius) +
                                (pool.empty() ? " contains no support points"
                                              : " is below one scale cell") +
                                "; skipped");
      report.balls.push_back(std::move(row));
      continue;
    }
    const CenterSample sample = sample_centers(measure, pool, options.max_centers_per_ball);
    double sampled = 0.0;
    for (double m : sample.mass) sampled += m;
    const double rescale = index.ball_mass(ball.center, ball.radius) / sampled;
    const std::size_t ns = scales.size();
    std::vector<double> partial(sample.indices.size(), 0.0);
    std::vector<std::size_t> used(sample.indices.size(), 0);
    parallel_for(sample.indices.size(), [&](std::size_t i) {
      const auto x = measure.point(sample.indices[i]);
      const double edge = boundary ? boundary->distance(x) : 0.0;
      double s = 0.0;
      for (std::size_t j = 0; j < ns; ++j) {
        if (boundary && edge < 2.0 * scales[j]) continue;
        const double v = evaluate_functional(functional, measure, index, x, scales[j]);
        s += v * v;
        ++used[i];
      }
      partial[i] = s * sample.mass[i] * rescale * w;
    });
    double sum = 0.0;
    for (std::size_t i = 0; i < partial.size(); ++i) {
      sum += partial[i];
      row.cells += used[i];
    }
    row.centers = sample.indices.size();
    row.value = sum / std::pow(ball.radius, n);
    report.balls.push_back(std::move(row));
  }
  summarize(report);
  return report;
}

}  // namespace rectiscan
