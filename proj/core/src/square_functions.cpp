#include "rectiscan/square_functions.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "rectiscan/alpha.hpp"
#include "rectiscan/errors.hpp"
#include "rectiscan/geometry.hpp"
#include "rectiscan/parallel.hpp"
#include "rectiscan/uniformity.hpp"

namespace rectiscan {
namespace {

void check_center(const DiscreteMeasure& measure, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(measure.ambient_dim()))
    throw_invalid("center has " + std::to_string(x.size()) + " coordinates, expected " +
                  std::to_string(measure.ambient_dim()));
}

void check_scale(const DiscreteMeasure& measure, double t, const char* who) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw_invalid(std::string(who) + ": scale must be positive");
  if (t < measure.resolution() * (1.0 - 1e-12))
    throw RangeError(std::string(who) + ": scale " + std::to_string(t) +
                     " is below the measure resolution " + std::to_string(measure.resolution()));
}

// splitmix64 finalizer; a fixed shuffle key for sampling.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void require_smooth(const KernelSpec& spec, const char* who) {
  if (!spec.smooth())
    throw UnsupportedKernel(std::string(who) + ": needs a smooth kernel (gauss or invpow)");
}

}  // namespace

double delta_density(const DiscreteMeasure& measure, const SpatialIndex& index,
                     std::span<const double> x, double r) {
  check_center(measure, x);
  check_scale(measure, r, "delta_density");
  if (measure.diameter() > 0.0 && r > measure.diameter() * (1.0 + 1e-12))
    throw RangeError("delta_density: radius " + std::to_string(r) +
                     " exceeds the diameter " + std::to_string(measure.diameter()));
  const int n = measure.target_dim();
  return index.ball_mass(x, r) / std::pow(r, n) - index.ball_mass(x, 2.0 * r) / std::pow(2.0 * r, n);
}

double truncation_radius(const RadialKernel& kernel, double t, double diameter) {
  const KernelSpec& spec = kernel.spec();
  const double widest = kernel.scale_factor() * t;
  switch (spec.family) {
    case KernelFamily::HardIndicator:
      return widest;
    case KernelFamily::Gaussian:
      return 12.0 * t * std::max(1.0, kernel.scale_factor() / 2.0);
    case KernelFamily::InversePower:
      return diameter > 0.0 ? std::min(1e3 * widest, diameter) : 1e3 * widest;
  }
  return widest;
}

double kernel_sum(const DiscreteMeasure& measure, const SpatialIndex& index,
                  const RadialKernel& kernel, std::span<const double> x, double t) {
  const double radius = truncation_radius(kernel, t, measure.diameter());
  double s = 0.0;
  index.for_each_in_ball(x, radius, [&](std::size_t i, double d2) {
    s += measure.weight(i) * kernel(d2, t);
  });
  return s;
}

double delta_smooth(const DiscreteMeasure& measure, const SpatialIndex& index,
                    const KernelSpec& spec, std::span<const double> x, double t) {
  return delta_k(measure, index, spec, x, t, 1, true);
}

double delta_smooth_dt(const DiscreteMeasure& measure, const SpatialIndex& index,
                       const KernelSpec& spec, std::span<const double> x, double t) {
  return delta_k(measure, index, spec, x, t, 1, false);
}

double delta_k(const DiscreteMeasure& measure, const SpatialIndex& index, const KernelSpec& spec,
               std::span<const double> x, double t, int k, bool discrete) {
  require_smooth(spec, "delta_k");
  if (k < 1 || k > 4) throw_invalid("delta_k: order k must lie in [1, 4]");
  check_center(measure, x);
  check_scale(measure, t, "delta_k");
  const RadialKernel kernel(spec, discrete ? KernelKind::Difference : KernelKind::Derivative, k);
  return kernel_sum(measure, index, kernel, x, t);
}

Functional Functional::parse(const std::string& name, const std::optional<KernelSpec>& kernel,
                             int k) {
  Functional f;
  f.kernel = kernel;
  f.k = k;
  if (name == "delta-density") {
    f.tag = FunctionalTag::DeltaDensity;
  } else if (name == "delta-smooth") {
    f.tag = FunctionalTag::DeltaSmooth;
  } else if (name == "delta-smooth-dt") {
    f.tag = FunctionalTag::DeltaSmoothDt;
  } else if (name == "delta-k") {
    f.tag = FunctionalTag::DeltaSmoothK;
  } else if (name == "delta-dt-k") {
    f.tag = FunctionalTag::DeltaSmoothDtK;
  } else if (name == "beta1") {
    f.tag = FunctionalTag::Beta1;
  } else if (name == "beta2") {
    f.tag = FunctionalTag::Beta2;
  } else if (name == "alpha") {
    f.tag = FunctionalTag::AlphaCoeff;
  } else if (name == "wcd") {
    f.tag = FunctionalTag::WcdDefect;
  } else {
    throw_invalid("unknown functional '" + name +
                  "' (expected delta-density, delta-smooth, delta-smooth-dt, delta-k, "
                  "delta-dt-k, beta1, beta2, alpha or wcd)");
  }
  if (k < 1 || k > 4) throw_invalid("functional order k must lie in [1, 4]");
  return f;
}

std::string Functional::name() const {
  switch (tag) {
    case FunctionalTag::DeltaDensity: return "delta-density";
    case FunctionalTag::DeltaSmooth: return "delta-smooth";
    case FunctionalTag::DeltaSmoothDt: return "delta-smooth-dt";
    case FunctionalTag::DeltaSmoothK: return "delta-k";
    case FunctionalTag::DeltaSmoothDtK: return "delta-dt-k";
    case FunctionalTag::Beta1: return "beta1";
    case FunctionalTag::Beta2: return "beta2";
    case FunctionalTag::AlphaCoeff: return "alpha";
    case FunctionalTag::WcdDefect: return "wcd";
  }
  return "unknown";
}

double evaluate_functional(const Functional& functional, const DiscreteMeasure& measure,
                           const SpatialIndex& index, std::span<const double> x, double r) {
  const KernelSpec spec = functional.kernel.value_or(KernelSpec::gaussian(1, measure.target_dim()));
  switch (functional.tag) {
    case FunctionalTag::DeltaDensity:
      return delta_density(measure, index, x, r);
    case FunctionalTag::DeltaSmooth:
      return delta_k(measure, index, spec, x, r, 1, true);
    case FunctionalTag::DeltaSmoothDt:
      return delta_k(measure, index, spec, x, r, 1, false);
    case FunctionalTag::DeltaSmoothK:
      return delta_k(measure, index, spec, x, r, functional.k, true);
    case FunctionalTag::DeltaSmoothDtK:
      return delta_k(measure, index, spec, x, r, functional.k, false);
    case FunctionalTag::Beta1:
      return beta1(measure, index, x, r).value;
    case FunctionalTag::Beta2:
      return beta2(measure, index, x, r).value;
    case FunctionalTag::AlphaCoeff:
      return alpha_coeff(measure, index, x, r).value;
    case FunctionalTag::WcdDefect:
      return wcd_defect(measure, index, x, r).defect;
  }
  return 0.0;
}

CenterSample sample_centers(const DiscreteMeasure& measure, std::size_t max_centers) {
  std::vector<std::size_t> all(measure.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return sample_centers(measure, all, max_centers);
}

CenterSample sample_centers(const DiscreteMeasure& measure, std::span<const std::size_t> pool,
                            std::size_t max_centers) {
  if (max_centers == 0) throw_invalid("sample_centers: need at least one center");
  CenterSample out;
  if (pool.size() <= max_centers) {
    for (std::size_t i : pool) {
      out.indices.push_back(i);
      out.mass.push_back(measure.weight(i));
    }
    return out;
  }
  std::vector<std::pair<std::uint64_t, std::size_t>> order;
  order.reserve(pool.size());
  for (std::size_t i : pool) order.emplace_back(mix(i), i);
  std::sort(order.begin(), order.end());

  double total = 0.0;
  for (const auto& entry : order) total += measure.weight(entry.second);
  const double step = total / static_cast<double>(max_centers);
  std::vector<std::pair<std::size_t, double>> picked;
  double cumulative = 0.0;
  std::size_t draw = 0;
  for (const auto& [key, i] : order) {
    cumulative += measure.weight(i);
    std::size_t hits = 0;
    while (draw < max_centers && (static_cast<double>(draw) + 0.5) * step <= cumulative) {
      ++hits;
      ++draw;
    }
    if (hits > 0) picked.emplace_back(i, step * static_cast<double>(hits));
  }
  if (draw < max_centers) {
    // Rounding at the top of the cumulative sum: credit the last point.
    const double missing = step * static_cast<double>(max_centers - draw);
    const std::size_t last = order.back().second;
    if (!picked.empty() && picked.back().first == last)
      picked.back().second += missing;
    else
      picked.emplace_back(last, missing);
  }
  std::sort(picked.begin(), picked.end());
  for (const auto& [i, m] : picked) {
    out.indices.push_back(i);
    out.mass.push_back(m);
  }
  return out;
}

BoundaryModel::BoundaryModel(const DiscreteMeasure& measure)
    : d_(measure.ambient_dim()), n_(measure.target_dim()) {
  const std::size_t count = measure.size();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d_);
  for (std::size_t i = 0; i < count; ++i)
    for (int k = 0; k < d_; ++k) mean[k] += measure.point(i)[k];
  mean /= static_cast<double>(count);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d_, d_);
  Eigen::VectorXd y(d_);
  for (std::size_t i = 0; i < count; ++i) {
    for (int k = 0; k < d_; ++k) y[k] = measure.point(i)[k] - mean[k];
    cov.noalias() += y * y.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  mean_.assign(mean.data(), mean.data() + d_);
  axes_.resize(static_cast<std::size_t>(n_) * d_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < d_; ++k)
      axes_[static_cast<std::size_t>(i) * d_ + k] = eig.eigenvectors()(k, d_ - 1 - i);

  std::vector<double> proj(n_);
  lo_.assign(n_, std::numeric_limits<double>::infinity());
  hi_.assign(n_, -std::numeric_limits<double>::infinity());
  std::vector<std::pair<double, double>> planar;
  for (std::size_t i = 0; i < count; ++i) {
    for (int a = 0; a < n_; ++a) {
      double s = 0.0;
      for (int k = 0; k < d_; ++k)
        s += (measure.point(i)[k] - mean_[k]) * axes_[static_cast<std::size_t>(a) * d_ + k];
      proj[a] = s;
      lo_[a] = std::min(lo_[a], s);
      hi_[a] = std::max(hi_[a], s);
    }
    if (n_ == 2) planar.emplace_back(proj[0], proj[1]);
  }
  if (n_ == 2) {
    // Monotone chain convex hull, counter-clockwise.
    std::sort(planar.begin(), planar.end());
    planar.erase(std::unique(planar.begin(), planar.end()), planar.end());
    auto cross = [](const std::pair<double, double>& o, const std::pair<double, double>& a,
                    const std::pair<double, double>& b) {
      return (a.first - o.first) * (b.second - o.second) -
             (a.second - o.second) * (b.first - o.first);
    };
    std::vector<std::pair<double, double>> hull(2 * planar.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < planar.size(); ++i) {
      while (k >= 2 && cross(hull[k - 2], hull[k - 1], planar[i]) <= 0) --k;
      hull[k++] = planar[i];
    }
    for (std::size_t i = planar.size() - 1, t = k + 1; i-- > 0;) {
      while (k >= t && cross(hull[k - 2], hull[k - 1], planar[i]) <= 0) --k;
      hull[k++] = planar[i];
    }
    hull.resize(k > 1 ? k - 1 : k);
    hull_ = std::move(hull);
  }
}

double BoundaryModel::distance(std::span<const double> x) const {
  std::vector<double> p(n_);
  for (int a = 0; a < n_; ++a) {
    double s = 0.0;
    for (int k = 0; k < d_; ++k) s += (x[k] - mean_[k]) * axes_[static_cast<std::size_t>(a) * d_ + k];
    p[a] = s;
  }
  if (n_ == 2 && hull_.size() >= 3) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull_.size(); ++i) {
      const auto& a = hull_[i];
      const auto& b = hull_[(i + 1) % hull_.size()];
      const double ex = b.first - a.first, ey = b.second - a.second;
      const double len = std::hypot(ex, ey);
      if (len == 0.0) continue;
      // Signed distance to the edge line; positive inside a CCW hull.
      const double signed_dist = (ex * (p[1] - a.second) - ey * (p[0] - a.first)) / len;
      if (signed_dist < 0.0) return 0.0;
      best = std::min(best, signed_dist);
    }
    return best;
  }
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < n_; ++a) best = std::min({best, p[a] - lo_[a], hi_[a] - p[a]});
  return std::max(best, 0.0);
}

CoefficientField coefficient_field(const DiscreteMeasure& measure, const SpatialIndex& index,
                                   const Functional& functional, const CenterSample& centers,
                                   std::span<const double> scales) {
  if (centers.indices.empty()) throw_invalid("coefficient_field: no centers");
  if (scales.empty()) throw_invalid("coefficient_field: no scales");
  for (std::size_t j = 0; j < scales.size(); ++j)
    if (!(scales[j] > 0.0) || (j > 0 && !(scales[j] > scales[j - 1])))
      throw_invalid("coefficient_field: scales must be positive and increasing");
  CoefficientField field;
  field.functional = functional;
  field.centers = centers.indices;
  field.center_mass = centers.mass;
  field.scales.assign(scales.begin(), scales.end());
  const std::size_t ns = scales.size();
  field.values.assign(field.centers.size() * ns, 0.0);
  field.boundary.assign(field.centers.size() * ns, false);
  std::vector<std::string> failures(field.values.size());
  const BoundaryModel boundary(measure);
  parallel_for(field.centers.size(), [&](std::size_t i) {
    const auto x = measure.point(field.centers[i]);
    const double edge = boundary.distance(x);
    for (std::size_t j = 0; j < ns; ++j) {
      const std::size_t cell = i * ns + j;
      field.boundary[cell] = edge < 2.0 * scales[j];
      try {
        field.values[cell] = evaluate_functional(functional, measure, index, x, scales[j]);
      } catch (const Error& e) {
        field.values[cell] = std::numeric_limits<double>::quiet_NaN();
        failures[cell] = e.what();
      }
    }
  });
  for (std::size_t cell = 0; cell < failures.size(); ++cell)
    if (!failures[cell].empty())
      field.errors.push_back({cell / ns, cell % ns, std::move(failures[cell])});
  return field;
}

std::vector<double> log_midpoint_grid(double lo, double hi, double ratio) {
  if (!(lo > 0.0) || !(hi > lo)) throw_invalid("log_midpoint_grid: need 0 < lo < hi");
  if (!(ratio > 1.0)) throw_invalid("log_midpoint_grid: ratio must exceed 1");
  std::vector<double> grid;
  const double half = std::sqrt(ratio);
  for (int j = 0;; ++j) {
    const double top = lo * std::pow(ratio, j + 1);
    if (top > hi * (1.0 + 1e-12)) break;
    grid.push_back(lo * std::pow(ratio, j) * half);
  }
  return grid;
}

double scale_energy(const Functional& functional, const DiscreteMeasure& measure,
                    const SpatialIndex& index, std::span<const double> x, double lo, double hi,
                    double ratio) {
  const double w = std::log(ratio);
  double s = 0.0;
  for (double r : log_midpoint_grid(lo, hi, ratio)) {
    const double v = evaluate_functional(functional, measure, index, x, r);
    s += v * v * w;
  }
  return s;
}

}  // namespace rectiscan
