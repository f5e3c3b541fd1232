#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rectiscan/kernels.hpp"
#include "rectiscan/measure.hpp"
#include "rectiscan/spatial_index.hpp"

namespace rectiscan {

/// mu(B(x,r))/r^n - mu(B(x,2r))/(2r)^n. Throws RangeError unless
/// resolution <= r <= diameter.
double delta_density(const DiscreteMeasure& measure, const SpatialIndex& index,
                     std::span<const double> x, double r);

/// int (phi_t - phi_2t)(y - x) dmu(y).
double delta_smooth(const DiscreteMeasure& measure, const SpatialIndex& index,
                    const KernelSpec& spec, std::span<const double> x, double t);

/// int t d/dt phi_t(y - x) dmu(y).
double delta_smooth_dt(const DiscreteMeasure& measure, const SpatialIndex& index,
                       const KernelSpec& spec, std::span<const double> x, double t);

/// With discrete set, integrates D^k[phi_t]; otherwise t^k d^k/dt^k phi_t.
double delta_k(const DiscreteMeasure& measure, const SpatialIndex& index, const KernelSpec& spec,
               std::span<const double> x, double t, int k, bool discrete);

/// Weighted sum of a prepared kernel around x. The sum runs over the
/// truncation ball in the index's fixed traversal order.
double kernel_sum(const DiscreteMeasure& measure, const SpatialIndex& index,
                  const RadialKernel& kernel, std::span<const double> x, double t);

/// Radius beyond which kernel_sum ignores points.
double truncation_radius(const RadialKernel& kernel, double t, double diameter);

enum class FunctionalTag {
  DeltaDensity,
  DeltaSmooth,
  DeltaSmoothDt,
  DeltaSmoothK,
  DeltaSmoothDtK,
  Beta1,
  Beta2,
  AlphaCoeff,
  WcdDefect,
};

struct Functional {
  FunctionalTag tag = FunctionalTag::DeltaDensity;
  std::optional<KernelSpec> kernel;
  int k = 1;

  /// Names as used on the command line: delta-density, delta-smooth,
  /// delta-smooth-dt, delta-k, delta-dt-k, beta1, beta2, alpha, wcd.
  static Functional parse(const std::string& name, const std::optional<KernelSpec>& kernel,
                          int k = 1);
  std::string name() const;
};

/// Value of the functional at one (center, scale) cell.
double evaluate_functional(const Functional& functional, const DiscreteMeasure& measure,
                           const SpatialIndex& index, std::span<const double> x, double r);

/// Deterministic center sample. Every point is kept when the measure has at
/// most max_centers points; otherwise points are drawn by systematic
/// sampling along the cumulative mass, with the pool visited in a fixed
/// hashed order so that regular grids do not alias. Indices come back
/// ascending; mass[i] is the share
/// of the total mass each sampled center stands for.
struct CenterSample {
  std::vector<std::size_t> indices;
  std::vector<double> mass;
};

CenterSample sample_centers(const DiscreteMeasure& measure, std::size_t max_centers = 5000);
CenterSample sample_centers(const DiscreteMeasure& measure, std::span<const std::size_t> pool,
                            std::size_t max_centers);

/// Distance from x to the edge of the data, estimated in the principal
/// n-dimensional subspace of the point set: interval ends for n = 1, the
/// convex hull for n = 2, the bounding box otherwise. Zero outside.
class BoundaryModel {
 public:
  explicit BoundaryModel(const DiscreteMeasure& measure);
  double distance(std::span<const double> x) const;

 private:
  int d_ = 0;
  int n_ = 0;
  std::vector<double> mean_;
  std::vector<double> axes_;  // n rows of length d
  std::vector<double> lo_, hi_;
  std::vector<std::pair<double, double>> hull_;
};

struct CellError {
  std::size_t center = 0;
  std::size_t scale = 0;
  std::string message;
};

struct CoefficientField {
  Functional functional;
  std::vector<std::size_t> centers;
  /// Mass each center represents (see CenterSample).
  std::vector<double> center_mass;
  std::vector<double> scales;
  /// Row-major centers x scales; poisoned cells hold NaN.
  std::vector<double> values;
  /// Cells within 2r of the estimated boundary.
  std::vector<bool> boundary;
  std::vector<CellError> errors;

  double at(std::size_t i, std::size_t j) const { return values[i * scales.size() + j]; }
};

CoefficientField coefficient_field(const DiscreteMeasure& measure, const SpatialIndex& index,
                                   const Functional& functional, const CenterSample& centers,
                                   std::span<const double> scales);

/// Log-scale grid for dr/r integrals: midpoints lo * ratio^(j + 1/2) of the
/// cells [lo ratio^j, lo ratio^(j+1)] that fit below hi.
std::vector<double> log_midpoint_grid(double lo, double hi, double ratio);

/// sum_j |v(x, r_j)|^2 ln(ratio) over a log_midpoint_grid.
double scale_energy(const Functional& functional, const DiscreteMeasure& measure,
                    const SpatialIndex& index, std::span<const double> x, double lo, double hi,
                    double ratio);

}  // namespace rectiscan
