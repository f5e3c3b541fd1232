#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rectiscan/measure.hpp"
#include "rectiscan/spatial_index.hpp"

namespace rectiscan {

enum class ObjectiveKind { L1, L2 };

/// An affine n-plane in R^d with an orthonormal basis.
struct PlaneFit {
  int d = 0;
  int n = 0;
  std::vector<double> base;
  /// n rows of length d, orthonormal.
  std::vector<double> basis;
  double objective = 0.0;
  ObjectiveKind kind = ObjectiveKind::L2;
  /// Set when the weighted second moments have rank below n.
  bool degenerate = false;

  std::span<const double> direction(int i) const {
    return {basis.data() + static_cast<std::size_t>(i) * d, static_cast<std::size_t>(d)};
  }
  double distance(std::span<const double> p) const;
  /// Orthogonal projection of p onto the plane.
  std::vector<double> project(std::span<const double> p) const;
};

/// Weighted atoms in R^d (row-major coordinates).
struct Atoms {
  int d = 0;
  std::vector<double> coords;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
  }
  void add(std::span<const double> p, double w);
};

/// Points of the measure in the closed ball, in index order.
Atoms atoms_in_ball(const DiscreteMeasure& measure, const SpatialIndex& index,
                    std::span<const double> center, double radius);

/// Weighted least-squares n-plane through the atoms (no size check).
PlaneFit fit_plane_l2(const Atoms& atoms, int n);
/// sum w * dist(p, L).
double l1_objective(const Atoms& atoms, const PlaneFit& plane);

struct BetaResult {
  double value = 0.0;
  PlaneFit plane;
};

/// sqrt(sum w dist^2 / r^(n+2)) for the least-squares plane. Throws
/// InvalidArgument when the ball holds fewer than n + 1 points.
BetaResult beta2(const DiscreteMeasure& measure, const SpatialIndex& index,
                 std::span<const double> x, double r);

/// sum w dist / r^(n+1) minimized by iteratively reweighted least squares
/// started from the beta2 plane.
BetaResult beta1(const DiscreteMeasure& measure, const SpatialIndex& index,
                 std::span<const double> x, double r);

/// IRLS on explicit atoms; the returned objective is unnormalized.
PlaneFit fit_plane_l1(const Atoms& atoms, int n, double r);

/// sup |int f dsigma - int f dnu| over 1-Lipschitz f supported in the closed
/// ball B(center, radius). Atoms outside the ball are dropped. Throws
/// SizeError when more than max_atoms atoms remain.
double flat_norm_distance(const Atoms& sigma, const Atoms& nu, std::span<const double> center,
                          double radius, std::size_t max_atoms = 2000);

}  // namespace rectiscan
