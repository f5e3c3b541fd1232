#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rectiscan/geometry.hpp"
#include "rectiscan/lattice.hpp"

namespace rectiscan {

struct AlphaOptions {
  /// Grid pitch of the flat measure, as a fraction of the radius. For n >= 2
  /// the pitch is coarsened until the flat atoms fit flat_atom_budget.
  double pitch_fraction = 1.0 / 40.0;
  std::size_t flat_atom_budget = 800;
  /// Measure atoms beyond this count are merged on a grid of the same pitch.
  std::size_t measure_atom_budget = 600;
  /// Candidate planes: rotations k * angle_step, |k| <= angle_steps, times
  /// offsets o * radius * offset_step, |o| <= offset_steps.
  int angle_steps = 3;
  double angle_step = 0.05;
  int offset_steps = 2;
  double offset_step = 1.0 / 20.0;
  int golden_iterations = 16;
};

struct AlphaResult {
  double value = 0.0;
  double c = 0.0;
  PlaneFit plane;
  /// Atom counts entering the transport problems.
  std::size_t measure_atoms = 0;
  std::size_t flat_atoms = 0;
};

/// Upper-bound estimate of
///   inf_{c >= 0, L} dist_B(mu, c H^n|_L) / r^(n+1)
/// over candidate planes around the beta1 plane, with L constrained to pass
/// within r/2 of the center.
AlphaResult alpha_coeff(const DiscreteMeasure& measure, const SpatialIndex& index,
                        std::span<const double> center, double radius,
                        const AlphaOptions& options = {});

/// Discretized c H^n|_L inside B(center, radius) on a grid of the given pitch
/// centered at the projection of center.
Atoms flat_atoms(const PlaneFit& plane, double c, std::span<const double> center, double radius,
                 double pitch);

struct PackingAudit {
  std::size_t root = 0;
  /// depth k covers generations gen(root) .. gen(root) + k.
  std::vector<int> depths;
  /// sum alpha(Q)^2 mu(Q) / mu(root) over cubes up to each depth.
  std::vector<double> cumulative_ratio;
  /// Per-depth mean alpha.
  std::vector<double> mean_alpha;
  std::size_t cubes = 0;
};

/// alpha(Q) is taken on the ball of radius 10 side(Q) about the cube center.
/// max_depth < 0 descends to the finest generation.
PackingAudit alpha_packing_audit(const DiscreteMeasure& measure, const SpatialIndex& index,
                                 const CubeLattice& lattice, std::size_t root,
                                 int max_depth = -1, const AlphaOptions& options = {});

}  // namespace rectiscan
