#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rectiscan/measure.hpp"
#include "rectiscan/spatial_index.hpp"

namespace rectiscan {

struct DavidCube {
  std::size_t id = 0;
  int generation = 0;
  /// Index of the net point the cube is built around.
  std::size_t center = 0;
  double side = 0.0;
  double mass = 0.0;
  /// Point indices, ascending.
  std::vector<std::size_t> members;
  /// -1 for the root.
  std::int64_t parent = -1;
  std::vector<std::size_t> children;
};

/// Nested net decomposition of the support into cubes of side
/// 2^-j * unit, where unit is the diameter of the point set.
///
/// Generation j centers form a greedy farthest-point net at threshold
/// side/2, and each generation's net extends the previous one. Every net
/// point hangs under its nearest center of the previous generation, and a
/// point belongs to the cubes along the chain above its nearest finest-level
/// center. This gives exact partition and nesting, center separation greater
/// than side/2, and members within distance side of the center.
class CubeLattice {
 public:
  int max_generation() const { return static_cast<int>(levels_.size()) - 1; }
  double unit() const { return unit_; }
  double side(int generation) const;

  const std::vector<DavidCube>& cubes() const { return cubes_; }
  const DavidCube& cube(std::size_t id) const { return cubes_.at(id); }
  /// Cube ids of one generation, in tree order.
  const std::vector<std::size_t>& generation(int j) const;
  /// Id of the generation-j cube containing the point.
  std::size_t cube_of(std::size_t point, int generation) const;
  /// All descendants of a cube (excluding itself), generation by generation.
  std::vector<std::size_t> descendants(std::size_t id) const;

 private:
  friend CubeLattice build_lattice(const DiscreteMeasure&, const SpatialIndex&, int);
  double unit_ = 1.0;
  std::vector<DavidCube> cubes_;
  std::vector<std::vector<std::size_t>> levels_;
  std::vector<std::vector<std::uint32_t>> lookup_;
};

/// Throws InvalidArgument when 2^-jmax * unit falls below the resolution.
CubeLattice build_lattice(const DiscreteMeasure& measure, const SpatialIndex& index, int jmax);

struct CubeBall {
  std::vector<double> center;
  double radius = 0.0;
};

/// The ball B_Q of radius 10 * side about the cube's center.
CubeBall cube_ball(const CubeLattice& lattice, const DiscreteMeasure& measure, std::size_t id);

struct GenerationAudit {
  int generation = 0;
  std::size_t cubes = 0;
  double min_mass_ratio = 0.0;  // mu(Q) / side^n
  double max_mass_ratio = 0.0;
  double min_diameter_ratio = 0.0;  // diam(Q) / side
  double max_diameter_ratio = 0.0;
  bool flagged = false;
};

struct LatticeAudit {
  double band_lo = 1.0 / 16.0;
  double band_hi = 16.0;
  std::vector<GenerationAudit> generations;
};

LatticeAudit lattice_audit(const CubeLattice& lattice, const DiscreteMeasure& measure,
                           double band_lo = 1.0 / 16.0, double band_hi = 16.0);

/// Largest jmax accepted by build_lattice for this measure.
int max_lattice_depth(const DiscreteMeasure& measure);

}  // namespace rectiscan
