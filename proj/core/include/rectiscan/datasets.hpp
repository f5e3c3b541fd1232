#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rectiscan/measure.hpp"

namespace rectiscan {

enum class GeneratorKind { Plane, Segment, Circle, LipschitzGraph, Cantor4, PerturbedPlane, AtomCloud };
enum class GraphProfile { Sine, AbsSine };

/// Recipe for a synthetic measure. Weights are H^n(total) / count, so the
/// samples approximate H^n restricted to the set.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Segment;
  std::size_t points = 1001;
  std::uint64_t seed = 1;
  int d = 2;
  int n = 1;
  /// Side of the plane patch or length of the segment.
  double length = 1.0;
  /// Circle radius.
  double rho = 1.0;
  /// Graph y = amplitude * profile(2 pi frequency x) over x in [0, length].
  double amplitude = 0.3;
  double frequency = 0.5;
  GraphProfile profile = GraphProfile::Sine;
  /// Cantor generation.
  int K = 6;
  /// Standard deviation of the normal noise of a perturbed plane.
  double noise = 0.01;

  static GeneratorKind parse_kind(const std::string& name);
  static std::string kind_name(GeneratorKind kind);
};

DiscreteMeasure generate(const GeneratorSpec& spec);

/// Label of the generation-k square holding each point of Cantor4{K}
/// (points are listed in Z-order, so this is index / 4^(K-k)).
std::vector<std::size_t> cantor_labels(int K, int k);

}  // namespace rectiscan
