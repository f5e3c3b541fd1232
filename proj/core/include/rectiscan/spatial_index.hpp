#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rectiscan/measure.hpp"

namespace rectiscan {

/// Immutable kd-tree over the points of a measure.
///
/// Subtree masses are stored as exact fixed-point sums, so ball_mass()
/// returns exactly the value a brute-force scan obtains with the same
/// MassQuantizer. All queries are const and safe to run concurrently.
class SpatialIndex {
 public:
  explicit SpatialIndex(const DiscreteMeasure& measure);
  SpatialIndex(std::span<const double> coords, std::span<const double> weights, int dim,
               MassQuantizer quantizer);

  std::size_t size() const { return perm_.size(); }
  int dim() const { return d_; }

  double ball_mass(std::span<const double> center, double radius) const;
  FixedMass ball_mass_fixed(std::span<const double> center, double radius) const;
  std::size_t ball_count(std::span<const double> center, double radius) const;

  /// Original indices of the points in the closed ball, ascending.
  std::vector<std::size_t> points_in_ball(std::span<const double> center, double radius) const;

  /// Calls visit(original_index, squared_distance) for every point in the
  /// closed ball, in a fixed tree order.
  template <class Visit>
  void for_each_in_ball(std::span<const double> center, double radius, Visit&& visit) const;

  /// The k nearest points as (distance, index), nearest first; ties by index.
  std::vector<std::pair<double, std::size_t>> nearest(std::span<const double> center,
                                                      std::size_t k) const;
  /// Distance to the k-th nearest point (k >= 1, counting a point at the
  /// query location).
  double knn_distance(std::span<const double> center, std::size_t k) const;

  /// Distance from center to the nearest point at strictly positive distance;
  /// +inf when no such point exists.
  double nearest_positive_distance(std::span<const double> center) const;
  double farthest_distance(std::span<const double> center) const;

  /// Exact diameter of the point set.
  double diameter() const;

 private:
  struct Node {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    FixedMass mass = 0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end, std::span<const double> coords);
  std::span<const double> lo(std::size_t node) const {
    return {boxes_.data() + node * 2 * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  std::span<const double> hi(std::size_t node) const {
    return {boxes_.data() + (node * 2 + 1) * static_cast<std::size_t>(d_),
            static_cast<std::size_t>(d_)};
  }
  std::span<const double> tree_point(std::size_t slot) const {
    return {points_.data() + slot * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  double box_min_dist2(std::size_t node, std::span<const double> c) const;
  double box_max_dist2(std::size_t node, std::span<const double> c) const;

  int d_ = 0;
  MassQuantizer quantizer_;
  std::vector<std::size_t> perm_;  // tree slot -> original index
  std::vector<double> points_;     // coordinates in tree order
  std::vector<FixedMass> masses_;  // quantized weights in tree order
  std::vector<Node> nodes_;
  std::vector<double> boxes_;
};

template <class Visit>
void SpatialIndex::for_each_in_ball(std::span<const double> center, double radius,
                                    Visit&& visit) const {
  if (nodes_.empty()) return;
  const double r2 = radius * radius;
  std::int32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const std::size_t id = static_cast<std::size_t>(stack[--top]);
    const Node& node = nodes_[id];
    if (box_min_dist2(id, center) > r2) continue;
    if (node.left < 0) {
      for (std::uint32_t s = node.begin; s < node.end; ++s) {
        double dist2 = squared_distance(tree_point(s), center);
        if (dist2 <= r2) visit(perm_[s], dist2);
      }
      continue;
    }
    stack[top++] = node.right;
    stack[top++] = node.left;
  }
}

}  // namespace rectiscan
