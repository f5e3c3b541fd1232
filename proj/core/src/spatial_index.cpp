#include "rectiscan/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "rectiscan/errors.hpp"

namespace rectiscan {
namespace {

constexpr std::uint32_t kLeafSize = 12;

}  // namespace

SpatialIndex::SpatialIndex(const DiscreteMeasure& measure)
    : SpatialIndex(measure.coords(), measure.weights(), measure.ambient_dim(),
                   measure.quantizer()) {}

SpatialIndex::SpatialIndex(std::span<const double> coords, std::span<const double> weights,
                           int dim, MassQuantizer quantizer)
    : d_(dim), quantizer_(quantizer) {
  if (dim <= 0) throw_invalid("spatial index: dimension must be positive");
  const std::size_t n = weights.size();
  if (coords.size() != n * static_cast<std::size_t>(dim))
    throw_invalid("spatial index: coordinate count does not match weights");
  if (n >= std::numeric_limits<std::uint32_t>::max())
    throw SizeError("spatial index: too many points");
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  if (n == 0) return;
  nodes_.reserve(2 * (n / kLeafSize + 1));
  build(0, static_cast<std::uint32_t>(n), coords);

  points_.resize(n * static_cast<std::size_t>(d_));
  masses_.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::copy_n(coords.data() + perm_[s] * d_, d_, points_.data() + s * d_);
    masses_[s] = quantizer_.quantize(weights[perm_[s]]);
  }
  // Subtree masses, children before parents (children always have larger ids).
  for (std::size_t id = nodes_.size(); id-- > 0;) {
    Node& node = nodes_[id];
    if (node.left < 0) {
      FixedMass m = 0;
      for (std::uint32_t s = node.begin; s < node.end; ++s) m += masses_[s];
      node.mass = m;
    } else {
      node.mass = nodes_[node.left].mass + nodes_[node.right].mass;
    }
  }
}

std::int32_t SpatialIndex::build(std::uint32_t begin, std::uint32_t end,
                                 std::span<const double> coords) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end, -1, -1, 0});
  boxes_.resize(boxes_.size() + 2 * static_cast<std::size_t>(d_));
  double* lo = boxes_.data() + static_cast<std::size_t>(id) * 2 * d_;
  double* hi = lo + d_;
  std::fill(lo, lo + d_, std::numeric_limits<double>::infinity());
  std::fill(hi, hi + d_, -std::numeric_limits<double>::infinity());
  for (std::uint32_t s = begin; s < end; ++s) {
    const double* p = coords.data() + perm_[s] * d_;
    for (int k = 0; k < d_; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  if (end - begin <= kLeafSize) return id;
  int axis = 0;
  double widest = -1.0;
  for (int k = 0; k < d_; ++k) {
    if (hi[k] - lo[k] > widest) {
      widest = hi[k] - lo[k];
      axis = k;
    }
  }
  if (widest <= 0.0) return id;  // all coincident
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                   [&](std::size_t a, std::size_t b) {
                     double ca = coords[a * d_ + axis];
                     double cb = coords[b * d_ + axis];
                     return ca < cb || (ca == cb && a < b);
                   });
  const std::int32_t left = build(begin, mid, coords);
  const std::int32_t right = build(mid, end, coords);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

double SpatialIndex::box_min_dist2(std::size_t node, std::span<const double> c) const {
  auto l = lo(node);
  auto h = hi(node);
  double s = 0.0;
  for (int k = 0; k < d_; ++k) {
    double t = 0.0;
    if (c[k] < l[k]) {
      t = l[k] - c[k];
    } else if (c[k] > h[k]) {
      t = c[k] - h[k];
    }
    s += t * t;
  }
  return s;
}

double SpatialIndex::box_max_dist2(std::size_t node, std::span<const double> c) const {
  auto l = lo(node);
  auto h = hi(node);
  double s = 0.0;
  for (int k = 0; k < d_; ++k) {
    double t = std::max(std::abs(l[k] - c[k]), std::abs(h[k] - c[k]));
    s += t * t;
  }
  return s;
}

FixedMass SpatialIndex::ball_mass_fixed(std::span<const double> center, double radius) const {
  if (nodes_.empty()) return 0;
  const double r2 = radius * radius;
  FixedMass total = 0;
  std::int32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const std::size_t id = static_cast<std::size_t>(stack[--top]);
    const Node& node = nodes_[id];
    if (box_min_dist2(id, center) > r2) continue;
    if (box_max_dist2(id, center) <= r2) {
      total += node.mass;
      continue;
    }
    if (node.left < 0) {
      for (std::uint32_t s = node.begin; s < node.end; ++s)
        if (squared_distance(tree_point(s), center) <= r2) total += masses_[s];
      continue;
    }
    stack[top++] = node.right;
    stack[top++] = node.left;
  }
  return total;
}

double SpatialIndex::ball_mass(std::span<const double> center, double radius) const {
  return quantizer_.to_mass(ball_mass_fixed(center, radius));
}

std::size_t SpatialIndex::ball_count(std::span<const double> center, double radius) const {
  std::size_t count = 0;
  if (nodes_.empty()) return 0;
  const double r2 = radius * radius;
  std::int32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const std::size_t id = static_cast<std::size_t>(stack[--top]);
    const Node& node = nodes_[id];
    if (box_min_dist2(id, center) > r2) continue;
    if (box_max_dist2(id, center) <= r2) {
      count += node.end - node.begin;
      continue;
    }
    if (node.left < 0) {
      for (std::uint32_t s = node.begin; s < node.end; ++s)
        if (squared_distance(tree_point(s), center) <= r2) ++count;
      continue;
    }
    stack[top++] = node.right;
    stack[top++] = node.left;
  }
  return count;
}

std::vector<std::size_t> SpatialIndex::points_in_ball(std::span<const double> center,
                                                      double radius) const {
  std::vector<std::size_t> out;
  for_each_in_ball(center, radius, [&](std::size_t i, double) { out.push_back(i); });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<double, std::size_t>> SpatialIndex::nearest(std::span<const double> center,
                                                                  std::size_t k) const {
  std::vector<std::pair<double, std::size_t>> out;
  if (k == 0 || nodes_.empty()) return out;
  // max-heap on (dist2, index): the worst kept candidate on top
  std::priority_queue<std::pair<double, std::size_t>> heap;
  auto bound = [&] {
    return heap.size() < k ? std::numeric_limits<double>::infinity() : heap.top().first;
  };
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const std::size_t id = static_cast<std::size_t>(stack.back());
    stack.pop_back();
    const Node& node = nodes_[id];
    if (box_min_dist2(id, center) > bound()) continue;
    if (node.left < 0) {
      for (std::uint32_t s = node.begin; s < node.end; ++s) {
        std::pair<double, std::size_t> cand{squared_distance(tree_point(s), center), perm_[s]};
        if (heap.size() < k) {
          heap.push(cand);
        } else if (cand < heap.top()) {
          heap.pop();
          heap.push(cand);
        }
      }
      continue;
    }
    // visit the nearer child first
    double dl = box_min_dist2(static_cast<std::size_t>(node.left), center);
    double dr = box_min_dist2(static_cast<std::size_t>(node.right), center);
    if (dl <= dr) {
      stack.push_back(node.right);
      stack.push_back(node.left);
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  out.reserve(heap.size());
  while (!heap.empty()) {
    out.push_back(heap.top());
    heap.pop();
  }
  std::reverse(out.begin(), out.end());
  for (auto& e : out) e.first = std::sqrt(e.first);
  return out;
}

double SpatialIndex::knn_distance(std::span<const double> center, std::size_t k) const {
  if (k == 0 || k > size()) throw_invalid("knn_distance: k out of range");
  return nearest(center, k).back().first;
}

double SpatialIndex::nearest_positive_distance(std::span<const double> center) const {
  double best = std::numeric_limits<double>::infinity();
  if (nodes_.empty()) return best;
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const std::size_t id = static_cast<std::size_t>(stack.back());
    stack.pop_back();
    const Node& node = nodes_[id];
    if (box_min_dist2(id, center) >= best) continue;
    if (box_max_dist2(id, center) == 0.0) continue;  // every point coincides with center
    if (node.left < 0) {
      for (std::uint32_t s = node.begin; s < node.end; ++s) {
        double dist2 = squared_distance(tree_point(s), center);
        if (dist2 > 0.0 && dist2 < best) best = dist2;
      }
      continue;
    }
    double dl = box_min_dist2(static_cast<std::size_t>(node.left), center);
    double dr = box_min_dist2(static_cast<std::size_t>(node.right), center);
    if (dl <= dr) {
      stack.push_back(node.right);
      stack.push_back(node.left);
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  return std::sqrt(best);
}

double SpatialIndex::farthest_distance(std::span<const double> center) const {
  double best = 0.0;
  if (nodes_.empty()) return best;
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const std::size_t id = static_cast<std::size_t>(stack.back());
    stack.pop_back();
    const Node& node = nodes_[id];
    if (box_max_dist2(id, center) <= best) continue;
    if (node.left < 0) {
      for (std::uint32_t s = node.begin; s < node.end; ++s)
        best = std::max(best, squared_distance(tree_point(s), center));
      continue;
    }
    stack.push_back(node.left);
    stack.push_back(node.right);
  }
  return std::sqrt(best);
}

double SpatialIndex::diameter() const {
  const std::size_t n = size();
  if (n < 2) return 0.0;
  // Double sweep seeds a good lower bound; the exact pass then prunes every
  // subtree that cannot beat it.
  std::size_t a = 0;
  double best2 = 0.0;
  for (int sweep = 0; sweep < 2; ++sweep) {
    std::size_t far = a;
    double far2 = -1.0;
    auto pa = tree_point(a);
    for (std::size_t s = 0; s < n; ++s) {
      double d2 = squared_distance(tree_point(s), pa);
      if (d2 > far2) {
        far2 = d2;
        far = s;
      }
    }
    best2 = std::max(best2, far2);
    a = far;
  }
  for (std::size_t s = 0; s < n; ++s) {
    auto p = tree_point(s);
    std::vector<std::int32_t> stack{0};
    while (!stack.empty()) {
      const std::size_t id = static_cast<std::size_t>(stack.back());
      stack.pop_back();
      const Node& node = nodes_[id];
      if (box_max_dist2(id, p) <= best2) continue;
      if (node.left < 0) {
        for (std::uint32_t t = node.begin; t < node.end; ++t)
          best2 = std::max(best2, squared_distance(tree_point(t), p));
        continue;
      }
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  return std::sqrt(best2);
}

}  // namespace rectiscan
