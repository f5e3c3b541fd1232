#include "rectiscan/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "rectiscan/errors.hpp"

namespace rectiscan {
namespace {

// Farthest-point candidate; larger distance first, then lower index.
struct Candidate {
  double dist2;
  std::uint32_t point;
  bool operator<(const Candidate& o) const {
    if (dist2 != o.dist2) return dist2 < o.dist2;
    return point > o.point;
  }
};

class NetBuilder {
 public:
  NetBuilder(const DiscreteMeasure& measure, const SpatialIndex& index)
      : measure_(measure), index_(index) {
    const std::size_t n = measure.size();
    near_.assign(n, 0);
    dist2_.assign(n, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
      dist2_[p] = squared_distance(measure.point(p), measure.point(0));
      heap_.push({dist2_[p], static_cast<std::uint32_t>(p)});
    }
    max_dist2_ = *std::max_element(dist2_.begin(), dist2_.end());
  }

  // Adds centers until every point lies within tau of one.
  void refine(double tau) {
    const double tau2 = tau * tau;
    while (!heap_.empty()) {
      Candidate top = heap_.top();
      if (top.dist2 != dist2_[top.point]) {
        heap_.pop();
        heap_.push({dist2_[top.point], top.point});
        continue;
      }
      if (top.dist2 <= tau2) break;
      heap_.pop();
      add_center(top.point);
    }
  }

  const std::vector<std::uint32_t>& nearest() const { return near_; }

 private:
  void add_center(std::uint32_t c) {
    const auto center = measure_.point(c);
    const double reach = std::sqrt(max_dist2_);
    index_.for_each_in_ball(center, reach, [&](std::size_t p, double d2) {
      // Ties stay with the older center so coarse centers keep their share.
      if (d2 < dist2_[p]) {
        dist2_[p] = d2;
        near_[p] = c;
      }
    });
    // No point farther than the current maximum can switch to the new center.
    max_dist2_ = heap_max();
  }

  double heap_max() {
    while (!heap_.empty()) {
      Candidate top = heap_.top();
      if (top.dist2 == dist2_[top.point]) return top.dist2;
      heap_.pop();
      heap_.push({dist2_[top.point], top.point});
    }
    return 0.0;
  }

  const DiscreteMeasure& measure_;
  const SpatialIndex& index_;
  std::vector<std::uint32_t> near_;
  std::vector<double> dist2_;
  std::priority_queue<Candidate> heap_;
  double max_dist2_ = 0.0;
};

}  // namespace

double CubeLattice::side(int generation) const { return std::ldexp(unit_, -generation); }

const std::vector<std::size_t>& CubeLattice::generation(int j) const {
  if (j < 0 || j > max_generation()) throw_invalid("lattice: generation out of range");
  return levels_[static_cast<std::size_t>(j)];
}

std::size_t CubeLattice::cube_of(std::size_t point, int generation) const {
  if (generation < 0 || generation > max_generation())
    throw_invalid("lattice: generation out of range");
  const auto& table = lookup_[static_cast<std::size_t>(generation)];
  if (point >= table.size()) throw_invalid("lattice: point index out of range");
  return table[point];
}

std::vector<std::size_t> CubeLattice::descendants(std::size_t id) const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> frontier = cubes_.at(id).children;
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t c : frontier) {
      out.push_back(c);
      next.insert(next.end(), cubes_[c].children.begin(), cubes_[c].children.end());
    }
    frontier = std::move(next);
  }
  return out;
}

int max_lattice_depth(const DiscreteMeasure& measure) {
  const double ratio = measure.unit() / measure.resolution();
  int j = static_cast<int>(std::floor(std::log2(ratio)));
  while (j > 0 && std::ldexp(measure.unit(), -j) < measure.resolution()) --j;
  while (std::ldexp(measure.unit(), -(j + 1)) >= measure.resolution()) ++j;
  return std::max(j, 0);
}

CubeLattice build_lattice(const DiscreteMeasure& measure, const SpatialIndex& index, int jmax) {
  if (jmax < 0) throw_invalid("build_lattice: jmax must be non-negative");
  if (jmax > max_lattice_depth(measure))
    throw_invalid("build_lattice: jmax=" + std::to_string(jmax) +
                  " is finer than the measure resolution allows (max " +
                  std::to_string(max_lattice_depth(measure)) + ")");
  const std::size_t npts = measure.size();
  CubeLattice lattice;
  lattice.unit_ = measure.unit();

  // near[j][p]: nearest generation-j center of point p. Generation 0 is the
  // single root centered at point 0.
  std::vector<std::vector<std::uint32_t>> near(static_cast<std::size_t>(jmax) + 1);
  near[0].assign(npts, 0);
  NetBuilder builder(measure, index);
  for (int j = 1; j <= jmax; ++j) {
    builder.refine(lattice.side(j) / 2.0);
    near[static_cast<std::size_t>(j)] = builder.nearest();
  }

  // Ancestor chains: chain[j][p] is the generation-j center above point p.
  std::vector<std::vector<std::uint32_t>> chain(static_cast<std::size_t>(jmax) + 1);
  chain[static_cast<std::size_t>(jmax)] = near[static_cast<std::size_t>(jmax)];
  for (int j = jmax - 1; j >= 0; --j) {
    auto& out = chain[static_cast<std::size_t>(j)];
    const auto& below = chain[static_cast<std::size_t>(j) + 1];
    const auto& parent_of = near[static_cast<std::size_t>(j)];
    out.resize(npts);
    for (std::size_t p = 0; p < npts; ++p) out[p] = parent_of[below[p]];
  }

  const MassQuantizer& q = measure.quantizer();
  lattice.levels_.resize(static_cast<std::size_t>(jmax) + 1);
  lattice.lookup_.resize(static_cast<std::size_t>(jmax) + 1);

  // Root.
  {
    DavidCube root;
    root.id = 0;
    root.generation = 0;
    root.center = 0;
    root.side = lattice.side(0);
    root.members.resize(npts);
    for (std::size_t p = 0; p < npts; ++p) root.members[p] = p;
    root.mass = measure.total_mass();
    lattice.cubes_.push_back(std::move(root));
    lattice.levels_[0].push_back(0);
    lattice.lookup_[0].assign(npts, 0);
  }

  for (int j = 1; j <= jmax; ++j) {
    const auto& centers = chain[static_cast<std::size_t>(j)];
    auto& lookup = lattice.lookup_[static_cast<std::size_t>(j)];
    lookup.assign(npts, 0);
    for (std::size_t parent_id : lattice.levels_[static_cast<std::size_t>(j) - 1]) {
      // Split the parent's members by their generation-j center.
      std::vector<std::pair<std::uint32_t, std::size_t>> keyed;
      keyed.reserve(lattice.cubes_[parent_id].members.size());
      for (std::size_t p : lattice.cubes_[parent_id].members) keyed.emplace_back(centers[p], p);
      std::sort(keyed.begin(), keyed.end());
      std::size_t a = 0;
      while (a < keyed.size()) {
        std::size_t b = a;
        while (b < keyed.size() && keyed[b].first == keyed[a].first) ++b;
        DavidCube cube;
        cube.id = lattice.cubes_.size();
        cube.generation = j;
        cube.center = keyed[a].first;
        cube.side = lattice.side(j);
        cube.parent = static_cast<std::int64_t>(parent_id);
        FixedMass m = 0;
        for (std::size_t s = a; s < b; ++s) {
          cube.members.push_back(keyed[s].second);
          m += q.quantize(measure.weight(keyed[s].second));
          lookup[keyed[s].second] = static_cast<std::uint32_t>(cube.id);
        }
        std::sort(cube.members.begin(), cube.members.end());
        cube.mass = q.to_mass(m);
        lattice.cubes_[parent_id].children.push_back(cube.id);
        lattice.levels_[static_cast<std::size_t>(j)].push_back(cube.id);
        lattice.cubes_.push_back(std::move(cube));
        a = b;
      }
    }
  }
  return lattice;
}

CubeBall cube_ball(const CubeLattice& lattice, const DiscreteMeasure& measure, std::size_t id) {
  const DavidCube& cube = lattice.cube(id);
  const auto c = measure.point(cube.center);
  return CubeBall{std::vector<double>(c.begin(), c.end()), 10.0 * cube.side};
}

LatticeAudit lattice_audit(const CubeLattice& lattice, const DiscreteMeasure& measure,
                           double band_lo, double band_hi) {
  if (!(band_lo > 0.0) || !(band_hi >= band_lo))
    throw_invalid("lattice_audit: comparability band must satisfy 0 < lo <= hi");
  LatticeAudit audit;
  audit.band_lo = band_lo;
  audit.band_hi = band_hi;
  const int n = measure.target_dim();
  const int d = measure.ambient_dim();
  for (int j = 0; j <= lattice.max_generation(); ++j) {
    GenerationAudit g;
    g.generation = j;
    g.min_mass_ratio = g.min_diameter_ratio = std::numeric_limits<double>::infinity();
    const double side = lattice.side(j);
    for (std::size_t id : lattice.generation(j)) {
      const DavidCube& cube = lattice.cube(id);
      ++g.cubes;
      const double mr = cube.mass / std::pow(side, n);
      std::vector<double> coords;
      coords.reserve(cube.members.size() * static_cast<std::size_t>(d));
      std::vector<double> weights;
      for (std::size_t p : cube.members) {
        auto pt = measure.point(p);
        coords.insert(coords.end(), pt.begin(), pt.end());
        weights.push_back(measure.weight(p));
      }
      SpatialIndex sub(coords, weights, d, measure.quantizer());
      const double dr = sub.diameter() / side;
      g.min_mass_ratio = std::min(g.min_mass_ratio, mr);
      g.max_mass_ratio = std::max(g.max_mass_ratio, mr);
      g.min_diameter_ratio = std::min(g.min_diameter_ratio, dr);
      g.max_diameter_ratio = std::max(g.max_diameter_ratio, dr);
    }
    g.flagged = g.min_mass_ratio < band_lo || g.max_mass_ratio > band_hi;
    audit.generations.push_back(g);
  }
  return audit;
}

}  // namespace rectiscan
