#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rectiscan/datasets.hpp"
#include "rectiscan/errors.hpp"
#include "rectiscan/geometry.hpp"

using namespace rectiscan;

namespace {

Atoms atoms2(std::initializer_list<std::array<double, 3>> rows) {
  Atoms a;
  a.d = 2;
  for (const auto& r : rows) a.add(std::vector<double>{r[0], r[1]}, r[2]);
  return a;
}

Atoms random_atoms(std::mt19937_64& rng, std::size_t count) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), w(0.1, 1.0);
  Atoms a;
  a.d = 2;
  for (std::size_t i = 0; i < count; ++i) a.add(std::vector<double>{u(rng), u(rng)}, w(rng));
  return a;
}

}  // namespace

TEST(Beta2, LineAndTangent) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Segment;
  spec.points = 501;
  const DiscreteMeasure seg = generate(spec);
  const SpatialIndex si(seg);
  const BetaResult flat = beta2(seg, si, seg.point(250), 0.2);
  EXPECT_NEAR(flat.value, 0.0, 1e-12);
  EXPECT_NEAR(std::abs(flat.plane.direction(0)[0]), 1.0, 1e-12);

  spec.kind = GeneratorKind::Circle;
  spec.points = 4000;
  const DiscreteMeasure circle = generate(spec);
  const SpatialIndex ci(circle);
  const BetaResult b = beta2(circle, ci, circle.point(0), 0.2);
  // Tangent at (1, 0) is vertical.
  EXPECT_LT(std::abs(b.plane.direction(0)[0]), std::sin(0.05));
  EXPECT_GT(b.value, 0.0);
}

TEST(Beta2, NeedsEnoughPoints) {
  const DiscreteMeasure m({0, 0, 1, 0}, {1, 1}, 2, 1);
  const SpatialIndex index(m);
  const std::vector<double> x{0.0, 0.0};
  EXPECT_THROW(beta2(m, index, x, 0.5), InvalidArgument);
  EXPECT_NO_THROW(beta2(m, index, x, 1.0));
}

TEST(Beta1, MatchesLineSearchOracle) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Circle;
  spec.points = 2000;
  const DiscreteMeasure circle = generate(spec);
  const SpatialIndex ci(circle);
  for (double r : {0.2, 0.5, 1.0}) {
    const double got = beta1(circle, ci, circle.point(0), r).value;
    const double want = oracle::beta1_line_search(atoms_in_ball(circle, ci, circle.point(0), r), r);
    EXPECT_NEAR(got, want, 0.05 * want) << "circle r=" << r;
  }
  spec.kind = GeneratorKind::Cantor4;
  spec.K = 6;
  const DiscreteMeasure cantor = generate(spec);
  const SpatialIndex ki(cantor);
  for (double r : {0.25, 0.5, 1.0}) {
    const double got = beta1(cantor, ki, cantor.point(0), r).value;
    const double want = oracle::beta1_line_search(atoms_in_ball(cantor, ki, cantor.point(0), r), r);
    EXPECT_NEAR(got, want, 0.05 * want) << "cantor r=" << r;
    EXPECT_GE(got, 0.05);
  }
}

TEST(FlatNorm, TwoAtomsClosedForm) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-0.7, 0.7), w(0.1, 2.0);
  const std::vector<double> c{0.0, 0.0};
  for (int trial = 0; trial < 50; ++trial) {
    const double px = u(rng), py = u(rng), qx = u(rng), qy = u(rng), a = w(rng);
    const Atoms sigma = atoms2({{px, py, a}}), nu = atoms2({{qx, qy, a}});
    const double room_p = 1.0 - std::hypot(px, py), room_q = 1.0 - std::hypot(qx, qy);
    if (room_p <= 0.0 || room_q <= 0.0) continue;
    const double expect = a * std::min(std::hypot(px - qx, py - qy), room_p + room_q);
    EXPECT_NEAR(flat_norm_distance(sigma, nu, c, 1.0), expect, 1e-9);
  }
}

TEST(FlatNorm, MatchesVertexEnumerationAndLp) {
  std::mt19937_64 rng(99);
  const std::vector<double> c{0.0, 0.0};
  for (int trial = 0; trial < 60; ++trial) {
    const Atoms sigma = random_atoms(rng, 1 + trial % 3);
    const Atoms nu = random_atoms(rng, 1 + (trial / 3) % 2);
    const double got = flat_norm_distance(sigma, nu, c, 1.2);
    EXPECT_NEAR(got, oracle::lipschitz_dual_vertices(sigma, nu, c, 1.2), 1e-6);
    EXPECT_NEAR(got, oracle::lipschitz_dual_lp(sigma, nu, c, 1.2), 1e-6);
  }
}

TEST(FlatNorm, LargerInstancesMatchLp) {
  std::mt19937_64 rng(5);
  const std::vector<double> c{0.1, -0.1};
  for (int trial = 0; trial < 10; ++trial) {
    const Atoms sigma = random_atoms(rng, 12), nu = random_atoms(rng, 9);
    EXPECT_NEAR(flat_norm_distance(sigma, nu, c, 1.0), oracle::lipschitz_dual_lp(sigma, nu, c, 1.0),
                1e-6);
  }
}

TEST(FlatNorm, MetricProperties) {
  std::mt19937_64 rng(13);
  const std::vector<double> c{0.0, 0.0};
  for (int trial = 0; trial < 20; ++trial) {
    const Atoms a = random_atoms(rng, 6), b = random_atoms(rng, 5), e = random_atoms(rng, 4);
    const double ab = flat_norm_distance(a, b, c, 1.0);
    EXPECT_NEAR(ab, flat_norm_distance(b, a, c, 1.0), 1e-9);
    EXPECT_LE(ab, flat_norm_distance(a, e, c, 1.0) + flat_norm_distance(e, b, c, 1.0) + 1e-9);
    EXPECT_LE(flat_norm_distance(a, b, c, 0.6), ab + 1e-9);
    Atoms a3 = a, b3 = b;
    for (double& w : a3.weights) w *= 3.0;
    for (double& w : b3.weights) w *= 3.0;
    EXPECT_NEAR(flat_norm_distance(a3, b3, c, 1.0), 3.0 * ab, 1e-9 * (1.0 + ab));
    EXPECT_NEAR(flat_norm_distance(a, a, c, 1.0), 0.0, 1e-12);
  }
}

TEST(FlatNorm, SizeCap) {
  std::mt19937_64 rng(1);
  const Atoms a = random_atoms(rng, 40), b = random_atoms(rng, 40);
  const std::vector<double> c{0.0, 0.0};
  EXPECT_THROW(flat_norm_distance(a, b, c, 2.0, 10), SizeError);
  EXPECT_THROW(flat_norm_distance(a, b, c, -1.0), InvalidArgument);
}
