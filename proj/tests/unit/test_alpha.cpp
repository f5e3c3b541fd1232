#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rectiscan/alpha.hpp"
#include "rectiscan/datasets.hpp"
#include "rectiscan/errors.hpp"

using namespace rectiscan;

TEST(Alpha, FlatGridMeasureIsNearlyFlat) {
  PlaneFit line;
  line.d = 2;
  line.n = 1;
  line.base = {0.0, 0.0};
  line.basis = {1.0, 0.0};
  const std::vector<double> center{0.0, 0.0};
  const double radius = 1.0;
  const Atoms flat = flat_atoms(line, 2.0, center, radius, radius / 40.0);
  ASSERT_GT(flat.size(), 70u);
  double mass = 0.0;
  for (double w : flat.weights) mass += w;
  EXPECT_NEAR(mass, 4.0, 0.1);
  const DiscreteMeasure m(flat.coords, flat.weights, 2, 1);
  const SpatialIndex index(m);
  const AlphaResult a = alpha_coeff(m, index, center, radius);
  EXPECT_LE(a.value, 1.0 / 40.0);
  EXPECT_NEAR(a.c, 2.0, 0.1);
}

TEST(Alpha, OutlierRaisesTheCoefficient) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Segment;
  spec.points = 801;
  spec.length = 4.0;
  const DiscreteMeasure seg = generate(spec);
  std::vector<double> coords = seg.coords(), weights = seg.weights();
  coords.push_back(2.0);
  coords.push_back(0.4);
  weights.push_back(0.2);
  const DiscreteMeasure bumped(coords, weights, 2, 1);
  const std::vector<double> center{2.0, 0.0};
  const double plain = alpha_coeff(seg, SpatialIndex(seg), center, 1.0).value;
  const double outlier = alpha_coeff(bumped, SpatialIndex(bumped), center, 1.0).value;
  EXPECT_LE(plain, 0.03);
  // Any admissible line leaves either the outlier or the segment at distance
  // comparable to 0.4 on a fixed share of mass.
  EXPECT_GE(outlier, plain + 0.02);
}

TEST(Alpha, CircleRangeAndRotation) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Circle;
  spec.points = 4000;
  const DiscreteMeasure circle = generate(spec);
  const SpatialIndex index(circle);
  const double a = alpha_coeff(circle, index, circle.point(0), 0.2).value;
  EXPECT_GT(a, 0.0);
  EXPECT_LE(a, 0.2);

  const double th = 0.7;
  std::vector<double> coords = circle.coords();
  for (std::size_t i = 0; i < circle.size(); ++i) {
    const double x = coords[2 * i], y = coords[2 * i + 1];
    coords[2 * i] = std::cos(th) * x - std::sin(th) * y;
    coords[2 * i + 1] = std::sin(th) * x + std::cos(th) * y;
  }
  const DiscreteMeasure turned(coords, circle.weights(), 2, 1);
  const SpatialIndex ti(turned);
  const double b = alpha_coeff(turned, ti, turned.point(0), 0.2).value;
  EXPECT_NEAR(a, b, 0.05 * a);
}

TEST(Alpha, Errors) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Segment;
  spec.points = 101;
  const DiscreteMeasure m = generate(spec);
  const SpatialIndex index(m);
  const std::vector<double> far{5.0, 5.0};
  EXPECT_THROW(alpha_coeff(m, index, far, 0.1), InvalidArgument);
  EXPECT_THROW(alpha_coeff(m, index, m.point(5), -0.1), InvalidArgument);
}

TEST(AlphaPacking, SegmentStaysAtTheFloor) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Segment;
  spec.points = 2001;
  spec.length = 4.0;
  const DiscreteMeasure m = generate(spec);
  const SpatialIndex index(m);
  const CubeLattice lattice = build_lattice(m, index, 5);
  const std::size_t root = lattice.cube_of(1000, 3);
  const PackingAudit audit = alpha_packing_audit(m, index, lattice, root, 2);
  ASSERT_EQ(audit.depths.size(), 3u);
  EXPECT_GT(audit.cubes, 3u);
  for (std::size_t k = 1; k < 3; ++k)
    EXPECT_GE(audit.cumulative_ratio[k], audit.cumulative_ratio[k - 1]);
  EXPECT_LE(audit.cumulative_ratio.back(), 0.1);
}
