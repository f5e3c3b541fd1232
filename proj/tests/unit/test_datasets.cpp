#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rectiscan/datasets.hpp"
#include "rectiscan/errors.hpp"

using namespace rectiscan;

TEST(Datasets, SegmentAndPlane) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Segment;
  spec.points = 101;
  spec.length = 3.0;
  const DiscreteMeasure seg = generate(spec);
  EXPECT_EQ(seg.size(), 101u);
  EXPECT_NEAR(seg.total_mass(), 3.0, 1e-12);
  EXPECT_NEAR(seg.point(100)[0], 3.0, 1e-15);

  spec.kind = GeneratorKind::Plane;
  spec.d = 3;
  spec.n = 2;
  spec.points = 400;
  spec.length = 2.0;
  const DiscreteMeasure plane = generate(spec);
  EXPECT_EQ(plane.size(), 400u);
  EXPECT_NEAR(plane.total_mass(), 4.0, 1e-12);
  for (std::size_t i = 0; i < plane.size(); ++i) EXPECT_EQ(plane.point(i)[2], 0.0);
}

TEST(Datasets, CircleSamplesArcLength) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Circle;
  spec.points = 360;
  spec.rho = 2.0;
  const DiscreteMeasure m = generate(spec);
  EXPECT_NEAR(m.total_mass(), 4.0 * std::numbers::pi, 1e-12);
  for (std::size_t i = 0; i < m.size(); ++i)
    EXPECT_NEAR(std::hypot(m.point(i)[0], m.point(i)[1]), 2.0, 1e-14);
}

TEST(Datasets, CantorMatchesConstruction) {
  for (int K : {0, 1, 3}) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::Cantor4;
    spec.K = K;
    const DiscreteMeasure m = generate(spec);
    const std::vector<double> expect = oracle::cantor_points(K);
    ASSERT_EQ(m.coords().size(), expect.size());
    // Same point set; the generator lists points in Z-order.
    std::vector<std::pair<double, double>> a, b;
    for (std::size_t i = 0; i < m.size(); ++i) {
      a.emplace_back(m.point(i)[0], m.point(i)[1]);
      b.emplace_back(expect[2 * i], expect[2 * i + 1]);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_NEAR(a[i].first, b[i].first, 1e-15);
      EXPECT_NEAR(a[i].second, b[i].second, 1e-15);
    }
    EXPECT_NEAR(m.total_mass(), 1.0, 1e-12);
  }
}

TEST(Datasets, CantorLabelsGroupSquares) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Cantor4;
  spec.K = 3;
  const DiscreteMeasure m = generate(spec);
  const std::vector<std::size_t> labels = cantor_labels(3, 1);
  // Points sharing a generation-1 label lie in one square of side 1/4.
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (labels[i] == labels[j]) {
        EXPECT_LT(std::abs(m.point(i)[0] - m.point(j)[0]), 0.25);
        EXPECT_LT(std::abs(m.point(i)[1] - m.point(j)[1]), 0.25);
      }
  EXPECT_THROW(cantor_labels(3, 4), InvalidArgument);
}

TEST(Datasets, LipschitzGraphHasEqualArcSteps) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::LipschitzGraph;
  spec.points = 1001;
  spec.length = 2.0;
  spec.profile = GraphProfile::AbsSine;
  const DiscreteMeasure m = generate(spec);
  double lo = INFINITY, hi = 0.0;
  for (std::size_t i = 0; i + 1 < m.size(); ++i) {
    const double step =
        std::hypot(m.point(i + 1)[0] - m.point(i)[0], m.point(i + 1)[1] - m.point(i)[1]);
    lo = std::min(lo, step);
    hi = std::max(hi, step);
  }
  EXPECT_LT(hi / lo, 1.01);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double x = m.point(i)[0];
    EXPECT_NEAR(m.point(i)[1], 0.3 * std::abs(std::sin(std::numbers::pi * x)), 1e-12);
  }
}

TEST(Datasets, PerturbedPlaneIsSeeded) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::PerturbedPlane;
  spec.points = 201;
  spec.seed = 4;
  const DiscreteMeasure a = generate(spec), b = generate(spec);
  EXPECT_EQ(a.coords(), b.coords());
  spec.seed = 5;
  EXPECT_NE(generate(spec).coords(), a.coords());
  spec.noise = 0.0;
  const DiscreteMeasure flat = generate(spec);
  for (std::size_t i = 0; i < flat.size(); ++i) EXPECT_EQ(flat.point(i)[1], 0.0);
}

TEST(Datasets, Errors) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Cantor4;
  spec.d = 3;
  EXPECT_THROW(generate(spec), InvalidArgument);
  spec.kind = GeneratorKind::LipschitzGraph;
  spec.d = 2;
  spec.amplitude = 1.0;
  EXPECT_THROW(generate(spec), InvalidArgument);
  spec.kind = GeneratorKind::Segment;
  spec.n = 2;
  EXPECT_THROW(generate(spec), InvalidArgument);
  EXPECT_THROW(GeneratorSpec::parse_kind("spiral"), InvalidArgument);
  for (const char* name : {"plane", "segment", "circle", "lipschitz", "cantor", "perturbed-plane",
                           "atoms"})
    EXPECT_EQ(GeneratorSpec::kind_name(GeneratorSpec::parse_kind(name)), name);
}
