#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "rectiscan/datasets.hpp"
#include "rectiscan/errors.hpp"
#include "rectiscan/parallel.hpp"
#include "rectiscan/square_functions.hpp"

using namespace rectiscan;

namespace {

DiscreteMeasure segment(std::size_t points, double length = 1.0) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Segment;
  spec.points = points;
  spec.length = length;
  return generate(spec);
}

DiscreteMeasure circle(std::size_t points) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Circle;
  spec.points = points;
  return generate(spec);
}

}  // namespace

TEST(DeltaDensity, SegmentInteriorIsFlat) {
  const DiscreteMeasure m = segment(10001);
  const SpatialIndex index(m);
  const double spacing = m.spacing();
  for (std::size_t c : {3000u, 5000u, 6001u}) {
    const double v = delta_density(m, index, m.point(c), 0.1);
    EXPECT_LE(std::abs(v), 2.0 * spacing / 0.1);
  }
}

TEST(DeltaDensity, CircleMatchesArcLength) {
  const DiscreteMeasure m = circle(10000);
  const SpatialIndex index(m);
  const double r = 0.5;
  const double v = delta_density(m, index, m.point(0), r);
  EXPECT_NEAR(v, -0.0738, 0.01);
  const double exact = 4.0 * std::asin(r / 2.0) / r - 4.0 * std::asin(r) / (2.0 * r);
  EXPECT_NEAR(v, exact, 2.0 * m.weight(0) / r);
}

TEST(DeltaDensity, MatchesBruteForceOnCantor) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Cantor4;
  spec.K = 6;
  const DiscreteMeasure m = generate(spec);
  const SpatialIndex index(m);
  double largest = 0.0;
  for (int j = 1; j <= 8; ++j) {
    const double r = std::ldexp(1.0, -j);
    const auto x = m.point(0);
    const double expect =
        oracle::ball_mass(m, x, r) / r - oracle::ball_mass(m, x, 2 * r) / (2 * r);
    EXPECT_EQ(delta_density(m, index, x, r), expect);
    largest = std::max(largest, std::abs(expect));
  }
  EXPECT_GE(largest, 0.1);
}

TEST(DeltaSmooth, SingleAtom) {
  const DiscreteMeasure m({0.0, 0.0}, {1.0}, 2, 1);
  const SpatialIndex index(m);
  const KernelSpec spec = KernelSpec::gaussian(1, 1);
  const std::vector<double> x{0.0, 0.0};
  const double t = 0.25;
  EXPECT_NEAR(delta_smooth_dt(m, index, spec, x, t), -1.0 / t, 1e-12);
  EXPECT_NEAR(delta_smooth(m, index, spec, x, t), 0.5 / t, 1e-12);
  EXPECT_NEAR(delta_k(m, index, spec, x, t, 2, true), (1.0 - 2.0 / 2.0 + 1.0 / 4.0) / t, 1e-12);
  const DiscreteMeasure m2({0.0, 0.0, 0.0}, {1.0}, 3, 2);
  const SpatialIndex index2(m2);
  const std::vector<double> x2{0.0, 0.0, 0.0};
  EXPECT_NEAR(delta_k(m2, index2, KernelSpec::gaussian(1, 2), x2, t, 2, true),
              (1.0 - 2.0 / 4.0 + 1.0 / 16.0) / (t * t), 1e-12);
  EXPECT_NEAR(delta_smooth_dt(m2, index2, KernelSpec::gaussian(1, 2), x2, t), -2.0 / (t * t),
              1e-12);
}

TEST(DeltaSmooth, CircleMatchesQuadrature) {
  const DiscreteMeasure m = circle(10000);
  const SpatialIndex index(m);
  const KernelSpec spec = KernelSpec::gaussian(1, 1);
  const double t = 0.3;
  auto phi = [](double r2, double s) { return std::exp(-r2 / (s * s)) / s; };
  const double smooth =
      oracle::circle_integral([&](double r2) { return phi(r2, t) - phi(r2, 2 * t); }, 1.0);
  // t d/dt [t^-1 exp(-r2/t^2)] = t^-1 exp(-r2/t^2) (2 r2/t^2 - 1)
  const double dt = oracle::circle_integral(
      [&](double r2) { return phi(r2, t) * (2.0 * r2 / (t * t) - 1.0); }, 1.0);
  EXPECT_NEAR(delta_smooth(m, index, spec, m.point(0), t), smooth, 1e-3);
  EXPECT_NEAR(delta_smooth_dt(m, index, spec, m.point(0), t), dt, 1e-3);
  EXPECT_GT(std::abs(dt), 1e-2);
}

TEST(DeltaSmooth, LongSegmentAnnihilates) {
  const DiscreteMeasure m = segment(40001, 4.0);
  const SpatialIndex index(m);
  const auto x = m.point(20000);
  for (const KernelSpec& spec : {KernelSpec::gaussian(1, 1), KernelSpec::gaussian(2, 1)}) {
    for (int k = 1; k <= 3; ++k) {
      EXPECT_NEAR(delta_k(m, index, spec, x, 0.05, k, true), 0.0, 1e-3) << k;
      EXPECT_NEAR(delta_k(m, index, spec, x, 0.05, k, false), 0.0, 1e-3) << k;
    }
  }
}

TEST(SquareFunctions, Errors) {
  const DiscreteMeasure m = segment(101);
  const SpatialIndex index(m);
  const auto x = m.point(50);
  EXPECT_THROW(delta_density(m, index, x, m.resolution() / 2), RangeError);
  EXPECT_THROW(delta_density(m, index, x, 2.0), RangeError);
  EXPECT_THROW(delta_density(m, index, x, -1.0), InvalidArgument);
  EXPECT_THROW(delta_k(m, index, KernelSpec::hard(1), x, 0.1, 1, true), UnsupportedKernel);
  EXPECT_THROW(delta_k(m, index, KernelSpec::gaussian(1, 1), x, 0.1, 5, true), InvalidArgument);
  const std::vector<double> wrong{0.5, 0.0, 0.0};
  EXPECT_THROW(delta_density(m, index, wrong, 0.1), InvalidArgument);
  EXPECT_THROW(Functional::parse("delta-magic", std::nullopt), InvalidArgument);
  EXPECT_EQ(Functional::parse("delta-dt-k", std::nullopt, 2).name(), "delta-dt-k");
}

TEST(CoefficientField, ShapeAndPoisonedCells) {
  const DiscreteMeasure m = segment(201);
  const SpatialIndex index(m);
  const CenterSample centers = sample_centers(m, 20);
  const std::vector<double> scales{m.resolution() / 2, 0.05, 0.1};
  const CoefficientField f =
      coefficient_field(m, index, Functional::parse("delta-density", std::nullopt), centers, scales);
  ASSERT_EQ(f.values.size(), centers.indices.size() * 3);
  for (std::size_t i = 0; i < f.centers.size(); ++i) {
    EXPECT_TRUE(std::isnan(f.at(i, 0)));
    EXPECT_FALSE(std::isnan(f.at(i, 1)));
    EXPECT_EQ(f.at(i, 2), delta_density(m, index, m.point(f.centers[i]), 0.1));
  }
  EXPECT_EQ(f.errors.size(), f.centers.size());
  const std::vector<double> unsorted{0.1, 0.05};
  EXPECT_THROW(coefficient_field(m, index, f.functional, centers, unsorted), InvalidArgument);
}

TEST(CoefficientField, ThreadCountDoesNotChangeValues) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::PerturbedPlane;
  spec.points = 2001;
  const DiscreteMeasure m = generate(spec);
  const SpatialIndex index(m);
  const CenterSample centers = sample_centers(m, 64);
  const std::vector<double> scales = geometric_grid(0.005, 0.1, 2.0);
  const Functional f = Functional::parse("delta-smooth", KernelSpec::gaussian(1, 1));
  set_thread_count(1);
  const CoefficientField one = coefficient_field(m, index, f, centers, scales);
  set_thread_count(4);
  const CoefficientField four = coefficient_field(m, index, f, centers, scales);
  set_thread_count(0);
  ASSERT_EQ(one.values.size(), four.values.size());
  for (std::size_t i = 0; i < one.values.size(); ++i)
    EXPECT_EQ(std::bit_cast<std::uint64_t>(one.values[i]),
              std::bit_cast<std::uint64_t>(four.values[i]));
}

TEST(SampleCenters, KeepsEverythingWhenSmall) {
  const DiscreteMeasure m = segment(50);
  const CenterSample s = sample_centers(m, 100);
  ASSERT_EQ(s.indices.size(), 50u);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_EQ(s.indices[i], i);
    EXPECT_EQ(s.mass[i], m.weight(i));
  }
  EXPECT_THROW(sample_centers(m, 0), InvalidArgument);
}

TEST(SampleCenters, SystematicDrawConservesMassAndAvoidsAliasing) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Plane;
  spec.d = 3;
  spec.n = 2;
  spec.points = 10000;
  const DiscreteMeasure m = generate(spec);
  const CenterSample s = sample_centers(m, 100);
  double total = 0.0;
  for (double w : s.mass) total += w;
  EXPECT_NEAR(total, m.total_mass(), 1e-12);
  EXPECT_TRUE(std::is_sorted(s.indices.begin(), s.indices.end()));
  EXPECT_EQ(std::set<std::size_t>(s.indices.begin(), s.indices.end()).size(), s.indices.size());
  std::set<double> columns, rows;
  for (std::size_t i : s.indices) {
    columns.insert(m.point(i)[0]);
    rows.insert(m.point(i)[1]);
  }
  EXPECT_GT(columns.size(), 30u);
  EXPECT_GT(rows.size(), 30u);
  const CenterSample again = sample_centers(m, 100);
  EXPECT_EQ(again.indices, s.indices);
}

TEST(LogMidpointGrid, Cells) {
  const std::vector<double> g = log_midpoint_grid(1.0, 16.0, 2.0);
  ASSERT_EQ(g.size(), 4u);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(g[j], std::sqrt(2.0) * std::ldexp(1.0, static_cast<int>(j)), 1e-12);
  EXPECT_THROW(log_midpoint_grid(1.0, 0.5, 2.0), InvalidArgument);
}

TEST(ScaleEnergy, SumsSquaresOverTheGrid) {
  const DiscreteMeasure m = circle(2000);
  const SpatialIndex index(m);
  const Functional f = Functional::parse("delta-density", std::nullopt);
  double expect = 0.0;
  for (double r : log_midpoint_grid(0.02, 0.32, 2.0)) {
    const double v = delta_density(m, index, m.point(7), r);
    expect += v * v * std::log(2.0);
  }
  EXPECT_DOUBLE_EQ(scale_energy(f, m, index, m.point(7), 0.02, 0.32, 2.0), expect);
}

TEST(BoundaryModel, SegmentAndSquare) {
  const DiscreteMeasure seg = segment(101);
  const BoundaryModel a(seg);
  const std::vector<double> p{0.3, 0.0}, outside{1.5, 0.0};
  EXPECT_NEAR(a.distance(p), 0.3, 1e-12);
  EXPECT_EQ(a.distance(outside), 0.0);

  GeneratorSpec spec;
  spec.kind = GeneratorKind::Plane;
  spec.d = 3;
  spec.n = 2;
  spec.points = 441;
  const DiscreteMeasure square = generate(spec);
  const BoundaryModel b(square);
  const std::vector<double> q{0.2, 0.6, 0.0}, far{2.0, 0.5, 0.0};
  EXPECT_NEAR(b.distance(q), 0.2, 1e-9);
  EXPECT_EQ(b.distance(far), 0.0);
}
