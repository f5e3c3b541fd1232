#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "rectiscan/wavelets.hpp"

using namespace rectiscan;

namespace {

const WaveletFamily& family() {
  static const WaveletFamily f(12);
  return f;
}

WaveletCube cube1(int level, std::int64_t offset) {
  WaveletCube c;
  c.n = 1;
  c.level = level;
  c.offset = {offset};
  return c;
}

}  // namespace

TEST(Wavelets, FilterAndMoments) {
  const auto& h = WaveletFamily::filter();
  EXPECT_NEAR(std::accumulate(h.begin(), h.end(), 0.0), std::sqrt(2.0), 1e-14);
  double sq = 0.0;
  for (double v : h) sq += v * v;
  EXPECT_NEAR(sq, 1.0, 1e-14);
  const WaveletFamily& f = family();
  for (int m = 0; m < 3; ++m) EXPECT_NEAR(f.psi_moment(m), 0.0, 1e-6) << m;
  EXPECT_GT(std::abs(f.psi_moment(3)), 1e-3);
  EXPECT_NEAR(f.psi_norm(), 1.0, 1e-6);
  EXPECT_NEAR(f.phi_integral(WaveletFamily::support()), 1.0, 1e-6);
  EXPECT_EQ(f.psi(-0.5), 0.0);
  EXPECT_EQ(f.psi(5.5), 0.0);
}

TEST(Wavelets, OrthonormalOnRandomPairs) {
  const WaveletFamily& f = family();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> level(0, 2), offset(-4, 4);
  const double h = 1.0 / 4096.0;
  for (int pair = 0; pair < 50; ++pair) {
    const WaveletCube a = cube1(level(rng), offset(rng));
    const WaveletCube b = pair % 5 == 0 ? a : cube1(level(rng), offset(rng));
    double s = 0.0;
    for (double x = -12.0; x <= 12.0; x += h) {
      const std::vector<double> p{x};
      s += psi_cube(f, a, p) * psi_cube(f, b, p);
    }
    s *= h;
    const bool same = a.level == b.level && a.offset == b.offset;
    EXPECT_NEAR(s, same ? 1.0 : 0.0, 2e-3) << a.level << ":" << a.offset[0] << " " << b.level
                                            << ":" << b.offset[0];
  }
}

TEST(Wavelets, CoefficientVanishesAwayFromSpheres) {
  const WaveletFamily& f = family();
  const WaveletCube far = cube1(1, 32);  // [16, 16.5]
  EXPECT_NEAR(far.side(), 0.5, 0.0);
  EXPECT_FALSE(touches_spheres(far));
  EXPECT_NEAR(h_coefficient(f, far), 0.0, 1e-9);
  EXPECT_TRUE(touches_spheres(cube1(1, 2)));  // 5I = [0, 2.5]

  const std::vector<int> levels{-2, 0, 2, 4, 6, 8};
  for (int n : {1, 2}) {
    const VanishingCheck v = vanishing_check(f, n, levels, 100, 7);
    EXPECT_EQ(v.cubes, 600u);
    EXPECT_LT(v.max_abs, 1e-9);
  }
}

TEST(Wavelets, DecaySlopes) {
  const WaveletFamily& f = family();
  for (int n : {1, 2}) {
    const DecayFit large = decay_regression(f, n, -6, -2);
    EXPECT_NEAR(large.slope, -(1.0 + n / 2.0), 0.3) << n;
    const DecayFit small = decay_regression(f, n, 3, 8);
    EXPECT_NEAR(small.slope, n / 2.0, 0.3) << n;
  }
}

TEST(Wavelets, ReconstructsTheIndicatorDifference) {
  const WaveletFamily& f = family();
  const std::vector<std::vector<double>> points{{0.0}, {1.5}, {0.4}, {-3.0}};
  const ReconstructionCheck r = reconstruction_check(f, 1, -4, 10, points);
  EXPECT_NEAR(r.values[0], 0.5, 0.02);
  EXPECT_NEAR(r.values[1], -0.5, 0.02);
  EXPECT_NEAR(r.values[3], 0.0, 0.02);
  EXPECT_LE(r.max_error, 0.02);
  const std::vector<double> origin{0.0, 0.0};
  EXPECT_EQ(h_tilde(origin), 0.75);
}

TEST(Wavelets, CubeEnumeration) {
  const std::vector<WaveletCube> cubes = cubes_meeting_ball(2, 0);
  EXPECT_FALSE(cubes.empty());
  for (const WaveletCube& c : cubes) {
    EXPECT_GE(c.orientation, 1u);
    EXPECT_LE(c.orientation, 3u);
  }
  EXPECT_EQ(cubes.size() % 3, 0u);
  const std::vector<WaveletCube> edge = boundary_cubes(1, 4, 16);
  for (const WaveletCube& c : edge) EXPECT_TRUE(touches_spheres(c));
}
