#include "rectiscan/wavelets.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "rectiscan/errors.hpp"
#include "rectiscan/parallel.hpp"
#include "rectiscan/regression.hpp"

namespace rectiscan {
namespace {

// Daubechies filter with three vanishing moments, in closed form.
std::array<double, 6> make_filter() {
  const double s10 = std::sqrt(10.0);
  const double q = std::sqrt(5.0 + 2.0 * s10);
  const double c = 16.0 * std::numbers::sqrt2;
  return {(1.0 + s10 + q) / c,        (5.0 + s10 + 3.0 * q) / c,
          (10.0 - 2.0 * s10 + 2.0 * q) / c, (10.0 - 2.0 * s10 - 2.0 * q) / c,
          (5.0 + s10 - 3.0 * q) / c,  (1.0 + s10 - q) / c};
}

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 4> kGlNodes = {0.1834346424956498, 0.5255324099163290,
                                            0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGlWeights = {0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss8(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < kGlNodes.size(); ++i)
    s += kGlWeights[i] * (f(mid - half * kGlNodes[i]) + f(mid + half * kGlNodes[i]));
  return s * half;
}

}  // namespace

const std::array<double, 6>& WaveletFamily::filter() {
  static const std::array<double, 6> h = make_filter();
  return h;
}

WaveletFamily::WaveletFamily(int J) : J_(J) {
  if (J < 1 || J > 16) throw_invalid("wavelet tables: J must lie in [1, 16]");
  const std::int64_t per = std::int64_t{1} << J;
  step_ = 1.0 / static_cast<double>(per);
  const std::int64_t last = 5 * per;
  phi_.assign(static_cast<std::size_t>(last + 1), 0.0);
  const double r2 = std::numbers::sqrt2;

  // Integer samples: eigenvector of phi(i) = sqrt2 sum_k h_k phi(2i - k)
  // normalized to sum 1.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const int k = 2 * i - j;
      if (k >= 0 && k < 6) A(i, j) = r2 * filter()[static_cast<std::size_t>(k)];
    }
  Eigen::MatrixXd M = A - Eigen::MatrixXd::Identity(6, 6);
  M.row(5).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(6);
  rhs[5] = 1.0;
  Eigen::VectorXd ints = M.fullPivLu().solve(rhs);
  for (int i = 0; i <= 5; ++i) phi_[static_cast<std::size_t>(i * per)] = ints[i];
  phi_[0] = 0.0;
  phi_[static_cast<std::size_t>(last)] = 0.0;

  // Cascade: fill odd multiples of 2^-j from level j - 1.
  for (int j = 1; j <= J; ++j) {
    const std::int64_t stride = std::int64_t{1} << (J - j);
    for (std::int64_t m = 1; m * stride < last; m += 2) {
      double s = 0.0;
      for (int k = 0; k < 6; ++k) {
        const std::int64_t idx = 2 * m * stride - k * per;
        if (idx > 0 && idx < last) s += filter()[static_cast<std::size_t>(k)] * phi_[static_cast<std::size_t>(idx)];
      }
      phi_[static_cast<std::size_t>(m * stride)] = r2 * s;
    }
  }

  psi_.assign(phi_.size(), 0.0);
  for (std::int64_t i = 0; i <= last; ++i) {
    double s = 0.0;
    for (int k = 0; k < 6; ++k) {
      const double g = ((k % 2) ? -1.0 : 1.0) * filter()[static_cast<std::size_t>(5 - k)];
      const std::int64_t idx = 2 * i - k * per;
      if (idx > 0 && idx < last) s += g * phi_[static_cast<std::size_t>(idx)];
    }
    psi_[static_cast<std::size_t>(i)] = r2 * s;
  }

  auto integrate = [&](const std::vector<double>& t) {
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t m = 1; m < t.size(); ++m) out[m] = out[m - 1] + 0.5 * (t[m - 1] + t[m]) * step_;
    return out;
  };
  phi_int_ = integrate(phi_);
  psi_int_ = integrate(psi_);
}

double WaveletFamily::lookup(const std::vector<double>& table, double x) const {
  if (!(x > 0.0) || !(x < 5.0)) return 0.0;
  const double pos = x / step_;
  const auto m = static_cast<std::size_t>(pos);
  if (m + 1 >= table.size()) return table.back();
  const double f = pos - static_cast<double>(m);
  return table[m] + f * (table[m + 1] - table[m]);
}

double WaveletFamily::lookup_integral(const std::vector<double>& table, double x) const {
  if (!(x > 0.0)) return 0.0;
  if (!(x < 5.0)) return table.back();
  const std::vector<double>& values = (&table == &phi_int_) ? phi_ : psi_;
  const double pos = x / step_;
  const auto m = static_cast<std::size_t>(pos);
  if (m + 1 >= table.size()) return table.back();
  const double s = pos - static_cast<double>(m);
  return table[m] + step_ * (values[m] * s + 0.5 * (values[m + 1] - values[m]) * s * s);
}

double WaveletFamily::psi_moment(int m) const {
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < psi_.size(); ++i)
    s += std::pow(static_cast<double>(i) * step_, m) * psi_[i];
  return s * step_;
}

double WaveletFamily::psi_norm() const {
  double s = 0.0;
  for (double v : psi_) s += v * v;
  return std::sqrt(s * step_);
}

double WaveletCube::side() const { return std::ldexp(1.0, -level); }

double h_tilde(std::span<const double> x) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  const double small = std::ldexp(1.0, -static_cast<int>(x.size()));
  if (r2 < 1.0) return 1.0 - small;
  if (r2 < 4.0) return -small;
  return 0.0;
}

double psi_cube(const WaveletFamily& family, const WaveletCube& cube, std::span<const double> x) {
  const double s = cube.side();
  double v = std::pow(s, -cube.n / 2.0);
  for (int i = 0; i < cube.n; ++i) {
    const double u = x[static_cast<std::size_t>(i)] / s - static_cast<double>(cube.offset[static_cast<std::size_t>(i)]) + 2.0;
    v *= (cube.orientation >> i) & 1u ? family.psi(u) : family.phi(u);
  }
  return v;
}

namespace {

// int_a^b f(y / s - shift) dy for the tabulated f (wavelet or scaling).
double piece(const WaveletFamily& family, bool wavelet, double s, double shift, double a,
             double b) {
  auto anti = [&](double y) {
    const double u = y / s - shift;
    return wavelet ? family.psi_integral(u) : family.phi_integral(u);
  };
  return s * (anti(b) - anti(a));
}

double coefficient_1d(const WaveletFamily& family, const WaveletCube& cube) {
  const double s = cube.side();
  const double shift = static_cast<double>(cube.offset[0]) - 2.0;
  const double total = piece(family, true, s, shift, -1.0, 1.0) * 0.5 -
                       0.5 * (piece(family, true, s, shift, -2.0, -1.0) +
                              piece(family, true, s, shift, 1.0, 2.0));
  return total / std::sqrt(s);
}

double coefficient_2d(const WaveletFamily& family, const WaveletCube& cube) {
  const double s = cube.side();
  const double shift1 = static_cast<double>(cube.offset[0]) - 2.0;
  const double shift2 = static_cast<double>(cube.offset[1]) - 2.0;
  const bool w1 = cube.orientation & 1u;
  const bool w2 = (cube.orientation >> 1) & 1u;

  // H(x1) = int h(x1, x2) f2(x2 / s - shift2) dx2; then a_I = int f1(u) H(x1(u)) du.
  auto H = [&](double x1) {
    const double a2 = x1 * x1;
    if (a2 >= 4.0) return 0.0;
    const double outer = std::sqrt(4.0 - a2);
    if (a2 >= 1.0) return -0.25 * piece(family, w2, s, shift2, -outer, outer);
    const double inner = std::sqrt(1.0 - a2);
    return (0.75 * piece(family, w2, s, shift2, -inner, inner) -
            0.25 * (piece(family, w2, s, shift2, -outer, -inner) +
                    piece(family, w2, s, shift2, inner, outer)));
  };
  auto f1 = [&](double u) { return w1 ? family.psi(u) : family.phi(u); };
  const std::vector<double>& table = w1 ? family.psi_table() : family.phi_table();
  auto x_of = [&](double u) { return s * (u + shift1); };

  // Breakpoints in u where H has square-root kinks, plus the support ends.
  std::vector<double> cuts{0.0, 5.0};
  for (double k : {-2.0, -1.0, 1.0, 2.0}) {
    const double u = k / s - shift1;
    if (u > 0.0 && u < 5.0) cuts.push_back(u);
  }
  std::sort(cuts.begin(), cuts.end());
  const double h = family.step();
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double p = cuts[c], q = cuts[c + 1];
    if (q <= p) continue;
    // Skip stretches where |x1| >= 2 throughout.
    const double xm = x_of(0.5 * (p + q));
    if (xm * xm >= 4.0) continue;
    const auto first = static_cast<std::size_t>(std::ceil(p / h));
    const auto last = static_cast<std::size_t>(std::floor(q / h));
    auto g = [&](double u) { return f1(u) * H(x_of(u)); };
    if (first > last || last - first < 1) {
      total += gauss8(g, p, q);
      continue;
    }
    // Partial cells at both ends, trapezoid on the whole cells between.
    total += gauss8(g, p, static_cast<double>(first) * h);
    total += gauss8(g, static_cast<double>(last) * h, q);
    double inner = 0.0;
    double prev = table[first] * H(x_of(static_cast<double>(first) * h));
    for (std::size_t m = first + 1; m <= last; ++m) {
      const double cur = table[m] * H(x_of(static_cast<double>(m) * h));
      inner += 0.5 * (prev + cur);
      prev = cur;
    }
    total += inner * h;
  }
  return total;
}

bool box_meets_sphere(const WaveletCube& cube, double rho) {
  const double s = cube.side();
  double near2 = 0.0, far2 = 0.0;
  for (int i = 0; i < cube.n; ++i) {
    const double lo = (static_cast<double>(cube.offset[static_cast<std::size_t>(i)]) - 2.0) * s;
    const double hi = (static_cast<double>(cube.offset[static_cast<std::size_t>(i)]) + 3.0) * s;
    const double nearest = lo > 0.0 ? lo : (hi < 0.0 ? hi : 0.0);
    const double farthest = std::max(std::abs(lo), std::abs(hi));
    near2 += nearest * nearest;
    far2 += farthest * farthest;
  }
  return near2 <= rho * rho && rho * rho <= far2;
}

void check_n(int n) {
  if (n != 1 && n != 2) throw_invalid("wavelet check: n must be 1 or 2");
}

std::vector<unsigned> orientations(int n) {
  std::vector<unsigned> out;
  for (unsigned e = 1; e < (1u << n); ++e) out.push_back(e);
  return out;
}

}  // namespace

double h_coefficient(const WaveletFamily& family, const WaveletCube& cube) {
  check_n(cube.n);
  if (cube.offset.size() != static_cast<std::size_t>(cube.n))
    throw_invalid("wavelet cube: offset must have n entries");
  if (cube.orientation == 0 || cube.orientation >= (1u << cube.n))
    throw_invalid("wavelet cube: orientation must be a non-empty mask of n bits");
  if (cube.level < -6 || cube.level > 12)
    throw_invalid("wavelet cube: side must lie between 2^-12 and 2^6");
  return cube.n == 1 ? coefficient_1d(family, cube) : coefficient_2d(family, cube);
}

bool touches_spheres(const WaveletCube& cube) {
  return box_meets_sphere(cube, 1.0) || box_meets_sphere(cube, 2.0);
}

std::vector<WaveletCube> cubes_meeting_ball(int n, int level) {
  check_n(n);
  const double s = std::ldexp(1.0, -level);
  const auto lo = static_cast<std::int64_t>(std::floor(-2.0 / s - 3.0));
  const auto hi = static_cast<std::int64_t>(std::ceil(2.0 / s + 2.0));
  std::vector<WaveletCube> out;
  std::vector<std::int64_t> k(static_cast<std::size_t>(n), lo);
  for (;;) {
    for (unsigned e : orientations(n)) {
      WaveletCube cube{n, level, k, e};
      bool meets = true;
      for (int i = 0; i < n; ++i) {
        const double a = (static_cast<double>(k[static_cast<std::size_t>(i)]) - 2.0) * s;
        const double b = (static_cast<double>(k[static_cast<std::size_t>(i)]) + 3.0) * s;
        meets = meets && b > -2.0 && a < 2.0;
      }
      if (meets) out.push_back(cube);
    }
    int i = 0;
    while (i < n && ++k[static_cast<std::size_t>(i)] > hi) k[static_cast<std::size_t>(i++)] = lo;
    if (i == n) break;
  }
  return out;
}

std::vector<WaveletCube> boundary_cubes(int n, int level, std::size_t count) {
  check_n(n);
  const double s = std::ldexp(1.0, -level);
  std::set<std::vector<std::int64_t>> seen;
  std::vector<WaveletCube> out;
  auto add = [&](std::vector<std::int64_t> k) {
    if (!seen.insert(k).second) return;
    for (unsigned e : orientations(n)) out.push_back(WaveletCube{n, level, k, e});
  };
  if (n == 1) {
    for (double p : {-2.0, -1.0, 1.0, 2.0}) {
      // Every cube whose 5I contains p.
      const auto lo = static_cast<std::int64_t>(std::ceil(p / s - 3.0));
      const auto hi = static_cast<std::int64_t>(std::floor(p / s + 2.0));
      for (std::int64_t k = lo; k <= hi; ++k) add({k});
    }
    return out;
  }
  for (double rho : {1.0, 2.0}) {
    for (std::size_t j = 0; j < count; ++j) {
      const double th = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.3819660112501051) /
                        static_cast<double>(count);
      add({static_cast<std::int64_t>(std::floor(rho * std::cos(th) / s)),
           static_cast<std::int64_t>(std::floor(rho * std::sin(th) / s))});
    }
  }
  return out;
}

DecayFit decay_regression(const WaveletFamily& family, int n, int level_lo, int level_hi,
                          std::size_t boundary_samples) {
  check_n(n);
  if (level_hi <= level_lo) throw_invalid("decay_regression: need at least two levels");
  DecayFit fit;
  std::vector<double> xs, ys;
  bool large = false, small = false;
  for (int level = level_lo; level <= level_hi; ++level) {
    const double s = std::ldexp(1.0, -level);
    const std::vector<WaveletCube> cubes =
        s >= 1.0 ? cubes_meeting_ball(n, level) : boundary_cubes(n, level, boundary_samples);
    (s >= 1.0 ? large : small) = true;
    std::vector<double> a(cubes.size());
    parallel_for(cubes.size(), [&](std::size_t i) { a[i] = std::abs(h_coefficient(family, cubes[i])); });
    const double peak = a.empty() ? 0.0 : *std::max_element(a.begin(), a.end());
    fit.levels.push_back(level);
    fit.sides.push_back(s);
    fit.max_coefficient.push_back(peak);
    xs.push_back(std::log2(s));
    ys.push_back(std::log2(peak));
  }
  if (large && small) throw_invalid("decay_regression: levels must not straddle side 1");
  const LinearFit line = linear_fit(xs, ys);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.expected = large ? -1.0 - n / 2.0 : n / 2.0;
  return fit;
}

VanishingCheck vanishing_check(const WaveletFamily& family, int n, std::span<const int> levels,
                               std::size_t count, std::uint64_t seed) {
  check_n(n);
  std::mt19937_64 rng(seed);
  std::vector<WaveletCube> cubes;
  for (int level : levels) {
    const double s = std::ldexp(1.0, -level);
    const double reach = 4.0 + 5.0 * s;
    const auto span = static_cast<std::int64_t>(std::ceil(reach / s)) + 3;
    std::size_t found = 0;
    for (std::size_t attempt = 0; found < count && attempt < 1000 * count; ++attempt) {
      WaveletCube cube{n, level, std::vector<std::int64_t>(static_cast<std::size_t>(n)), 1};
      for (auto& k : cube.offset)
        k = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * span + 1)) - span;
      cube.orientation = 1u + static_cast<unsigned>(rng() % ((1u << n) - 1u));
      if (touches_spheres(cube)) continue;
      cubes.push_back(cube);
      ++found;
    }
  }
  std::vector<double> a(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t i) { a[i] = std::abs(h_coefficient(family, cubes[i])); });
  VanishingCheck out;
  out.cubes = cubes.size();
  for (double v : a) out.max_abs = std::max(out.max_abs, v);
  return out;
}

ReconstructionCheck reconstruction_check(const WaveletFamily& family, int n, int level_lo,
                                         int level_hi,
                                         const std::vector<std::vector<double>>& points) {
  check_n(n);
  if (level_hi < level_lo) throw_invalid("reconstruction_check: empty level range");
  ReconstructionCheck out;
  for (const auto& x : points) {
    if (x.size() != static_cast<std::size_t>(n))
      throw_invalid("reconstruction_check: sample point has wrong dimension");
    std::vector<WaveletCube> cubes;
    for (int level = level_lo; level <= level_hi; ++level) {
      const double s = std::ldexp(1.0, -level);
      std::vector<std::int64_t> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        lo[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::ceil(x[static_cast<std::size_t>(i)] / s - 3.0));
        hi[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor(x[static_cast<std::size_t>(i)] / s + 2.0));
      }
      std::vector<std::int64_t> k = lo;
      for (;;) {
        for (unsigned e : orientations(n)) cubes.push_back(WaveletCube{n, level, k, e});
        int i = 0;
        while (i < n && ++k[static_cast<std::size_t>(i)] > hi[static_cast<std::size_t>(i)]) {
          k[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)];
          ++i;
        }
        if (i == n) break;
      }
    }
    std::vector<double> terms(cubes.size());
    parallel_for(cubes.size(), [&](std::size_t i) {
      terms[i] = h_coefficient(family, cubes[i]) * psi_cube(family, cubes[i], x);
    });
    double value = 0.0;
    for (double t : terms) value += t;
    const double target = h_tilde(x);
    out.values.push_back(value);
    out.targets.push_back(target);
    out.max_error = std::max(out.max_error, std::abs(value - target));
  }
  return out;
}

}  // namespace rectiscan
