#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rectiscan {

/// Daubechies wavelet with three vanishing moments (6-tap filter), tabulated
/// on [0, 5] at spacing 2^-J by the cascade algorithm.
class WaveletFamily {
 public:
  explicit WaveletFamily(int J = 12);

  int levels() const { return J_; }
  double step() const { return step_; }
  static constexpr double support() { return 5.0; }
  static const std::array<double, 6>& filter();

  double phi(double x) const { return lookup(phi_, x); }
  double psi(double x) const { return lookup(psi_, x); }
  /// Antiderivatives from 0, constant beyond the support.
  double phi_integral(double x) const { return lookup_integral(phi_int_, x); }
  double psi_integral(double x) const { return lookup_integral(psi_int_, x); }

  /// int x^m psi(x) dx by the trapezoid rule on the table.
  double psi_moment(int m) const;
  double psi_norm() const;
  const std::vector<double>& phi_table() const { return phi_; }
  const std::vector<double>& psi_table() const { return psi_; }

 private:
  double lookup(const std::vector<double>& table, double x) const;
  double lookup_integral(const std::vector<double>& table, double x) const;

  int J_;
  double step_;
  std::vector<double> phi_, psi_, phi_int_, psi_int_;
};

/// Dyadic cube I of side 2^-level in R^n with integer offset, and an
/// orientation mask: bit i set puts the wavelet (not the scaling function)
/// in coordinate i. For n = 1 the orientation is always 1.
///
/// psi_I(x) = side^(-n/2) prod_i f_i(x_i / side - k_i + 2), supported on 5I.
struct WaveletCube {
  int n = 1;
  int level = 0;
  std::vector<std::int64_t> offset;
  unsigned orientation = 1;

  double side() const;
};

double psi_cube(const WaveletFamily& family, const WaveletCube& cube, std::span<const double> x);

/// <chi_B(0,1) - 2^-n chi_B(0,2), psi_I> for n = 1 or 2.
double h_coefficient(const WaveletFamily& family, const WaveletCube& cube);

/// True when 5I meets one of the spheres |x| = 1, |x| = 2.
bool touches_spheres(const WaveletCube& cube);

/// Cubes at one level whose 5I meets B(0, 2), all orientations.
std::vector<WaveletCube> cubes_meeting_ball(int n, int level);
/// Cubes containing sample points spread over both spheres (count points
/// per sphere), all orientations, without repeats.
std::vector<WaveletCube> boundary_cubes(int n, int level, std::size_t count);

struct DecayFit {
  std::vector<int> levels;
  std::vector<double> sides;
  std::vector<double> max_coefficient;
  double slope = 0.0;
  double intercept = 0.0;
  double expected = 0.0;
};

/// Regression of log2 max|a_I| on log2 side over the given levels. Large
/// cubes use every cube meeting B(0,2); small cubes use boundary samples.
DecayFit decay_regression(const WaveletFamily& family, int n, int level_lo, int level_hi,
                          std::size_t boundary_samples = 48);

struct VanishingCheck {
  std::size_t cubes = 0;
  double max_abs = 0.0;
};

/// Coefficients of cubes whose 5I misses both spheres, chosen at random
/// among the offsets within distance 4 of the origin, count per level.
VanishingCheck vanishing_check(const WaveletFamily& family, int n, std::span<const int> levels,
                               std::size_t count, std::uint64_t seed);

struct ReconstructionCheck {
  std::vector<double> values;
  std::vector<double> targets;
  double max_error = 0.0;
};

/// sum of a_I psi_I(x) over all cubes at levels level_lo..level_hi whose
/// support contains x, compared with h(x).
ReconstructionCheck reconstruction_check(const WaveletFamily& family, int n, int level_lo,
                                         int level_hi, const std::vector<std::vector<double>>& points);

/// chi_B(0,1) - 2^-n chi_B(0,2) at x.
double h_tilde(std::span<const double> x);

}  // namespace rectiscan
