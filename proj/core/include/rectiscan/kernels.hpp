#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace rectiscan {

enum class KernelFamily { Gaussian, InversePower, HardIndicator };

/// Radial profile phi with phi_t(x) = t^-n phi(x/t).
///
///   Gaussian{N}:      phi(x) = exp(-|x|^(2N)), N >= 1
///   InversePower{a}:  phi(x) = (1 + |x|^2)^(-a), a > n/2
///   HardIndicator:    phi_t = t^-n on the closed ball B(0, t)
struct KernelSpec {
  KernelFamily family = KernelFamily::Gaussian;
  int N = 1;
  double a = 1.0;
  int n = 1;

  static KernelSpec gaussian(int N, int n);
  static KernelSpec inverse_power(double a, int n);
  static KernelSpec hard(int n);
  /// Parses "gauss:N=1", "invpow:a=1.5" or "hard".
  static KernelSpec parse(const std::string& text, int n);

  bool smooth() const { return family != KernelFamily::HardIndicator; }
  std::string to_string() const;
};

/// Which derived kernel a RadialKernel evaluates.
enum class KernelKind {
  Phi,         // phi_t
  Difference,  // D^k[phi_t] = sum_i (-1)^i C(k,i) phi_{2^i t}
  Derivative,  // t^k d^k/dt^k phi_t
};

/// A kernel prepared for repeated evaluation at (|x|^2, t).
class RadialKernel {
 public:
  RadialKernel(const KernelSpec& spec, KernelKind kind, int k = 1);

  double operator()(double r2, double t) const;
  const KernelSpec& spec() const { return spec_; }
  KernelKind kind() const { return kind_; }
  int order() const { return k_; }
  /// Largest dilation of t the kernel involves (2^k for differences, else 1).
  double scale_factor() const;

 private:
  double profile(double v) const;
  double derivative_term(double v) const;

  KernelSpec spec_;
  KernelKind kind_;
  int k_;
  // t^k d^k/dt^k [t^-n g(v)] = t^-n sum_m poly_[m](v) g^(m)(v), v = |x|^2/t^2.
  std::vector<std::vector<double>> poly_;
  // Gaussian: g^(m)(v) = exp(-v^N) * gauss_poly_[m](v).
  std::vector<std::vector<double>> gauss_poly_;
};

double phi_t(const KernelSpec& spec, std::span<const double> x, double t);
double d_phi(const KernelSpec& spec, std::span<const double> x, double t);
/// 1 <= k <= 4.
double dk_phi(const KernelSpec& spec, std::span<const double> x, double t, int k);
double discrete_difference_kernel(const KernelSpec& spec, std::span<const double> x, double t,
                                  int k);

struct QuadratureSpec {
  /// Gauss-Legendre panels on [0, T]; the tail beyond T is integrated by a
  /// double-exponential rule.
  int panels = 1024;
  /// T = truncation_factor * 2^k * t. Zero selects 10 (Gaussian) or 100
  /// (inverse power).
  double truncation_factor = 0.0;
};

/// max(|int_{R^n} D^k[phi_t]|, |int_{R^n} t^k d^k/dt^k phi_t|); the second
/// term is omitted for the hard indicator.
double plane_annihilation_defect(const KernelSpec& spec, double t, int k,
                                 const QuadratureSpec& quad = {});

/// 2 s^(n+1) / R^(n+2) * exp(-s^2/R^2).
double convex_weight(double R, double s, int n);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

}  // namespace rectiscan
