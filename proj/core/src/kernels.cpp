#include "rectiscan/kernels.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "rectiscan/errors.hpp"

namespace rectiscan {
namespace {

using Poly = std::vector<double>;

double eval(const Poly& p, double v) {
  double s = 0.0;
  for (std::size_t j = p.size(); j-- > 0;) s = s * v + p[j];
  return s;
}

void add_scaled(Poly& out, const Poly& p, double c, std::size_t shift) {
  if (out.size() < p.size() + shift) out.resize(p.size() + shift, 0.0);
  for (std::size_t j = 0; j < p.size(); ++j) out[j + shift] += c * p[j];
}

double binomial(int k, int i) {
  double c = 1.0;
  for (int m = 1; m <= i; ++m) c = c * (k - i + m) / m;
  return c;
}

double to_double(const std::string& text, const std::string& what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw_invalid("kernel: cannot parse " + what + " from '" + text + "'");
  return value;
}

}  // namespace

KernelSpec KernelSpec::gaussian(int N, int n) {
  if (N < 1) throw_invalid("kernel gauss: N must be a natural number (N in N, N >= 1)");
  if (n < 1) throw_invalid("kernel: dimension n must be positive");
  return KernelSpec{KernelFamily::Gaussian, N, 0.0, n};
}

KernelSpec KernelSpec::inverse_power(double a, int n) {
  if (n < 1) throw_invalid("kernel: dimension n must be positive");
  if (!std::isfinite(a) || !(a > n / 2.0))
    throw_invalid("kernel invpow: exponent a must exceed n/2 = " + std::to_string(n / 2.0));
  return KernelSpec{KernelFamily::InversePower, 0, a, n};
}

KernelSpec KernelSpec::hard(int n) {
  if (n < 1) throw_invalid("kernel: dimension n must be positive");
  return KernelSpec{KernelFamily::HardIndicator, 0, 0.0, n};
}

KernelSpec KernelSpec::parse(const std::string& text, int n) {
  if (text == "hard") return hard(n);
  if (text.rfind("gauss:N=", 0) == 0) {
    const std::string arg = text.substr(8);
    const double v = to_double(arg, "N");
    if (v != std::floor(v) || v < 1 || v > 64)
      throw_invalid("kernel gauss: N must be a natural number (N in N, N >= 1), got " + arg);
    return gaussian(static_cast<int>(v), n);
  }
  if (text.rfind("invpow:a=", 0) == 0) return inverse_power(to_double(text.substr(9), "a"), n);
  throw_invalid("kernel: unknown kernel '" + text +
                "' (expected gauss:N=<int>, invpow:a=<real> or hard)");
}

std::string KernelSpec::to_string() const {
  switch (family) {
    case KernelFamily::Gaussian:
      return "gauss:N=" + std::to_string(N);
    case KernelFamily::InversePower: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, a);
      return "invpow:a=" + std::string(buf, res.ptr);
    }
    case KernelFamily::HardIndicator:
      return "hard";
  }
  return "hard";
}

RadialKernel::RadialKernel(const KernelSpec& spec, KernelKind kind, int k)
    : spec_(spec), kind_(kind), k_(k) {
  if (kind == KernelKind::Phi) {
    k_ = 0;
    return;
  }
  if (kind == KernelKind::Difference) {
    if (k < 1) throw_invalid("difference kernel: order k must be at least 1");
    if (k > 16) throw_invalid("difference kernel: order k must be at most 16");
    return;
  }
  if (!spec.smooth())
    throw UnsupportedKernel("the hard indicator has no t-derivative kernel");
  if (k < 1 || k > 4) throw_invalid("derivative kernel: order k must lie in [1, 4]");

  // Apply prod_{i<k} (theta - i), theta = t d/dt, to t^-n g(v).
  const double n = spec.n;
  std::vector<Poly> terms(1, Poly{1.0});
  for (int i = 0; i < k; ++i) {
    std::vector<Poly> next(terms.size() + 1);
    for (std::size_t m = 0; m < terms.size(); ++m) {
      const Poly& p = terms[m];
      Poly same(p.size(), 0.0);
      for (std::size_t j = 0; j < p.size(); ++j)
        same[j] = (-n - i - 2.0 * static_cast<double>(j)) * p[j];
      add_scaled(next[m], same, 1.0, 0);
      add_scaled(next[m + 1], p, -2.0, 1);
    }
    terms = std::move(next);
  }
  poly_ = std::move(terms);

  if (spec.family == KernelFamily::Gaussian) {
    const std::size_t N = static_cast<std::size_t>(spec.N);
    gauss_poly_.assign(1, Poly{1.0});
    for (std::size_t m = 1; m < poly_.size(); ++m) {
      const Poly& q = gauss_poly_.back();
      Poly next;
      Poly dq(q.size() > 1 ? q.size() - 1 : 1, 0.0);
      for (std::size_t j = 1; j < q.size(); ++j) dq[j - 1] = static_cast<double>(j) * q[j];
      add_scaled(next, dq, 1.0, 0);
      add_scaled(next, q, -static_cast<double>(N), N - 1);
      gauss_poly_.push_back(std::move(next));
    }
  }
}

double RadialKernel::scale_factor() const {
  return kind_ == KernelKind::Difference ? std::ldexp(1.0, k_) : 1.0;
}

double RadialKernel::profile(double v) const {
  switch (spec_.family) {
    case KernelFamily::Gaussian:
      return std::exp(-std::pow(v, spec_.N));
    case KernelFamily::InversePower:
      return std::pow(1.0 + v, -spec_.a);
    case KernelFamily::HardIndicator:
      return v <= 1.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

double RadialKernel::derivative_term(double v) const {
  double s = 0.0;
  if (spec_.family == KernelFamily::Gaussian) {
    const double e = std::exp(-std::pow(v, spec_.N));
    if (e == 0.0) return 0.0;
    for (std::size_t m = 0; m < poly_.size(); ++m) s += eval(poly_[m], v) * eval(gauss_poly_[m], v);
    return s * e;
  }
  // Evaluate p(v) (1+v)^-deg in the bounded variable v/(1+v) so huge v
  // cannot overflow the polynomial before the power decays it.
  const double u = 1.0 / (1.0 + v), w = v * u;
  double falling = 1.0;
  for (std::size_t m = 0; m < poly_.size(); ++m) {
    const Poly& p = poly_[m];
    double scaled = 0.0;
    for (std::size_t j = p.size(); j-- > 0;) scaled = scaled * w + p[j] * std::pow(u, p.size() - 1 - j);
    const double deg = p.empty() ? 0.0 : static_cast<double>(p.size() - 1);
    s += scaled * falling * std::pow(1.0 + v, deg - spec_.a - static_cast<double>(m));
    falling *= -spec_.a - static_cast<double>(m);
  }
  return s;
}

double RadialKernel::operator()(double r2, double t) const {
  const double tn = std::pow(t, -spec_.n);
  switch (kind_) {
    case KernelKind::Phi:
      if (spec_.family == KernelFamily::HardIndicator) return r2 <= t * t ? tn : 0.0;
      return tn * profile(r2 / (t * t));
    case KernelKind::Difference: {
      double s = 0.0;
      double ti = t;
      for (int i = 0; i <= k_; ++i) {
        const double ptn = std::pow(ti, -spec_.n);
        double val = spec_.family == KernelFamily::HardIndicator
                         ? (r2 <= ti * ti ? ptn : 0.0)
                         : ptn * profile(r2 / (ti * ti));
        s += ((i % 2) ? -1.0 : 1.0) * binomial(k_, i) * val;
        ti *= 2.0;
      }
      return s;
    }
    case KernelKind::Derivative:
      return tn * derivative_term(r2 / (t * t));
  }
  return 0.0;
}

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return s;
}

void check_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw_invalid("kernel: scale t must be positive");
}

}  // namespace

double phi_t(const KernelSpec& spec, std::span<const double> x, double t) {
  check_t(t);
  return RadialKernel(spec, KernelKind::Phi)(norm2(x), t);
}

double d_phi(const KernelSpec& spec, std::span<const double> x, double t) {
  check_t(t);
  return RadialKernel(spec, KernelKind::Derivative, 1)(norm2(x), t);
}

double dk_phi(const KernelSpec& spec, std::span<const double> x, double t, int k) {
  check_t(t);
  return RadialKernel(spec, KernelKind::Derivative, k)(norm2(x), t);
}

double discrete_difference_kernel(const KernelSpec& spec, std::span<const double> x, double t,
                                  int k) {
  check_t(t);
  return RadialKernel(spec, KernelKind::Difference, k)(norm2(x), t);
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double plane_annihilation_defect(const KernelSpec& spec, double t, int k,
                                 const QuadratureSpec& quad) {
  check_t(t);
  if (k < 1) throw_invalid("plane_annihilation_defect: k must be at least 1");
  if (quad.panels < 1) throw_invalid("plane_annihilation_defect: need at least one panel");
  const int n = spec.n;
  if (!spec.smooth()) {
    // Every phi_r integrates to the unit-ball volume.
    double s = 0.0;
    for (int i = 0; i <= k; ++i) s += ((i % 2) ? -1.0 : 1.0) * binomial(k, i);
    return std::abs(s * unit_ball_volume(n));
  }
  const double factor = quad.truncation_factor > 0.0
                            ? quad.truncation_factor
                            : (spec.family == KernelFamily::Gaussian ? 10.0 : 100.0);
  const double T = factor * std::ldexp(t, k);
  const double sphere = n * unit_ball_volume(n);

  auto integrate = [&](const RadialKernel& kernel) {
    auto f = [&](double rho) {
      // exp_sinh probes far enough out for rho^2 to overflow; the integrand is negligible there.
      if (rho > 1e100) return 0.0;
      return sphere * std::pow(rho, n - 1) * kernel(rho * rho, t);
    };
    double total = 0.0;
    const double h = T / quad.panels;
    for (int p = 0; p < quad.panels; ++p)
      total += boost::math::quadrature::gauss<double, 20>::integrate(f, p * h, (p + 1) * h);
    if (spec.family != KernelFamily::Gaussian) {
      boost::math::quadrature::exp_sinh<double> tail;
      total += tail.integrate(f, T, std::numeric_limits<double>::infinity());
    }
    return total;
  };

  const double diff = std::abs(integrate(RadialKernel(spec, KernelKind::Difference, k)));
  const double deriv =
      k <= 4 ? std::abs(integrate(RadialKernel(spec, KernelKind::Derivative, k))) : 0.0;
  return std::max(diff, deriv);
}

double convex_weight(double R, double s, int n) {
  if (!(R > 0.0)) throw_invalid("convex_weight: R must be positive");
  if (s < 0.0) throw_invalid("convex_weight: s must be non-negative");
  return 2.0 * std::pow(s, n + 1) / std::pow(R, n + 2) * std::exp(-(s * s) / (R * R));
}

}  // namespace rectiscan
