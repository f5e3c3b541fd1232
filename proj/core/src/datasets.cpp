#include "rectiscan/datasets.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "rectiscan/errors.hpp"

namespace rectiscan {
namespace {

std::size_t side_count(std::size_t budget, int n) {
  auto m = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(budget), 1.0 / n)));
  return std::max<std::size_t>(m, 2);
}

// Regular n-dimensional grid of side `length` in the first n coordinates.
void plane_grid(const GeneratorSpec& spec, std::vector<double>& coords, std::vector<double>& weights) {
  const std::size_t m = side_count(spec.points, spec.n);
  const double step = spec.length / static_cast<double>(m - 1);
  std::size_t total = 1;
  for (int i = 0; i < spec.n; ++i) total *= m;
  const double w = std::pow(spec.length, spec.n) / static_cast<double>(total);
  std::vector<std::size_t> k(static_cast<std::size_t>(spec.n), 0);
  for (std::size_t p = 0; p < total; ++p) {
    for (int j = 0; j < spec.d; ++j)
      coords.push_back(j < spec.n ? static_cast<double>(k[static_cast<std::size_t>(j)]) * step : 0.0);
    weights.push_back(w);
    int i = 0;
    while (i < spec.n && ++k[static_cast<std::size_t>(i)] == m) k[static_cast<std::size_t>(i++)] = 0;
  }
}

double graph_value(const GeneratorSpec& spec, double x) {
  const double s = std::sin(2.0 * std::numbers::pi * spec.frequency * x);
  return spec.amplitude * (spec.profile == GraphProfile::Sine ? s : std::abs(s));
}

double graph_slope(const GeneratorSpec& spec, double x) {
  const double w = 2.0 * std::numbers::pi * spec.frequency;
  const double s = std::sin(w * x);
  const double c = spec.amplitude * w * std::cos(w * x);
  return spec.profile == GraphProfile::Sine ? c : (s < 0.0 ? -c : c);
}

void lipschitz_graph(const GeneratorSpec& spec, std::vector<double>& coords,
                     std::vector<double>& weights) {
  using boost::math::quadrature::gauss_kronrod;
  auto speed = [&](double x) {
    const double s = graph_slope(spec, x);
    return std::sqrt(1.0 + s * s);
  };
  // Panels end where |sin| has kinks, so each piece is smooth.
  const double half_period = 1.0 / (2.0 * spec.frequency);
  std::vector<double> knots{0.0};
  for (double x = half_period; x < spec.length; x += half_period) knots.push_back(x);
  knots.push_back(spec.length);
  const std::size_t sub = 64;
  std::vector<double> xs{0.0}, cum{0.0};
  for (std::size_t p = 0; p + 1 < knots.size(); ++p) {
    const double h = (knots[p + 1] - knots[p]) / static_cast<double>(sub);
    for (std::size_t q = 0; q < sub; ++q) {
      const double a = knots[p] + static_cast<double>(q) * h;
      const double b = q + 1 == sub ? knots[p + 1] : a + h;
      cum.push_back(cum.back() + gauss_kronrod<double, 31>::integrate(speed, a, b, 0, 1e-14));
      xs.push_back(b);
    }
  }
  const double total = cum.back();
  const std::size_t count = spec.points;
  const double w = total / static_cast<double>(count);
  std::size_t panel = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double target = count == 1 ? 0.0 : total * static_cast<double>(i) / static_cast<double>(count - 1);
    while (panel + 2 < cum.size() && cum[panel + 1] < target) ++panel;
    // Newton iteration on the arc length within the panel, safeguarded by
    // bisection.
    double lo = xs[panel], hi = xs[panel + 1];
    double x = lo + (hi - lo) * (target - cum[panel]) / std::max(cum[panel + 1] - cum[panel], 1e-300);
    for (int it = 0; it < 60; ++it) {
      const double f = cum[panel] + gauss_kronrod<double, 15>::integrate(speed, xs[panel], x, 0, 1e-14) - target;
      if (std::abs(f) < 1e-12) break;
      if (f > 0.0) hi = x; else lo = x;
      double next = x - f / speed(x);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      x = next;
    }
    coords.push_back(x);
    coords.push_back(graph_value(spec, x));
    for (int j = 2; j < spec.d; ++j) coords.push_back(0.0);
    weights.push_back(w);
  }
}

void cantor(const GeneratorSpec& spec, std::vector<double>& coords, std::vector<double>& weights) {
  const std::size_t count = std::size_t{1} << (2 * spec.K);
  const double side = std::pow(0.25, spec.K);
  const double w = side;  // 4^-K times the unit outer side.
  for (std::size_t i = 0; i < count; ++i) {
    // Z-order digits, most significant generation first.
    double x = 0.0, y = 0.0, s = 1.0;
    for (int g = spec.K - 1; g >= 0; --g) {
      const std::size_t q = (i >> (2 * g)) & 3u;
      s *= 0.25;
      if (q & 1u) x += 3.0 * s;
      if (q & 2u) y += 3.0 * s;
    }
    coords.push_back(x + 0.5 * side);
    coords.push_back(y + 0.5 * side);
    weights.push_back(w);
  }
}

}  // namespace

GeneratorKind GeneratorSpec::parse_kind(const std::string& name) {
  if (name == "plane") return GeneratorKind::Plane;
  if (name == "segment") return GeneratorKind::Segment;
  if (name == "circle") return GeneratorKind::Circle;
  if (name == "lipschitz") return GeneratorKind::LipschitzGraph;
  if (name == "cantor") return GeneratorKind::Cantor4;
  if (name == "perturbed-plane") return GeneratorKind::PerturbedPlane;
  if (name == "atoms") return GeneratorKind::AtomCloud;
  throw_invalid("unknown dataset kind '" + name +
                "' (expected plane, segment, circle, lipschitz, cantor, perturbed-plane or atoms)");
}

std::string GeneratorSpec::kind_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Plane: return "plane";
    case GeneratorKind::Segment: return "segment";
    case GeneratorKind::Circle: return "circle";
    case GeneratorKind::LipschitzGraph: return "lipschitz";
    case GeneratorKind::Cantor4: return "cantor";
    case GeneratorKind::PerturbedPlane: return "perturbed-plane";
    case GeneratorKind::AtomCloud: return "atoms";
  }
  return "unknown";
}

DiscreteMeasure generate(const GeneratorSpec& spec) {
  if (spec.points < 1) throw_invalid("generate: point budget must be at least 1");
  if (spec.n < 1 || spec.n >= spec.d) throw_invalid("generate: need 0 < n < d");
  if (!(spec.length > 0.0)) throw_invalid("generate: length must be positive");
  std::vector<double> coords, weights;
  switch (spec.kind) {
    case GeneratorKind::Plane:
      plane_grid(spec, coords, weights);
      break;
    case GeneratorKind::Segment: {
      if (spec.n != 1) throw_invalid("generate segment: n must be 1");
      const std::size_t count = spec.points;
      const double w = spec.length / static_cast<double>(count);
      for (std::size_t i = 0; i < count; ++i) {
        coords.push_back(count == 1 ? 0.0
                                    : spec.length * static_cast<double>(i) / static_cast<double>(count - 1));
        for (int j = 1; j < spec.d; ++j) coords.push_back(0.0);
        weights.push_back(w);
      }
      break;
    }
    case GeneratorKind::Circle: {
      if (spec.n != 1) throw_invalid("generate circle: n must be 1");
      if (!(spec.rho > 0.0)) throw_invalid("generate circle: radius must be positive");
      const std::size_t count = spec.points;
      const double w = 2.0 * std::numbers::pi * spec.rho / static_cast<double>(count);
      for (std::size_t i = 0; i < count; ++i) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
        coords.push_back(spec.rho * std::cos(th));
        coords.push_back(spec.rho * std::sin(th));
        for (int j = 2; j < spec.d; ++j) coords.push_back(0.0);
        weights.push_back(w);
      }
      break;
    }
    case GeneratorKind::LipschitzGraph:
      if (spec.n != 1) throw_invalid("generate lipschitz: n must be 1");
      if (!(spec.frequency > 0.0)) throw_invalid("generate lipschitz: frequency must be positive");
      if (!(std::abs(spec.amplitude) * spec.frequency * 2.0 * std::numbers::pi < 1.0))
        throw_invalid("generate lipschitz: amplitude * frequency * 2 pi must be below 1");
      lipschitz_graph(spec, coords, weights);
      break;
    case GeneratorKind::Cantor4:
      if (spec.n != 1 || spec.d != 2) throw_invalid("generate cantor: requires n = 1 and d = 2");
      if (spec.K < 0 || spec.K > 12) throw_invalid("generate cantor: K must lie in [0, 12]");
      cantor(spec, coords, weights);
      break;
    case GeneratorKind::PerturbedPlane: {
      if (!(spec.noise >= 0.0)) throw_invalid("generate perturbed-plane: noise must be >= 0");
      plane_grid(spec, coords, weights);
      std::mt19937_64 rng(spec.seed);
      std::normal_distribution<double> normal(0.0, spec.noise);
      const std::size_t count = weights.size();
      for (std::size_t p = 0; p < count; ++p)
        for (int j = spec.n; j < spec.d; ++j)
          coords[p * static_cast<std::size_t>(spec.d) + static_cast<std::size_t>(j)] += normal(rng);
      break;
    }
    case GeneratorKind::AtomCloud: {
      std::mt19937_64 rng(spec.seed);
      std::uniform_real_distribution<double> unit(0.0, spec.length);
      const double w = 1.0 / static_cast<double>(spec.points);
      for (std::size_t p = 0; p < spec.points; ++p) {
        for (int j = 0; j < spec.d; ++j) coords.push_back(unit(rng));
        weights.push_back(w);
      }
      break;
    }
  }
  return DiscreteMeasure(std::move(coords), std::move(weights), spec.d, spec.n);
}

std::vector<std::size_t> cantor_labels(int K, int k) {
  if (k < 0 || k > K) throw_invalid("cantor_labels: need 0 <= k <= K");
  const std::size_t count = std::size_t{1} << (2 * K);
  std::vector<std::size_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = i >> (2 * (K - k));
  return out;
}

}  // namespace rectiscan
