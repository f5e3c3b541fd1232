#include "rectiscan/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "rectiscan/errors.hpp"
#include "rectiscan/transport.hpp"

namespace rectiscan {
namespace {

// Flip v so that its largest-magnitude component (first on ties) is positive.
void normalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best]) + 1e-12) best = i;
  if (v[best] < 0.0) v = -v;
}

PlaneFit fit_weighted(const Atoms& atoms, std::span<const double> w, int n) {
  const int d = atoms.d;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    auto p = atoms.point(i);
    for (int k = 0; k < d; ++k) mean[k] += w[i] * p[k];
    total += w[i];
  }
  if (!(total > 0.0)) throw_invalid("plane fit: total weight must be positive");
  mean /= total;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd y(d);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    auto p = atoms.point(i);
    for (int k = 0; k < d; ++k) y[k] = p[k] - mean[k];
    cov.noalias() += w[i] * y * y.transpose();
  }
  cov /= total;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  PlaneFit fit;
  fit.d = d;
  fit.n = n;
  fit.base.assign(mean.data(), mean.data() + d);
  fit.basis.resize(static_cast<std::size_t>(n) * d);
  const Eigen::VectorXd& vals = eig.eigenvalues();
  const double top = std::max(vals[d - 1], 0.0);
  // Eigenvalues ascend; the plane takes the n largest.
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v = eig.eigenvectors().col(d - 1 - i);
    normalize_sign(v);
    std::copy(v.data(), v.data() + d, fit.basis.begin() + static_cast<std::ptrdiff_t>(i) * d);
  }
  fit.degenerate = !(vals[d - n] > 1e-12 * top) || top == 0.0;
  return fit;
}

}  // namespace

double PlaneFit::distance(std::span<const double> p) const {
  double full = 0.0;
  double along = 0.0;
  for (int k = 0; k < d; ++k) full += (p[k] - base[k]) * (p[k] - base[k]);
  for (int i = 0; i < n; ++i) {
    double dot = 0.0;
    auto e = direction(i);
    for (int k = 0; k < d; ++k) dot += (p[k] - base[k]) * e[k];
    along += dot * dot;
  }
  return std::sqrt(std::max(full - along, 0.0));
}

std::vector<double> PlaneFit::project(std::span<const double> p) const {
  std::vector<double> out = base;
  for (int i = 0; i < n; ++i) {
    auto e = direction(i);
    double dot = 0.0;
    for (int k = 0; k < d; ++k) dot += (p[k] - base[k]) * e[k];
    for (int k = 0; k < d; ++k) out[k] += dot * e[k];
  }
  return out;
}

void Atoms::add(std::span<const double> p, double w) {
  coords.insert(coords.end(), p.begin(), p.end());
  weights.push_back(w);
}

Atoms atoms_in_ball(const DiscreteMeasure& measure, const SpatialIndex& index,
                    std::span<const double> center, double radius) {
  Atoms atoms;
  atoms.d = measure.ambient_dim();
  for (std::size_t i : index.points_in_ball(center, radius))
    atoms.add(measure.point(i), measure.weight(i));
  return atoms;
}

PlaneFit fit_plane_l2(const Atoms& atoms, int n) {
  if (atoms.size() == 0) throw_invalid("plane fit: no atoms");
  PlaneFit fit = fit_weighted(atoms, atoms.weights, n);
  double s = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double dist = fit.distance(atoms.point(i));
    s += atoms.weights[i] * dist * dist;
  }
  fit.objective = s;
  fit.kind = ObjectiveKind::L2;
  return fit;
}

double l1_objective(const Atoms& atoms, const PlaneFit& plane) {
  double s = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    s += atoms.weights[i] * plane.distance(atoms.point(i));
  return s;
}

namespace {

// Iteratively reweighted least squares from one starting plane.
PlaneFit irls_l1(const Atoms& atoms, int n, double r, PlaneFit start) {
  start.objective = l1_objective(atoms, start);
  start.kind = ObjectiveKind::L1;
  PlaneFit best = start;
  PlaneFit current = start;
  const double floor = 1e-6 * r;
  const double scale = std::pow(r, n + 1);
  std::vector<double> omega(atoms.size());
  double previous = best.objective;
  for (int iter = 0; iter < 50; ++iter) {
    for (std::size_t i = 0; i < atoms.size(); ++i)
      omega[i] = atoms.weights[i] / std::max(current.distance(atoms.point(i)), floor);
    current = fit_weighted(atoms, omega, n);
    current.objective = l1_objective(atoms, current);
    current.kind = ObjectiveKind::L1;
    if (current.objective < best.objective) best = current;
    const double decrease = previous - current.objective;
    previous = current.objective;
    if (decrease < 1e-10 * scale) break;
  }
  return best;
}

// Extra starting orientations through the same base point. The L1 objective
// is not convex in the orientation, so a single start can stall on clustered
// sets.
std::vector<PlaneFit> rotated_starts(const PlaneFit& l2) {
  const int d = l2.d, n = l2.n;
  std::vector<PlaneFit> out;
  if (n == 0 || n == d) return out;
  constexpr int kStarts = 8;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss;
  for (int s = 0; s < kStarts; ++s) {
    Eigen::MatrixXd frame(d, n);
    if (d == 2) {
      const double angle = std::numbers::pi * s / kStarts;
      frame << std::cos(angle), std::sin(angle);
    } else {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < n; ++j) frame(i, j) = gauss(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(frame);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, n);
    PlaneFit p = l2;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < d; ++k) p.basis[static_cast<std::size_t>(j) * d + k] = q(k, j);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

PlaneFit fit_plane_l1(const Atoms& atoms, int n, double r) {
  const PlaneFit start = fit_plane_l2(atoms, n);
  PlaneFit best = irls_l1(atoms, n, r, start);
  for (const PlaneFit& s : rotated_starts(start)) {
    PlaneFit candidate = irls_l1(atoms, n, r, s);
    if (candidate.objective < best.objective * (1.0 - 1e-12)) best = std::move(candidate);
  }
  best.degenerate = start.degenerate;
  return best;
}

namespace {

Atoms checked_ball_atoms(const DiscreteMeasure& measure, const SpatialIndex& index,
                         std::span<const double> x, double r, const char* who) {
  if (!(r > 0.0)) throw_invalid(std::string(who) + ": radius must be positive");
  if (x.size() != static_cast<std::size_t>(measure.ambient_dim()))
    throw_invalid(std::string(who) + ": center has wrong dimension");
  Atoms atoms = atoms_in_ball(measure, index, x, r);
  if (atoms.size() < static_cast<std::size_t>(measure.target_dim()) + 1)
    throw_invalid(std::string(who) + ": the ball holds fewer than n + 1 points");
  return atoms;
}

}  // namespace

BetaResult beta2(const DiscreteMeasure& measure, const SpatialIndex& index,
                 std::span<const double> x, double r) {
  Atoms atoms = checked_ball_atoms(measure, index, x, r, "beta2");
  const int n = measure.target_dim();
  BetaResult out;
  out.plane = fit_plane_l2(atoms, n);
  out.value = std::sqrt(out.plane.objective / std::pow(r, n + 2));
  return out;
}

BetaResult beta1(const DiscreteMeasure& measure, const SpatialIndex& index,
                 std::span<const double> x, double r) {
  Atoms atoms = checked_ball_atoms(measure, index, x, r, "beta1");
  const int n = measure.target_dim();
  BetaResult out;
  out.plane = fit_plane_l1(atoms, n, r);
  out.value = out.plane.objective / std::pow(r, n + 1);
  return out;
}

double flat_norm_distance(const Atoms& sigma, const Atoms& nu, std::span<const double> center,
                          double radius, std::size_t max_atoms) {
  if (!(radius > 0.0)) throw_invalid("flat_norm_distance: radius must be positive");
  const int d = static_cast<int>(center.size());
  if (sigma.d != d || nu.d != d)
    throw_invalid("flat_norm_distance: atoms and ball differ in dimension");
  for (double w : sigma.weights)
    if (!(w >= 0.0) || !std::isfinite(w)) throw_invalid("flat_norm_distance: bad weight");
  for (double w : nu.weights)
    if (!(w >= 0.0) || !std::isfinite(w)) throw_invalid("flat_norm_distance: bad weight");

  const double r2 = radius * radius;
  auto inside = [&](const Atoms& a) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a.weights[i] > 0.0 && squared_distance(a.point(i), center) <= r2) keep.push_back(i);
    return keep;
  };
  std::vector<std::size_t> s_idx = inside(sigma);
  std::vector<std::size_t> n_idx = inside(nu);
  if (s_idx.size() + n_idx.size() > max_atoms)
    throw SizeError("flat_norm_distance: " + std::to_string(s_idx.size() + n_idx.size()) +
                    " atoms inside the ball exceed the cap of " + std::to_string(max_atoms));
  if (s_idx.empty() && n_idx.empty()) return 0.0;

  // Order both sides along the principal direction of all atoms so the
  // northwest-corner start pairs nearby atoms.
  Eigen::VectorXd axis = Eigen::VectorXd::Unit(d, 0);
  {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    std::size_t count = 0;
    auto acc = [&](const Atoms& a, const std::vector<std::size_t>& idx) {
      for (std::size_t i : idx) {
        for (int k = 0; k < d; ++k) mean[k] += a.point(i)[k];
        ++count;
      }
    };
    acc(sigma, s_idx);
    acc(nu, n_idx);
    mean /= static_cast<double>(count);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd y(d);
    auto accc = [&](const Atoms& a, const std::vector<std::size_t>& idx) {
      for (std::size_t i : idx) {
        for (int k = 0; k < d; ++k) y[k] = a.point(i)[k] - mean[k];
        cov.noalias() += y * y.transpose();
      }
    };
    accc(sigma, s_idx);
    accc(nu, n_idx);
    if (cov.norm() > 0.0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
      axis = eig.eigenvectors().col(d - 1);
      normalize_sign(axis);
    }
  }
  auto order = [&](const Atoms& a, std::vector<std::size_t>& idx) {
    std::vector<double> key(a.size(), 0.0);
    for (std::size_t i : idx) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += a.point(i)[k] * axis[k];
      key[i] = s;
    }
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t x, std::size_t y) { return key[x] < key[y]; });
  };
  order(sigma, s_idx);
  order(nu, n_idx);

  auto boundary_distance = [&](std::span<const double> p) {
    return std::max(radius - std::sqrt(squared_distance(p, center)), 0.0);
  };

  const std::size_t m = s_idx.size() + 1;
  const std::size_t k = n_idx.size() + 1;
  std::vector<double> supply(m), demand(k), cost(m * k, 0.0);
  double sum_sigma = 0.0, sum_nu = 0.0;
  for (std::size_t i = 0; i < s_idx.size(); ++i) {
    supply[i] = sigma.weights[s_idx[i]];
    sum_sigma += supply[i];
  }
  for (std::size_t j = 0; j < n_idx.size(); ++j) {
    demand[j] = nu.weights[n_idx[j]];
    sum_nu += demand[j];
  }
  supply[m - 1] = sum_nu;
  demand[k - 1] = sum_sigma;
  for (std::size_t i = 0; i < s_idx.size(); ++i) {
    auto p = sigma.point(s_idx[i]);
    double* row = cost.data() + i * k;
    for (std::size_t j = 0; j < n_idx.size(); ++j)
      row[j] = std::sqrt(squared_distance(p, nu.point(n_idx[j])));
    row[k - 1] = boundary_distance(p);
  }
  for (std::size_t j = 0; j < n_idx.size(); ++j)
    cost[(m - 1) * k + j] = boundary_distance(nu.point(n_idx[j]));
  return solve_transport(supply, demand, cost).cost;
}

}  // namespace rectiscan
