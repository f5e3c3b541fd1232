#include "rectiscan/alpha.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "rectiscan/errors.hpp"
#include "rectiscan/kernels.hpp"
#include "rectiscan/parallel.hpp"

namespace rectiscan {
namespace {

struct Frame {
  // d x d orthonormal: the first n columns span the plane, column n is the
  // normal along which the atoms spread most.
  Eigen::MatrixXd axes;
};

Frame make_frame(const PlaneFit& plane, const Atoms& atoms) {
  const int d = plane.d;
  const int n = plane.n;
  Eigen::MatrixXd axes(d, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) axes(k, i) = plane.basis[static_cast<std::size_t>(i) * d + k];
  // Complete by Gram-Schmidt over the coordinate axes.
  int filled = n;
  for (int e = 0; e < d && filled < d; ++e) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(d, e);
    for (int i = 0; i < filled; ++i) v -= axes.col(i).dot(v) * axes.col(i);
    for (int i = 0; i < filled; ++i) v -= axes.col(i).dot(v) * axes.col(i);
    if (v.norm() > 1e-6) axes.col(filled++) = v.normalized();
  }
  const int m = d - n;
  if (m > 1 && atoms.size() > 0) {
    // Rotate the normal block so its first vector carries the most residual.
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd y(m);
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      auto p = atoms.point(a);
      for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) s += (p[k] - plane.base[k]) * axes(k, n + j);
        y[j] = s;
      }
      cov.noalias() += atoms.weights[a] * y * y.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    Eigen::MatrixXd rot(m, m);
    for (int j = 0; j < m; ++j) rot.col(j) = eig.eigenvectors().col(m - 1 - j);
    Eigen::MatrixXd normals = axes.rightCols(m) * rot;
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd v = normals.col(j);
      Eigen::Index big = 0;
      for (Eigen::Index k = 1; k < v.size(); ++k)
        if (std::abs(v[k]) > std::abs(v[big]) + 1e-12) big = k;
      if (v[big] < 0.0) v = -v;
      axes.col(n + j) = v;
    }
  }
  return Frame{axes};
}

// Moves the plane base to the projection of center, then pulls the plane
// toward center until it passes within max_offset.
void anchor(PlaneFit& plane, std::span<const double> center, double max_offset) {
  std::vector<double> p = plane.project(center);
  double dist2 = squared_distance(p, center);
  const double dist = std::sqrt(dist2);
  if (dist > max_offset) {
    const double keep = max_offset / dist;
    for (int k = 0; k < plane.d; ++k) p[k] = center[k] + (p[k] - center[k]) * keep;
  }
  plane.base = std::move(p);
}

Atoms merge_on_grid(const Atoms& atoms, const PlaneFit& plane, const Frame& frame,
                    std::span<const double> center, double radius, double pitch) {
  const int d = plane.d;
  std::map<std::vector<long>, double> cells;
  std::vector<long> key(d);
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    auto p = atoms.point(a);
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += (p[k] - plane.base[k]) * frame.axes(k, j);
      key[j] = std::lround(s / pitch);
    }
    cells[key] += atoms.weights[a];
  }
  Atoms out;
  out.d = d;
  std::vector<double> q(d);
  const double r2 = radius * radius;
  for (const auto& [cell, mass] : cells) {
    for (int k = 0; k < d; ++k) {
      q[k] = plane.base[k];
      for (int j = 0; j < d; ++j) q[k] += static_cast<double>(cell[j]) * pitch * frame.axes(k, j);
    }
    if (squared_distance(q, center) <= r2) out.add(q, mass);
  }
  return out;
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, int iterations,
                  double& arg) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  double best = std::min(f1, f2);
  arg = f1 <= f2 ? x1 : x2;
  for (int i = 0; i < iterations; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
      if (f1 < best) {
        best = f1;
        arg = x1;
      }
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
      if (f2 < best) {
        best = f2;
        arg = x2;
      }
    }
  }
  // The endpoint c = 0 is a legitimate candidate (no flat part at all).
  const double f0 = f(lo);
  if (f0 <= best) {
    best = f0;
    arg = lo;
  }
  return best;
}

}  // namespace

Atoms flat_atoms(const PlaneFit& plane, double c, std::span<const double> center, double radius,
                 double pitch) {
  const int d = plane.d;
  const int n = plane.n;
  Atoms out;
  out.d = d;
  const double offset2 = squared_distance(plane.base, center);
  const double rho2 = radius * radius - offset2;
  if (rho2 < 0.0) return out;
  const long reach = static_cast<long>(std::floor(std::sqrt(rho2) / pitch));
  const double mass = c * std::pow(pitch, n);
  const double r2 = radius * radius;
  std::vector<long> k(n, -reach);
  std::vector<double> q(d);
  for (;;) {
    for (int j = 0; j < d; ++j) {
      q[j] = plane.base[j];
      for (int i = 0; i < n; ++i)
        q[j] += static_cast<double>(k[i]) * pitch * plane.basis[static_cast<std::size_t>(i) * d + j];
    }
    if (squared_distance(q, center) <= r2) out.add(q, mass);
    int i = 0;
    while (i < n && ++k[i] > reach) k[i++] = -reach;
    if (i == n) break;
  }
  return out;
}

AlphaResult alpha_coeff(const DiscreteMeasure& measure, const SpatialIndex& index,
                        std::span<const double> center, double radius,
                        const AlphaOptions& options) {
  if (!(radius > 0.0)) throw_invalid("alpha_coeff: radius must be positive");
  if (center.size() != static_cast<std::size_t>(measure.ambient_dim()))
    throw_invalid("alpha_coeff: center has wrong dimension");
  if (!(options.pitch_fraction > 0.0)) throw_invalid("alpha_coeff: pitch must be positive");
  const int n = measure.target_dim();
  const int d = measure.ambient_dim();
  Atoms atoms = atoms_in_ball(measure, index, center, radius);
  if (atoms.size() == 0) throw_invalid("alpha_coeff: the ball does not meet the support");
  double mass = 0.0;
  for (double w : atoms.weights) mass += w;

  PlaneFit base_plane = atoms.size() > static_cast<std::size_t>(n)
                            ? fit_plane_l1(atoms, n, radius)
                            : fit_plane_l2(atoms, n);
  anchor(base_plane, center, radius / 2.0);
  const Frame frame = make_frame(base_plane, atoms);

  double pitch = radius * options.pitch_fraction;
  Atoms meas = atoms;
  if (meas.size() > options.measure_atom_budget) {
    double grid = pitch;
    for (;;) {
      meas = merge_on_grid(atoms, base_plane, frame, center, radius, grid);
      if (meas.size() <= options.measure_atom_budget) break;
      grid *= 1.25;
    }
  }
  // Flat pitch: coarsen for n >= 2 until the grid fits its budget.
  const double ball_cells = unit_ball_volume(n) * std::pow(1.0 / options.pitch_fraction, n);
  if (ball_cells > static_cast<double>(options.flat_atom_budget))
    pitch *= std::pow(ball_cells / static_cast<double>(options.flat_atom_budget), 1.0 / n);

  const double scale = std::pow(radius, n + 1);
  const std::size_t cap = std::numeric_limits<std::size_t>::max();
  auto objective_for = [&](const PlaneFit& plane) {
    Atoms unit = flat_atoms(plane, 1.0, center, radius, pitch);
    return [&, unit](double c) {
      Atoms flat = unit;
      for (double& w : flat.weights) w *= c;
      return flat_norm_distance(meas, flat, center, radius, cap) / scale;
    };
  };

  AlphaResult out;
  out.measure_atoms = meas.size();
  const double c_hi = 2.0 * mass / std::pow(radius, n);

  double c_star = 0.0;
  double best = golden_min(objective_for(base_plane), 0.0, c_hi, options.golden_iterations, c_star);
  PlaneFit best_plane = base_plane;

  // Candidate planes: tilt the first plane direction toward the leading
  // normal and shift along the tilted normal.
  if (d > n) {
    Eigen::VectorXd e1 = frame.axes.col(0);
    Eigen::VectorXd nu = frame.axes.col(n);
    for (int ka = -options.angle_steps; ka <= options.angle_steps; ++ka) {
      const double th = ka * options.angle_step;
      Eigen::VectorXd e1r = std::cos(th) * e1 + std::sin(th) * nu;
      Eigen::VectorXd nur = -std::sin(th) * e1 + std::cos(th) * nu;
      for (int ko = -options.offset_steps; ko <= options.offset_steps; ++ko) {
        if (ka == 0 && ko == 0) continue;
        PlaneFit plane = base_plane;
        for (int k = 0; k < d; ++k) {
          plane.basis[static_cast<std::size_t>(k)] = e1r[k];
          plane.base[k] += ko * options.offset_step * radius * nur[k];
        }
        anchor(plane, center, radius / 2.0);
        const double v = objective_for(plane)(c_star);
        if (v < best) {
          best = v;
          best_plane = plane;
        }
      }
    }
    if (!(best_plane.base == base_plane.base && best_plane.basis == base_plane.basis)) {
      double c2 = 0.0;
      const double v = golden_min(objective_for(best_plane), 0.0, c_hi,
                                  options.golden_iterations, c2);
      if (v < best) {
        best = v;
        c_star = c2;
      }
    }
  }
  out.value = best;
  out.c = c_star;
  out.plane = best_plane;
  out.flat_atoms = flat_atoms(best_plane, 1.0, center, radius, pitch).size();
  return out;
}

PackingAudit alpha_packing_audit(const DiscreteMeasure& measure, const SpatialIndex& index,
                                 const CubeLattice& lattice, std::size_t root, int max_depth,
                                 const AlphaOptions& options) {
  const DavidCube& top = lattice.cube(root);
  const int last = max_depth < 0 ? lattice.max_generation()
                                  : std::min(lattice.max_generation(), top.generation + max_depth);
  std::vector<std::size_t> cubes{root};
  for (std::size_t id : lattice.descendants(root))
    if (lattice.cube(id).generation <= last) cubes.push_back(id);
  std::vector<double> alpha(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t i) {
    const CubeBall ball = cube_ball(lattice, measure, cubes[i]);
    alpha[i] = alpha_coeff(measure, index, ball.center, ball.radius, options).value;
  });
  PackingAudit audit;
  audit.root = root;
  audit.cubes = cubes.size();
  const int depths = last - top.generation + 1;
  std::vector<double> sum(static_cast<std::size_t>(depths), 0.0);
  std::vector<double> asum(static_cast<std::size_t>(depths), 0.0);
  std::vector<std::size_t> count(static_cast<std::size_t>(depths), 0);
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    const DavidCube& q = lattice.cube(cubes[i]);
    const auto k = static_cast<std::size_t>(q.generation - top.generation);
    sum[k] += alpha[i] * alpha[i] * q.mass;
    asum[k] += alpha[i];
    ++count[k];
  }
  double running = 0.0;
  for (int k = 0; k < depths; ++k) {
    running += sum[static_cast<std::size_t>(k)];
    audit.depths.push_back(k);
    audit.cumulative_ratio.push_back(running / top.mass);
    audit.mean_alpha.push_back(count[static_cast<std::size_t>(k)]
                                   ? asum[static_cast<std::size_t>(k)] /
                                         static_cast<double>(count[static_cast<std::size_t>(k)])
                                   : 0.0);
  }
  return audit;
}

}  // namespace rectiscan
