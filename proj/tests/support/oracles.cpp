#include "oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace oracle {

using rectiscan::Atoms;
using rectiscan::DiscreteMeasure;

double ball_mass(const DiscreteMeasure& m, std::span<const double> c, double r) {
  const auto& q = m.quantizer();
  rectiscan::FixedMass sum = 0;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (rectiscan::squared_distance(m.point(i), c) <= r * r) sum += q.quantize(m.weight(i));
  return q.to_mass(sum);
}

std::vector<std::size_t> points_in_ball(const DiscreteMeasure& m, std::span<const double> c,
                                        double r) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (rectiscan::squared_distance(m.point(i), c) <= r * r) out.push_back(i);
  return out;
}

double simplex_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                   const std::vector<double>& c) {
  const std::size_t rows = A.size(), cols = c.size();
  // Tableau: rows x (cols + rows + 1), last column is the right-hand side.
  const std::size_t width = cols + rows + 1;
  std::vector<std::vector<double>> T(rows + 1, std::vector<double>(width, 0.0));
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    if (b[i] < 0.0) throw std::invalid_argument("simplex_max: needs b >= 0");
    for (std::size_t j = 0; j < cols; ++j) T[i][j] = A[i][j];
    T[i][cols + i] = 1.0;
    T[i][width - 1] = b[i];
    basis[i] = cols + i;
  }
  for (std::size_t j = 0; j < cols; ++j) T[rows][j] = -c[j];
  const double eps = 1e-12;
  for (int iter = 0; iter < 100000; ++iter) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j)
      if (T[rows][j] < -eps) {
        enter = j;
        break;
      }
    if (enter == width) return T[rows][width - 1];
    std::size_t leave = rows;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows; ++i) {
      if (T[i][enter] > eps) {
        const double ratio = T[i][width - 1] / T[i][enter];
        if (ratio < best - eps || (std::abs(ratio - best) <= eps && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave == rows) throw std::runtime_error("simplex_max: unbounded");
    const double pivot = T[leave][enter];
    for (double& v : T[leave]) v /= pivot;
    for (std::size_t i = 0; i <= rows; ++i) {
      if (i == leave || T[i][enter] == 0.0) continue;
      const double f = T[i][enter];
      for (std::size_t j = 0; j < width; ++j) T[i][j] -= f * T[leave][j];
    }
    basis[leave] = enter;
  }
  throw std::runtime_error("simplex_max: iteration limit");
}

namespace {

struct Site {
  std::vector<double> p;
  double mass;  // sigma - nu
  double room;  // distance to the sphere
};

std::vector<Site> sites(const Atoms& sigma, const Atoms& nu, std::span<const double> c, double r) {
  std::vector<Site> out;
  auto add = [&](const Atoms& a, double sign) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto p = a.point(i);
      const double room = r - std::sqrt(rectiscan::squared_distance(p, c));
      if (room <= 0.0) continue;
      bool merged = false;
      for (Site& s : out)
        if (std::equal(s.p.begin(), s.p.end(), p.begin())) {
          s.mass += sign * a.weights[i];
          merged = true;
        }
      if (!merged) out.push_back({{p.begin(), p.end()}, sign * a.weights[i], room});
    }
  };
  add(sigma, 1.0);
  add(nu, -1.0);
  return out;
}

double dist(const Site& a, const Site& b) {
  return std::sqrt(rectiscan::squared_distance(a.p, b.p));
}

}  // namespace

double lipschitz_dual_lp(const Atoms& sigma, const Atoms& nu, std::span<const double> c,
                         double r) {
  const std::vector<Site> s = sites(sigma, nu, c, r);
  const std::size_t m = s.size();
  if (m == 0) return 0.0;
  // u = f + room lies in [0, 2 room].
  std::vector<std::vector<double>> A;
  std::vector<double> b, obj(m);
  double shift = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    obj[i] = s[i].mass;
    shift += s[i].mass * s[i].room;
    std::vector<double> row(m, 0.0);
    row[i] = 1.0;
    A.push_back(row);
    b.push_back(2.0 * s[i].room);
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      std::vector<double> pair(m, 0.0);
      pair[i] = 1.0;
      pair[j] = -1.0;
      A.push_back(pair);
      b.push_back(std::max(0.0, dist(s[i], s[j]) + s[i].room - s[j].room));
    }
  }
  return simplex_max(A, b, obj) - shift;
}

double lipschitz_dual_vertices(const Atoms& sigma, const Atoms& nu, std::span<const double> c,
                               double r) {
  const std::vector<Site> s = sites(sigma, nu, c, r);
  const std::size_t m = s.size();
  if (m == 0) return 0.0;
  if (m > 5) throw std::invalid_argument("lipschitz_dual_vertices: too many sites");
  // Constraints g.x <= h.
  std::vector<Eigen::VectorXd> G;
  std::vector<double> H;
  for (std::size_t i = 0; i < m; ++i) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    g[static_cast<Eigen::Index>(i)] = 1.0;
    G.push_back(g);
    H.push_back(s[i].room);
    G.push_back(-g);
    H.push_back(s[i].room);
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
      e[static_cast<Eigen::Index>(i)] = 1.0;
      e[static_cast<Eigen::Index>(j)] = -1.0;
      G.push_back(e);
      H.push_back(dist(s[i], s[j]));
    }
  }
  const std::size_t k = G.size();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(m);
  // Enumerate m-subsets of constraints.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == m) {
      Eigen::MatrixXd M(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
      Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
      for (std::size_t a = 0; a < m; ++a) {
        M.row(static_cast<Eigen::Index>(a)) = G[pick[a]].transpose();
        rhs[static_cast<Eigen::Index>(a)] = H[pick[a]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      if (lu.rank() < static_cast<Eigen::Index>(m)) return;
      const Eigen::VectorXd x = lu.solve(rhs);
      for (std::size_t q = 0; q < k; ++q)
        if (G[q].dot(x) > H[q] + 1e-11) return;
      double v = 0.0;
      for (std::size_t a = 0; a < m; ++a) v += s[a].mass * x[static_cast<Eigen::Index>(a)];
      best = std::max(best, v);
      return;
    }
    for (std::size_t q = start; q < k; ++q) {
      pick[depth] = q;
      rec(q + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

double beta1_line_search(const Atoms& atoms, double r) {
  auto objective = [&](double theta) {
    const double nx = -std::sin(theta), ny = std::cos(theta);
    std::vector<std::pair<double, double>> proj;
    double total = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const auto p = atoms.point(i);
      proj.emplace_back(p[0] * nx + p[1] * ny, atoms.weights[i]);
      total += atoms.weights[i];
    }
    std::sort(proj.begin(), proj.end());
    double acc = 0.0, median = proj.front().first;
    for (const auto& [v, w] : proj) {
      acc += w;
      if (acc >= total / 2.0) {
        median = v;
        break;
      }
    }
    double s = 0.0;
    for (const auto& [v, w] : proj) s += w * std::abs(v - median);
    return s;
  };
  const int steps = 3600;
  const double h = std::numbers::pi / steps;
  double best = std::numeric_limits<double>::infinity(), arg = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double v = objective(i * h);
    if (v < best) {
      best = v;
      arg = i * h;
    }
  }
  double a = arg - h, b = arg + h;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 60; ++it) {
    const double x1 = b - g * (b - a), x2 = a + g * (b - a);
    if (objective(x1) < objective(x2))
      b = x2;
    else
      a = x1;
  }
  best = std::min(best, objective((a + b) / 2.0));
  return best / (r * r);
}

double circle_integral(const std::function<double(double)>& f, double rho) {
  auto integrand = [&](double theta) {
    const double chord = 2.0 * rho * std::sin(theta / 2.0);
    return f(chord * chord) * rho;
  };
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  // Panels keep the peak near theta = 0 and 2 pi resolved.
  const int panels = 64;
  for (int i = 0; i < panels; ++i) {
    const double a = 2.0 * std::numbers::pi * i / panels;
    const double b = 2.0 * std::numbers::pi * (i + 1) / panels;
    total += gauss_kronrod<double, 61>::integrate(integrand, a, b, 10, 1e-14);
  }
  return total;
}

double derivative(const std::function<double(double)>& g, double t, int k, double h) {
  auto central = [&](double s) {
    switch (k) {
      case 1:
        return (g(t + s) - g(t - s)) / (2.0 * s);
      case 2:
        return (g(t + s) - 2.0 * g(t) + g(t - s)) / (s * s);
      case 3:
        return (g(t + 2 * s) - 2.0 * g(t + s) + 2.0 * g(t - s) - g(t - 2 * s)) / (2.0 * s * s * s);
      case 4:
        return (g(t + 2 * s) - 4.0 * g(t + s) + 6.0 * g(t) - 4.0 * g(t - s) + g(t - 2 * s)) /
               (s * s * s * s);
    }
    throw std::invalid_argument("derivative: k must lie in 1..4");
  };
  // Two Richardson levels; central differences have even error expansions.
  const double a = central(h), b = central(h / 2.0), c = central(h / 4.0);
  const double ab = (4.0 * b - a) / 3.0, bc = (4.0 * c - b) / 3.0;
  return (16.0 * bc - ab) / 15.0;
}

std::vector<double> cantor_points(int K) {
  std::vector<double> pts{0.0, 0.0};
  double side = 1.0;
  for (int g = 0; g < K; ++g) {
    side /= 4.0;
    std::vector<double> next;
    for (std::size_t i = 0; i < pts.size(); i += 2)
      for (double dx : {0.0, 3.0 * side})
        for (double dy : {0.0, 3.0 * side}) {
          next.push_back(pts[i] + dx);
          next.push_back(pts[i + 1] + dy);
        }
    pts = std::move(next);
  }
  for (double& v : pts) v += side / 2.0;
  return pts;
}

}  // namespace oracle
