#include "rectiscan/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rectiscan/errors.hpp"

namespace rectiscan {
namespace {

// Nodes 0..m-1 are sources, m..m+k-1 are sinks. Each basic cell is an edge
// of a spanning tree over the nodes.
struct Basic {
  std::size_t row;
  std::size_t col;
  double flow;
};

class Simplex {
 public:
  Simplex(std::span<const double> supply, std::span<const double> demand,
          std::span<const double> cost)
      : m_(supply.size()), k_(demand.size()), cost_(cost) {
    northwest(supply, demand);
    scale_ = 0.0;
    for (double c : cost_) scale_ = std::max(scale_, std::abs(c));
    tol_ = 1e-12 * std::max(scale_, 1e-300);
  }

  TransportResult run(std::size_t max_iterations) {
    TransportResult out;
    std::size_t row_cursor = 0;
    const std::size_t block = std::max<std::size_t>(8, m_ / 8);
    for (;;) {
      rebuild_tree();
      // Partial pricing: scan whole rows from the cursor until a block of
      // rows has produced a candidate; a full pass without one is optimal.
      double best = -tol_;
      std::size_t bi = 0, bj = 0;
      bool found = false;
      std::size_t scanned = 0;
      for (; scanned < m_; ++scanned) {
        const std::size_t i = (row_cursor + scanned) % m_;
        const double ui = u_[i];
        const double* crow = cost_.data() + i * k_;
        for (std::size_t j = 0; j < k_; ++j) {
          const double rc = crow[j] - ui - v_[j];
          if (rc < best) {
            best = rc;
            bi = i;
            bj = j;
            found = true;
          }
        }
        if (found && scanned + 1 >= block) {
          ++scanned;
          break;
        }
      }
      if (!found) break;
      row_cursor = (row_cursor + scanned) % m_;
      if (max_iterations && out.iterations >= max_iterations)
        throw Error("transport: no optimum after " + std::to_string(max_iterations) +
                    " pivots");
      pivot(bi, bj);
      ++out.iterations;
    }
    double total = 0.0;
    for (const Basic& b : basis_) total += b.flow * cost_[b.row * k_ + b.col];
    out.cost = total;
    out.u = u_;
    out.v = v_;
    return out;
  }

 private:
  void northwest(std::span<const double> supply, std::span<const double> demand) {
    std::vector<double> s(supply.begin(), supply.end());
    std::vector<double> d(demand.begin(), demand.end());
    std::size_t i = 0, j = 0;
    while (i < m_ && j < k_) {
      const double q = std::min(s[i], d[j]);
      basis_.push_back({i, j, q});
      s[i] -= q;
      d[j] -= q;
      // Advance exactly one index per cell so the basis stays a tree of
      // m + k - 1 cells; the last row/column absorbs rounding.
      if (i + 1 == m_) {
        ++j;
      } else if (j + 1 == k_) {
        ++i;
      } else if (s[i] <= d[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void rebuild_tree() {
    const std::size_t nodes = m_ + k_;
    adj_start_.assign(nodes + 1, 0);
    for (const Basic& b : basis_) {
      ++adj_start_[b.row + 1];
      ++adj_start_[m_ + b.col + 1];
    }
    for (std::size_t v = 0; v < nodes; ++v) adj_start_[v + 1] += adj_start_[v];
    adj_.assign(2 * basis_.size(), 0);
    std::vector<std::size_t> fill(adj_start_.begin(), adj_start_.end() - 1);
    for (std::size_t e = 0; e < basis_.size(); ++e) {
      adj_[fill[basis_[e].row]++] = e;
      adj_[fill[m_ + basis_[e].col]++] = e;
    }
    parent_edge_.assign(nodes, kNone);
    depth_.assign(nodes, 0);
    u_.assign(m_, 0.0);
    v_.assign(k_, 0.0);
    std::vector<std::size_t> queue;
    queue.reserve(nodes);
    std::vector<char> seen(nodes, 0);
    queue.push_back(0);
    seen[0] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const std::size_t a = queue[h];
      for (std::size_t p = adj_start_[a]; p < adj_start_[a + 1]; ++p) {
        const Basic& b = basis_[adj_[p]];
        const std::size_t other = a < m_ ? m_ + b.col : b.row;
        if (seen[other]) continue;
        seen[other] = 1;
        parent_edge_[other] = adj_[p];
        depth_[other] = depth_[a] + 1;
        const double c = cost_[b.row * k_ + b.col];
        if (other >= m_) {
          v_[b.col] = c - u_[b.row];
        } else {
          u_[b.row] = c - v_[b.col];
        }
        queue.push_back(other);
      }
    }
    if (queue.size() != nodes) throw Error("transport: basis is not a spanning tree");
  }

  std::size_t parent_node(std::size_t a) const {
    const Basic& b = basis_[parent_edge_[a]];
    return a < m_ ? m_ + b.col : b.row;
  }

  void pivot(std::size_t row, std::size_t col) {
    // Tree path from the source node to the sink node; the entering cell
    // closes it into a cycle whose cells alternate -, +, -, ... starting
    // from the source side.
    std::size_t a = row;
    std::size_t b = m_ + col;
    std::vector<std::size_t> from_a, from_b;
    while (depth_[a] > depth_[b]) {
      from_a.push_back(parent_edge_[a]);
      a = parent_node(a);
    }
    while (depth_[b] > depth_[a]) {
      from_b.push_back(parent_edge_[b]);
      b = parent_node(b);
    }
    while (a != b) {
      from_a.push_back(parent_edge_[a]);
      a = parent_node(a);
      from_b.push_back(parent_edge_[b]);
      b = parent_node(b);
    }
    std::vector<std::size_t> path = std::move(from_a);
    path.insert(path.end(), from_b.rbegin(), from_b.rend());
    // Entering cell (row, col) gets +theta. Walking from the row node, the
    // first path edge shares the row and loses theta, the next gains, etc.
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leave = 0;
    for (std::size_t p = 0; p < path.size(); p += 2) {
      if (basis_[path[p]].flow < theta) {
        theta = basis_[path[p]].flow;
        leave = p;
      }
    }
    for (std::size_t p = 0; p < path.size(); ++p) {
      Basic& e = basis_[path[p]];
      if (p % 2 == 0) {
        e.flow -= theta;
      } else {
        e.flow += theta;
      }
    }
    const std::size_t leaving_edge = path[leave];
    basis_[leaving_edge] = Basic{row, col, theta};
  }

  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::size_t m_, k_;
  std::span<const double> cost_;
  std::vector<Basic> basis_;
  std::vector<std::size_t> adj_start_, adj_, parent_edge_, depth_;
  std::vector<double> u_, v_;
  double scale_ = 0.0;
  double tol_ = 0.0;
};

}  // namespace

TransportResult solve_transport(std::span<const double> supply, std::span<const double> demand,
                                std::span<const double> cost, std::size_t max_iterations) {
  if (supply.empty() || demand.empty()) throw_invalid("transport: empty side");
  if (cost.size() != supply.size() * demand.size())
    throw_invalid("transport: cost matrix has the wrong size");
  double ts = 0.0, td = 0.0;
  for (double s : supply) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw_invalid("transport: supplies must be >= 0");
    ts += s;
  }
  for (double d : demand) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw_invalid("transport: demands must be >= 0");
    td += d;
  }
  if (std::abs(ts - td) > 1e-12 * std::max({ts, td, 1e-300}))
    throw_invalid("transport: supply and demand totals differ");
  for (double c : cost)
    if (!std::isfinite(c)) throw_invalid("transport: costs must be finite");
  if (max_iterations == 0) max_iterations = 50 * (supply.size() + demand.size()) + 10000;
  Simplex simplex(supply, demand, cost);
  return simplex.run(max_iterations);
}

}  // namespace rectiscan
