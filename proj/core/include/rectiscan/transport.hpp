#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rectiscan {

struct TransportResult {
  double cost = 0.0;
  std::size_t iterations = 0;
  /// Dual potentials: cost(i, j) - u[i] - v[j] >= 0 at the optimum.
  std::vector<double> u;
  std::vector<double> v;
};

/// Balanced transportation problem solved by the transportation simplex
/// (u-v method). supply and demand must have equal totals (to 1e-12
/// relative); cost is row-major supply.size() x demand.size().
///
/// Rows and columns are filled in the given order by the northwest-corner
/// rule, so callers that list both sides along a common direction start
/// close to the optimum.
TransportResult solve_transport(std::span<const double> supply, std::span<const double> demand,
                                std::span<const double> cost,
                                std::size_t max_iterations = 0);

}  // namespace rectiscan
