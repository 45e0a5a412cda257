#pragma once

#include <cstddef>
#include <vector>

namespace wpt {

// A non-decreasing function sampled on an ascending power grid starting at 0.
struct SampledCurve {
  std::vector<double> grid;
  std::vector<double> values;

  // Throws ContractViolation unless the grid is strictly ascending from 0 and
  // the values are non-decreasing within 1e-12 (relative to max(1, |f|)).
  void validate() const;
};

// p(nu) = beta * delta(nu - nu1) + (1 - beta) * delta(nu - nu2).
struct TwoPointMass {
  double nu1 = 0.0;
  double nu2 = 0.0;
  double beta = 1.0;
  std::size_t index1 = 0;
  std::size_t index2 = 0;

  bool degenerate() const { return index1 == index2; }
};

inline constexpr double kDegenerateGap = 1e-12;

// Chord slope (f(grid[j]) - f(grid[i])) / (grid[j] - grid[i]). Throws
// std::out_of_range if j <= i or either index is off the grid.
double slope(const SampledCurve& curve, std::size_t i, std::size_t j);

// Maximizes E{f(nu)} subject to E{nu} <= nu_bar over distributions on the
// grid. Builds the chord-slope matrix between points left of nu_bar and
// points at or right of the first grid point >= nu_bar, picks the row
// minimizing its maximum and that row's maximizing column. Ties go to the
// smallest index. A pair collapsing onto nu_bar (beta = 0, or gap below
// kDegenerateGap) is reported as a single mass with beta = 1.
TwoPointMass solve_two_point(const SampledCurve& curve, double nu_bar);

// beta * f(nu1) + (1 - beta) * f(nu2). The mass points must be grid points.
double expected_value(const SampledCurve& curve, const TwoPointMass& mass);

}  // namespace wpt
