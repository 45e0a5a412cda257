#include "wpt/two_point.hpp"

#include "wpt/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wpt {

void SampledCurve::validate() const {
  if (grid.empty() || grid.size() != values.size()) {
    throw ContractViolation("SampledCurve: grid and values must be nonempty and of equal length");
  }
  if (grid.front() != 0.0) throw ContractViolation("SampledCurve: grid must start at 0");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) {
      throw ContractViolation("SampledCurve: grid must be strictly ascending");
    }
    const double tol = 1e-12 * std::max(1.0, std::abs(values[k - 1]));
    if (values[k] < values[k - 1] - tol) {
      throw ContractViolation("SampledCurve: values must be non-decreasing");
    }
  }
}

double slope(const SampledCurve& curve, std::size_t i, std::size_t j) {
  if (j <= i || j >= curve.grid.size()) {
    throw std::out_of_range("slope: requires i < j within the grid");
  }
  return (curve.values[j] - curve.values[i]) / (curve.grid[j] - curve.grid[i]);
}

namespace {

TwoPointMass single_mass(const SampledCurve& curve, std::size_t k) {
  return {curve.grid[k], curve.grid[k], 1.0, k, k};
}

// Best feasible single grid point (largest f with grid <= nu_bar).
TwoPointMass best_single_below(const SampledCurve& curve, double nu_bar) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < curve.grid.size() && curve.grid[k] <= nu_bar; ++k) {
    if (curve.values[k] > curve.values[best]) best = k;
  }
  return single_mass(curve, best);
}

}  // namespace

TwoPointMass solve_two_point(const SampledCurve& curve, double nu_bar) {
  curve.validate();
  if (!(nu_bar >= curve.grid.front() && nu_bar <= curve.grid.back())) {
    throw std::out_of_range("solve_two_point: nu_bar outside the grid range");
  }

  const std::size_t size = curve.grid.size();
  const std::size_t n = static_cast<std::size_t>(
      std::lower_bound(curve.grid.begin(), curve.grid.end(), nu_bar) - curve.grid.begin());
  if (n == 0) return single_mass(curve, 0);

  std::size_t i_star = 0;
  std::size_t j_star = n;
  double best_row_max = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t row_arg = n;
    double row_max = -std::numeric_limits<double>::infinity();
    for (std::size_t j = n; j < size; ++j) {
      const double s = slope(curve, i, j);
      if (s > row_max) {
        row_max = s;
        row_arg = j;
      }
    }
    if (row_max < best_row_max) {
      best_row_max = row_max;
      i_star = i;
      j_star = row_arg;
    }
  }

  const double nu1 = curve.grid[i_star];
  const double nu2 = curve.grid[j_star];
  if (nu2 - nu1 < kDegenerateGap) return best_single_below(curve, nu_bar);
  const double beta = (nu2 - nu_bar) / (nu2 - nu1);
  if (beta == 0.0) return single_mass(curve, j_star);
  return {nu1, nu2, beta, i_star, j_star};
}

namespace {

std::size_t grid_index(const SampledCurve& curve, double nu) {
  const auto it = std::lower_bound(curve.grid.begin(), curve.grid.end(), nu);
  if (it == curve.grid.end() || *it != nu) {
    throw std::out_of_range("expected_value: mass point is not a grid point");
  }
  return static_cast<std::size_t>(it - curve.grid.begin());
}

}  // namespace

double expected_value(const SampledCurve& curve, const TwoPointMass& mass) {
  const double f1 = curve.values[grid_index(curve, mass.nu1)];
  const double f2 = curve.values[grid_index(curve, mass.nu2)];
  return mass.beta * f1 + (1.0 - mass.beta) * f2;
}

}  // namespace wpt
