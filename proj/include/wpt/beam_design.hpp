#pragma once

#include "wpt/conic.hpp"
#include "wpt/eh_model.hpp"
#include "wpt/types.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wpt {

// Saturation region W_{i,j}: node 1 saturated iff i = 1, node 2 iff j = 1.
struct SaturationRegion {
  int i = 0;
  int j = 0;

  bool saturated(int m) const { return (m == 0 ? i : j) == 1; }
  int index() const { return 2 * i + j; }
  std::string label() const { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }
};

inline constexpr std::array<SaturationRegion, 4> kAllRegions{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};

struct PhiPoint;

struct ScaOptions {
  double epsilon = 1e-3;        // stop when |h(k) - h(k-1)| <= epsilon (scaled units)
  int max_iterations = 100;
  double objective_scale = 1e6; // h = scale * psi(W), i.e. microwatts
  // Observers; must be safe to call concurrently when solves run in parallel.
  std::function<void(const conic::SdpProblem&, const conic::SdpSolution&)> on_sdp_solve;
  std::function<void(SaturationRegion, std::span<const double> h_trace)> on_sca_run;
  std::function<void(const PhiPoint&)> on_phi_point;
};

enum class RegionStatus { solved, infeasible, numerical_failure };

struct RegionSolve {
  RegionStatus status = RegionStatus::infeasible;
  Eigen::MatrixXcd W;
  double value = 0.0;            // psi(W) in watts
  std::vector<double> h_trace;   // scaled psi of every accepted iterate, starting at W(0)
  int iterations = 0;
  int attempts = 0;
};

struct PhiPoint {
  double nu = 0.0;
  double value = 0.0;            // Psi(w), watts
  double relaxed_value = 0.0;    // psi(W*), watts
  Eigen::VectorXcd w;
  SaturationRegion region;
  double eig_ratio = 0.0;        // lambda_2 / lambda_1 of W*
  int sca_iterations = 0;        // summed over all regions
};

// Psi(w) = sum_m xi_m phi(|g_m w|^2).
double psi_of_w(const Eigen::VectorXcd& w, const ChannelPair& channels, const Weights& weights,
                const RectennaParams& params);

// Builds the SDP feasible set of region W_{i,j} at trace cap nu (objective zero).
conic::SdpProblem region_problem(SaturationRegion region, double nu, const ChannelPair& channels,
                                 const RectennaParams& params);

// Successive convex approximation of max psi(W) over W_{i,j} with Tr W <= nu.
// Each step maximizes the tangent of psi at the current iterate; only
// iterates that do not decrease psi are accepted.
RegionSolve sca_maximize_region(SaturationRegion region, double nu, const ChannelPair& channels,
                                const Weights& weights, const RectennaParams& params,
                                std::uint64_t seed, const ScaOptions& options = {});

// Best of the four region solves, followed by rank-one extraction
// w* = sqrt(Tr W*) u with u the dominant eigenvector of W* (first nonzero
// entry made real positive).
PhiPoint compute_phi_point(double nu, const ChannelPair& channels, const Weights& weights,
                           const RectennaParams& params, std::uint64_t seed,
                           const ScaOptions& options = {});

struct DominantBeam {
  Eigen::VectorXcd u;  // unit norm, first nonzero entry real positive
  double eig_ratio = 0.0;
};

// Dominant eigenvector of a Hermitian PSD matrix with deterministic phase.
DominantBeam dominant_beam(const Eigen::MatrixXcd& W);

}  // namespace wpt
