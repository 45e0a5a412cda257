#pragma once

#include "wpt/beam_design.hpp"
#include "wpt/channel.hpp"
#include "wpt/eh_model.hpp"
#include "wpt/two_point.hpp"
#include "wpt/types.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace wpt {

struct GridSpec {
  double delta_rho = 0.1;  // W
  int n_rho = 1000;

  double power(int k) const { return static_cast<double>(k) * delta_rho; }
  void validate() const;
};

struct PhiCurve {
  std::vector<double> grid;
  std::vector<PhiPoint> points;
  bool saturated = false;  // last value reached phi(p_sat)
  int extended_points = 0; // points added beyond n_rho
  int repaired_points = 0; // points replaced by the previous beamformer scaled up

  SampledCurve sampled() const;
};

// One compute_phi_point per grid power k * delta_rho, k = 0..n_rho. If the
// last value is below the weighted saturation level, the grid is extended
// one step at a time until it is reached or 4 * n_rho points are used. A point whose value falls below its predecessor is
// replaced by the predecessor's beamformer scaled to the new power.
PhiCurve build_phi_curve(const ChannelPair& channels, const Weights& weights,
                         const RectennaParams& params, const GridSpec& grid, std::uint64_t seed,
                         const ScaOptions& options = {});

struct TwoPointPolicy {
  Eigen::VectorXcd w1;
  Eigen::VectorXcd w2;
  double beta = 1.0;  // probability of w1
  double nu1 = 0.0;
  double nu2 = 0.0;
  SaturationRegion region1;
  SaturationRegion region2;
  double eig_ratio1 = 0.0;
  double eig_ratio2 = 0.0;

  double mean_power() const { return beta * nu1 + (1.0 - beta) * nu2; }
};

// Degenerate policy transmitting w (rescaled to power nu) with probability 1.
TwoPointPolicy single_beam_policy(const Eigen::VectorXcd& w, double nu, SaturationRegion region = {},
                                  double eig_ratio = 0.0);

// Two-point search on the curve with mean-power budget p_x. Beamformers are
// the stored curve beamformers rescaled to exactly the mass powers.
TwoPointPolicy solve_policy(const PhiCurve& curve, double p_x);

struct HarvestedPowers {
  double e1 = 0.0;
  double e2 = 0.0;
};

HarvestedPowers average_powers(const TwoPointPolicy& policy, const ChannelPair& channels,
                               const RectennaParams& params);

struct RegionPoint {
  double xi1 = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
  TwoPointPolicy policy;

  double weighted(const Weights& w) const { return w.xi1 * e1 + w.xi2 * e2; }
};

RegionPoint make_region_point(const TwoPointPolicy& policy, const ChannelPair& channels,
                              const Weights& weights, const RectennaParams& params);

RegionPoint proposed_point(const PhiCurve& curve, const ChannelPair& channels, const Weights& weights,
                           const RectennaParams& params, double p_x);

// Full power along the dominant eigenvector of xi1 g1^H g1 + xi2 g2^H g2,
// evaluated through the nonlinear model.
RegionPoint baseline_linear_eh(const ChannelPair& channels, const Weights& weights,
                               const RectennaParams& params, double p_x);

// The SCA beamformer at nu = p_x used with probability one.
RegionPoint baseline_single_beam(const ChannelPair& channels, const Weights& weights,
                                 const RectennaParams& params, double p_x, std::uint64_t seed,
                                 const ScaOptions& options = {});
// Same, reading the curve point at p_x (one extra solve if p_x is off-grid).
RegionPoint baseline_single_beam(const PhiCurve& curve, const ChannelPair& channels,
                                 const Weights& weights, const RectennaParams& params, double p_x,
                                 std::uint64_t seed, const ScaOptions& options = {});

enum class Scheme { proposed, baseline_linear, baseline_single_beam };
inline constexpr Scheme kAllSchemes[] = {Scheme::proposed, Scheme::baseline_linear,
                                         Scheme::baseline_single_beam};
std::string scheme_name(Scheme scheme);
Scheme scheme_from_name(const std::string& name);

struct SweepConfig {
  RectennaParams rectenna;
  ChannelConfig channel;
  GridSpec grid;
  ScaOptions sca;
  std::vector<double> weights;   // xi1 values
  std::vector<double> p_x;       // one or more power budgets sharing the curves
  int n_realizations = 100;
  std::uint64_t seed = 1;
  int threads = 0;               // 0: hardware concurrency
  bool log_progress = true;
  std::ostream* log = nullptr;   // progress lines; std::clog when null
};

struct CellResult {
  double xi1 = 0.0;
  std::size_t weight_index = 0;
  std::uint64_t realization = 0;
  bool ok = false;
  std::string error;
  bool curve_saturated = false;
  int curve_points = 0;
  int repaired_points = 0;
  // points[budget][scheme]
  std::vector<std::vector<RegionPoint>> points;
};

struct SweepRow {
  Scheme scheme = Scheme::proposed;
  double xi1 = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
  int n_ok = 0;
};

struct SweepResult {
  std::vector<double> p_x;
  std::vector<CellResult> cells;          // ordered by (weight, realization)
  std::vector<std::vector<SweepRow>> rows;  // rows[budget], sorted by (scheme name, xi1)
};

std::uint64_t cell_seed(std::uint64_t seed, std::uint64_t realization, double xi1);

CellResult solve_cell(const SweepConfig& config, std::size_t weight_index, std::uint64_t realization);

// Runs every (weight, realization) cell on a worker pool and averages each
// scheme's harvested powers over the realizations that succeeded.
SweepResult sweep_region(const SweepConfig& config);

}  // namespace wpt
