#include "wpt/region.hpp"

#include "wpt/rng.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace wpt {

void GridSpec::validate() const {
  if (!(delta_rho > 0.0) || !std::isfinite(delta_rho))
    throw ContractViolation("grid step must be positive and finite");
  if (n_rho < 1) throw ContractViolation("grid needs at least one step");
}

SampledCurve PhiCurve::sampled() const {
  SampledCurve c;
  c.grid = grid;
  c.values.reserve(points.size());
  for (const auto& p : points) c.values.push_back(p.value);
  return c;
}

namespace {

Eigen::VectorXcd scaled_to_power(const Eigen::VectorXcd& w, double nu) {
  const double n = w.norm();
  if (n == 0.0 || nu == 0.0) return Eigen::VectorXcd::Zero(w.size());
  return w * (std::sqrt(nu) / n);
}

}  // namespace

PhiCurve build_phi_curve(const ChannelPair& channels, const Weights& weights,
                         const RectennaParams& params, const GridSpec& grid, std::uint64_t seed,
                         const ScaOptions& options) {
  grid.validate();
  weights.validate();
  params.validate();
  channels.validate();

  PhiCurve curve;
  const double target = phi_saturation(params);
  auto add_point = [&](int k) {
    const double nu = grid.power(k);
    PhiPoint p = compute_phi_point(nu, channels, weights, params, mix_seed(seed, k), options);
    if (!curve.points.empty()) {
      const PhiPoint& prev = curve.points.back();
      if (p.value < prev.value) {
        // Scaling the previous beamformer up never lowers any received power.
        PhiPoint r = prev;
        r.nu = nu;
        r.w = scaled_to_power(prev.w, nu);
        r.value = psi_of_w(r.w, channels, weights, params);
        r.sca_iterations = p.sca_iterations;
        if (r.value >= p.value) {
          p = std::move(r);
          ++curve.repaired_points;
        }
      }
    }
    curve.grid.push_back(nu);
    curve.points.push_back(std::move(p));
  };

  for (int k = 0; k <= grid.n_rho; ++k) add_point(k);

  // The curve's last value should equal the weighted saturation level.
  const double level = (weights.xi1 + weights.xi2) * target;
  auto at_level = [&] { return curve.points.back().value >= level * (1.0 - 1e-9); };
  const int cap = 4 * grid.n_rho;
  for (int k = grid.n_rho + 1; k <= cap && !at_level(); ++k) {
    add_point(k);
    ++curve.extended_points;
  }
  curve.saturated = at_level();
  return curve;
}

TwoPointPolicy single_beam_policy(const Eigen::VectorXcd& w, double nu, SaturationRegion region,
                                  double eig_ratio) {
  TwoPointPolicy p;
  p.w1 = scaled_to_power(w, nu);
  p.w2 = p.w1;
  p.beta = 1.0;
  p.nu1 = p.nu2 = nu;
  p.region1 = p.region2 = region;
  p.eig_ratio1 = p.eig_ratio2 = eig_ratio;
  return p;
}

TwoPointPolicy solve_policy(const PhiCurve& curve, double p_x) {
  if (!(p_x >= 0.0)) throw ContractViolation("power budget must be non-negative");
  if (curve.points.empty()) throw ContractViolation("empty curve");
  if (p_x > curve.grid.back() * (1.0 + 1e-12))
    throw std::out_of_range("power budget beyond the last grid power");
  const SampledCurve sc = curve.sampled();

  // Snap a budget that sits on a grid point up to rounding.
  double nu_bar = p_x;
  const auto it = std::lower_bound(sc.grid.begin(), sc.grid.end(), p_x * (1.0 - 1e-12));
  if (it != sc.grid.end() && std::abs(*it - p_x) <= 1e-12 * std::max(1.0, p_x)) nu_bar = *it;

  const TwoPointMass mass = solve_two_point(sc, nu_bar);
  const PhiPoint& a = curve.points[mass.index1];
  const PhiPoint& b = curve.points[mass.index2];
  if (mass.degenerate()) return single_beam_policy(a.w, mass.nu1, a.region, a.eig_ratio);

  TwoPointPolicy p;
  p.w1 = scaled_to_power(a.w, mass.nu1);
  p.w2 = scaled_to_power(b.w, mass.nu2);
  p.beta = mass.beta;
  p.nu1 = mass.nu1;
  p.nu2 = mass.nu2;
  p.region1 = a.region;
  p.region2 = b.region;
  p.eig_ratio1 = a.eig_ratio;
  p.eig_ratio2 = b.eig_ratio;
  return p;
}

HarvestedPowers average_powers(const TwoPointPolicy& policy, const ChannelPair& channels,
                               const RectennaParams& params) {
  HarvestedPowers h;
  double* out[2] = {&h.e1, &h.e2};
  for (int m = 0; m < 2; ++m) {
    const auto& g = channels.g(m);
    const double q1 = std::norm(g.dot(policy.w1.conjugate()));
    double e = policy.beta * phi(q1, params);
    if (policy.beta < 1.0) {
      const double q2 = std::norm(g.dot(policy.w2.conjugate()));
      e += (1.0 - policy.beta) * phi(q2, params);
    }
    *out[m] = e;
  }
  return h;
}

RegionPoint make_region_point(const TwoPointPolicy& policy, const ChannelPair& channels,
                              const Weights& weights, const RectennaParams& params) {
  RegionPoint r;
  r.xi1 = weights.xi1;
  const HarvestedPowers h = average_powers(policy, channels, params);
  r.e1 = h.e1;
  r.e2 = h.e2;
  r.policy = policy;
  return r;
}

RegionPoint proposed_point(const PhiCurve& curve, const ChannelPair& channels, const Weights& weights,
                           const RectennaParams& params, double p_x) {
  return make_region_point(solve_policy(curve, p_x), channels, weights, params);
}

RegionPoint baseline_linear_eh(const ChannelPair& channels, const Weights& weights,
                               const RectennaParams& params, double p_x) {
  channels.validate();
  weights.validate();
  const Eigen::MatrixXcd M = weights.xi1 * channels.g1.adjoint() * channels.g1 +
                             weights.xi2 * channels.g2.adjoint() * channels.g2;
  const DominantBeam d = dominant_beam(M);
  return make_region_point(single_beam_policy(d.u, p_x, {}, d.eig_ratio), channels, weights, params);
}

RegionPoint baseline_single_beam(const ChannelPair& channels, const Weights& weights,
                                 const RectennaParams& params, double p_x, std::uint64_t seed,
                                 const ScaOptions& options) {
  const PhiPoint p = compute_phi_point(p_x, channels, weights, params, seed, options);
  return make_region_point(single_beam_policy(p.w, p_x, p.region, p.eig_ratio), channels, weights,
                           params);
}

RegionPoint baseline_single_beam(const PhiCurve& curve, const ChannelPair& channels,
                                 const Weights& weights, const RectennaParams& params, double p_x,
                                 std::uint64_t seed, const ScaOptions& options) {
  const auto it = std::lower_bound(curve.grid.begin(), curve.grid.end(), p_x * (1.0 - 1e-12));
  if (it != curve.grid.end() && std::abs(*it - p_x) <= 1e-12 * std::max(1.0, p_x)) {
    const PhiPoint& p = curve.points[static_cast<std::size_t>(it - curve.grid.begin())];
    return make_region_point(single_beam_policy(p.w, p_x, p.region, p.eig_ratio), channels,
                             weights, params);
  }
  return baseline_single_beam(channels, weights, params, p_x, seed, options);
}

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::proposed: return "proposed";
    case Scheme::baseline_linear: return "baseline_linear";
    case Scheme::baseline_single_beam: return "baseline_single_beam";
  }
  throw std::invalid_argument("unknown scheme");
}

Scheme scheme_from_name(const std::string& name) {
  for (Scheme s : kAllSchemes)
    if (scheme_name(s) == name) return s;
  throw std::invalid_argument("unknown scheme: " + name);
}

std::uint64_t cell_seed(std::uint64_t seed, std::uint64_t realization, double xi1) {
  return mix_seed(seed, realization, std::bit_cast<std::uint64_t>(xi1), 0x5ca);
}

CellResult solve_cell(const SweepConfig& config, std::size_t weight_index, std::uint64_t realization) {
  CellResult cell;
  cell.weight_index = weight_index;
  cell.xi1 = config.weights.at(weight_index);
  cell.realization = realization;
  try {
    const Weights w = Weights::from_xi1(cell.xi1);
    const ChannelPair ch = draw_channel_pair(config.channel, realization);
    const std::uint64_t s = cell_seed(config.seed, realization, cell.xi1);
    const PhiCurve curve = build_phi_curve(ch, w, config.rectenna, config.grid, s, config.sca);
    cell.curve_saturated = curve.saturated;
    cell.curve_points = static_cast<int>(curve.points.size());
    cell.repaired_points = curve.repaired_points;
    for (double px : config.p_x) {
      std::vector<RegionPoint> pts;
      pts.push_back(proposed_point(curve, ch, w, config.rectenna, px));
      pts.push_back(baseline_linear_eh(ch, w, config.rectenna, px));
      pts.push_back(baseline_single_beam(curve, ch, w, config.rectenna, px, mix_seed(s, 0xb2), config.sca));
      cell.points.push_back(std::move(pts));
    }
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.error = e.what();
    cell.points.clear();
  }
  return cell;
}

SweepResult sweep_region(const SweepConfig& config) {
  config.rectenna.validate();
  config.channel.validate();
  config.grid.validate();
  if (config.p_x.empty()) throw ContractViolation("no power budget");
  if (config.n_realizations < 1) throw ContractViolation("need at least one realization");
  for (double xi1 : config.weights) Weights::from_xi1(xi1).validate();
  for (double px : config.p_x)
    if (!(px > 0.0) || !std::isfinite(px)) throw ContractViolation("power budget must be positive");

  const std::size_t n_w = config.weights.size();
  const std::size_t n_r = static_cast<std::size_t>(config.n_realizations);
  const std::size_t total = n_w * n_r;

  SweepResult result;
  result.p_x = config.p_x;
  result.cells.resize(total);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      const std::size_t wi = idx / n_r;
      const std::uint64_t r = idx % n_r;
      CellResult cell = solve_cell(config, wi, r);
      const std::size_t count = ++done;
      if (config.log_progress) {
        std::ostringstream line;
        line << "[" << count << "/" << total << "] xi1=" << cell.xi1 << " realization=" << r;
        if (!cell.ok) {
          line << " FAILED: " << cell.error;
        } else {
          line << " curve_points=" << cell.curve_points
               << (cell.curve_saturated ? "" : " (not saturated)");
          for (std::size_t b = 0; b < config.p_x.size(); ++b) {
            const RegionPoint& p = cell.points[b][0];
            line << " | px=" << config.p_x[b] << " regions " << p.policy.region1.label() << "/"
                 << p.policy.region2.label() << " beta=" << p.policy.beta;
          }
        }
        std::lock_guard lock(log_mutex);
        (config.log ? *config.log : std::clog) << line.str() << '\n';
      }
      result.cells[idx] = std::move(cell);
    }
  };

  unsigned threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Reduction in a fixed order so results do not depend on scheduling.
  for (std::size_t b = 0; b < config.p_x.size(); ++b) {
    std::vector<SweepRow> rows;
    for (std::size_t s = 0; s < std::size(kAllSchemes); ++s) {
      for (std::size_t wi = 0; wi < n_w; ++wi) {
        SweepRow row;
        row.scheme = kAllSchemes[s];
        row.xi1 = config.weights[wi];
        for (std::size_t r = 0; r < n_r; ++r) {
          const CellResult& c = result.cells[wi * n_r + r];
          if (!c.ok) continue;
          row.e1 += c.points[b][s].e1;
          row.e2 += c.points[b][s].e2;
          ++row.n_ok;
        }
        if (row.n_ok > 0) {
          row.e1 /= row.n_ok;
          row.e2 /= row.n_ok;
        }
        rows.push_back(row);
      }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& x, const SweepRow& y) {
      const std::string a = scheme_name(x.scheme), c = scheme_name(y.scheme);
      if (a != c) return a < c;
      return x.xi1 < y.xi1;
    });
    result.rows.push_back(std::move(rows));
  }
  return result;
}

}  // namespace wpt
