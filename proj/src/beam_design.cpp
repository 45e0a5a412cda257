#include "wpt/beam_design.hpp"

#include "wpt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace wpt {

double psi_of_w(const Eigen::VectorXcd& w, const ChannelPair& channels, const Weights& weights,
                const RectennaParams& params) {
  double total = 0.0;
  for (int m = 0; m < 2; ++m) {
    const double p = std::norm((channels.g(m) * w)(0, 0));
    total += weights[m] * phi(p, params);
  }
  return total;
}

conic::SdpProblem region_problem(SaturationRegion region, double nu, const ChannelPair& channels,
                                 const RectennaParams& params) {
  conic::SdpProblem problem;
  const int n = channels.n_t();
  problem.objective = Eigen::MatrixXcd::Zero(n, n);
  problem.trace_cap = nu;
  for (int m = 0; m < 2; ++m) {
    problem.sat_constraints.push_back({channels.g(m), region.saturated(m) ? -1 : +1, params.p_sat});
  }
  return problem;
}

namespace {

double psi_of_W(const Eigen::MatrixXcd& W, const ChannelPair& channels, const Weights& weights,
                const RectennaParams& params) {
  double total = 0.0;
  for (int m = 0; m < 2; ++m) {
    total += weights[m] * phi(std::max(0.0, quadratic_form(channels.g(m), W)), params);
  }
  return total;
}

// Gradient of psi restricted to the region: nodes designated saturated
// contribute a constant; the others follow the unclipped branch.
Eigen::MatrixXcd region_gradient(SaturationRegion region, const Eigen::MatrixXcd& W,
                                 const ChannelPair& channels, const Weights& weights,
                                 const RectennaParams& params, double scale) {
  const int n = channels.n_t();
  Eigen::MatrixXcd grad = Eigen::MatrixXcd::Zero(n, n);
  for (int m = 0; m < 2; ++m) {
    if (region.saturated(m) || weights[m] == 0.0) continue;
    const auto& g = channels.g(m);
    const double p = std::clamp(quadratic_form(g, W), 0.0, params.p_sat);
    const double slope = scale * weights[m] * varphi_prime(p, params);
    if (slope != 0.0) grad += slope * (g.adjoint() * g);
  }
  return grad;
}

// Lowers the rank of a PSD W while keeping Tr W and g_m W g_m^H fixed: for
// W = V V^H of rank r >= 2, a Hermitian r x r direction D orthogonal to the
// three constraint matrices exists (r^2 > 3), and V (I - D / lambda) V^H with
// lambda the largest-magnitude eigenvalue of D drops at least one rank.
Eigen::MatrixXcd reduce_to_rank_one(Eigen::MatrixXcd W, const ChannelPair& channels) {
  const Eigen::Index n = W.rows();
  std::array<Eigen::MatrixXcd, 3> constraint{channels.g1.adjoint() * channels.g1,
                                             channels.g2.adjoint() * channels.g2,
                                             Eigen::MatrixXcd::Identity(n, n)};
  for (Eigen::Index pass = 0; pass < n; ++pass) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (W + W.adjoint()));
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double top = ev[n - 1];
    if (!(top > 0.0)) return W;
    Eigen::Index r = 0;
    for (Eigen::Index k = 0; k < n; ++k) r += ev[k] > 1e-12 * top ? 1 : 0;
    if (r <= 1) return W;

    Eigen::MatrixXcd V(n, r);
    for (Eigen::Index k = 0; k < r; ++k) {
      V.col(k) = std::sqrt(ev[n - 1 - k]) * es.eigenvectors().col(n - 1 - k);
    }
    // Real coordinates of Hermitian r x r matrices: diagonal, Re and Im of the upper triangle.
    std::vector<Eigen::MatrixXcd> basis;
    for (Eigen::Index a = 0; a < r; ++a) {
      Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(r, r);
      e(a, a) = 1.0;
      basis.push_back(e);
      for (Eigen::Index b = a + 1; b < r; ++b) {
        Eigen::MatrixXcd re = Eigen::MatrixXcd::Zero(r, r);
        re(a, b) = re(b, a) = 1.0;
        basis.push_back(re);
        Eigen::MatrixXcd im = Eigen::MatrixXcd::Zero(r, r);
        im(a, b) = std::complex<double>(0.0, 1.0);
        im(b, a) = std::complex<double>(0.0, -1.0);
        basis.push_back(im);
      }
    }
    Eigen::MatrixXd K(3, static_cast<Eigen::Index>(basis.size()));
    for (int k = 0; k < 3; ++k) {
      const Eigen::MatrixXcd B = V.adjoint() * constraint[static_cast<std::size_t>(k)] * V;
      const double norm = std::max(B.norm(), 1e-300);
      for (std::size_t p = 0; p < basis.size(); ++p) {
        K(k, static_cast<Eigen::Index>(p)) = (B * basis[p]).trace().real() / norm;
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeFullV);
    const Eigen::VectorXd coeffs = svd.matrixV().col(svd.matrixV().cols() - 1);
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(r, r);
    for (std::size_t p = 0; p < basis.size(); ++p) D += coeffs[static_cast<Eigen::Index>(p)] * basis[p];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ds(D, Eigen::EigenvaluesOnly);
    const double lo = ds.eigenvalues()[0];
    const double hi = ds.eigenvalues()[r - 1];
    const double lambda = std::abs(hi) >= std::abs(lo) ? hi : lo;
    if (lambda == 0.0) return W;
    W = V * (Eigen::MatrixXcd::Identity(r, r) - D / lambda) * V.adjoint();
  }
  return W;
}

// Random rank-one start at full power, pulled toward the feasibility witness
// until every region constraint holds, then brought back to rank one.
bool initial_point(const conic::SdpProblem& problem, const Eigen::MatrixXcd& witness,
                   const ChannelPair& channels, std::uint64_t seed, Eigen::MatrixXcd& out) {
  KeyedStream stream(seed);
  const Eigen::VectorXcd v = stream.complex_normal_vector(problem.dim());
  const Eigen::MatrixXcd random = problem.trace_cap * (v * v.adjoint()) / v.squaredNorm();

  double theta = 0.0;
  for (const auto& sc : problem.sat_constraints) {
    const double f_rand = sc.sign * (quadratic_form(sc.g, random) - sc.threshold);
    const double f_wit = sc.sign * (quadratic_form(sc.g, witness) - sc.threshold);
    if (f_rand <= 0.0) continue;
    if (f_wit >= 0.0) return false;
    theta = std::max(theta, f_rand / (f_rand - f_wit));
  }
  if (theta > 0.0) theta = std::min(1.0, theta + 0.01 * (1.0 - theta));
  out = (1.0 - theta) * random + theta * witness;
  if (theta > 0.0) out = reduce_to_rank_one(std::move(out), channels);
  return true;
}

}  // namespace

RegionSolve sca_maximize_region(SaturationRegion region, double nu, const ChannelPair& channels,
                                const Weights& weights, const RectennaParams& params,
                                std::uint64_t seed, const ScaOptions& options) {
  channels.validate();
  weights.validate();
  if (!(nu >= 0.0)) throw std::domain_error("sca_maximize_region: nu must be nonnegative");

  const int n = channels.n_t();
  RegionSolve out;
  if (nu == 0.0) {
    if (region.saturated(0) || region.saturated(1)) return out;
    out.status = RegionStatus::solved;
    out.W = Eigen::MatrixXcd::Zero(n, n);
    out.h_trace = {0.0};
    if (options.on_sca_run) options.on_sca_run(region, out.h_trace);
    return out;
  }

  conic::SdpProblem problem = region_problem(region, nu, channels, params);
  const conic::FeasibilityReport feas = conic::feasibility_check(problem);
  if (feas.status == conic::FeasibilityStatus::infeasible) return out;
  if (feas.status == conic::FeasibilityStatus::numerical_failure) {
    std::clog << "warning: feasibility check failed for region " << region.label() << " at nu=" << nu
              << "\n";
    out.status = RegionStatus::numerical_failure;
    return out;
  }

  const double scale = options.objective_scale;
  for (int attempt = 0; attempt < 2; ++attempt) {
    out.attempts = attempt + 1;
    Eigen::MatrixXcd W;
    if (!initial_point(problem, feas.witness, channels, mix_seed(seed, static_cast<std::uint64_t>(attempt)), W)) {
      out.status = RegionStatus::infeasible;
      return out;
    }
    double h = scale * psi_of_W(W, channels, weights, params);
    std::vector<double> trace{h};
    bool failed = false;
    int iterations = 0;
    for (int k = 0; k < options.max_iterations; ++k) {
      problem.objective = region_gradient(region, W, channels, weights, params, scale);
      if (problem.objective.squaredNorm() == 0.0) break;
      conic::SolveOptions so;
      so.assume_feasible = true;
      const conic::SdpSolution sol = conic::solve_linear_sdp(problem, so);
      if (options.on_sdp_solve) options.on_sdp_solve(problem, sol);
      ++iterations;
      if (sol.status != conic::SdpStatus::optimal) {
        failed = true;
        break;
      }
      const double h_next = scale * psi_of_W(sol.W, channels, weights, params);
      if (h_next < h) break;
      W = sol.W;
      trace.push_back(h_next);
      const double change = h_next - h;
      h = h_next;
      if (change <= options.epsilon) break;
    }
    out.iterations += iterations;
    if (failed) {
      std::clog << "warning: SCA subproblem failed in region " << region.label() << " at nu=" << nu
                << " (attempt " << attempt + 1 << ")\n";
      out.status = RegionStatus::numerical_failure;
      continue;
    }
    out.status = RegionStatus::solved;
    out.W = std::move(W);
    out.value = h / scale;
    out.h_trace = std::move(trace);
    if (options.on_sca_run) options.on_sca_run(region, out.h_trace);
    return out;
  }
  return out;
}

DominantBeam dominant_beam(const Eigen::MatrixXcd& W) {
  const Eigen::Index n = W.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (W + W.adjoint()));
  DominantBeam out;
  out.u = es.eigenvectors().col(n - 1);
  const double l1 = es.eigenvalues()[n - 1];
  const double l2 = n > 1 ? es.eigenvalues()[n - 2] : 0.0;
  out.eig_ratio = l1 > 0.0 ? std::max(l2, 0.0) / l1 : 0.0;

  const double largest = out.u.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double mag = std::abs(out.u[k]);
    if (mag > 1e-12 * largest) {
      out.u *= std::conj(out.u[k]) / mag;
      out.u[k] = mag;
      break;
    }
  }
  out.u /= out.u.norm();
  return out;
}

PhiPoint compute_phi_point(double nu, const ChannelPair& channels, const Weights& weights,
                           const RectennaParams& params, std::uint64_t seed, const ScaOptions& options) {
  PhiPoint point;
  point.nu = nu;
  const RegionSolve* best = nullptr;
  std::array<RegionSolve, 4> solves;
  for (const auto& region : kAllRegions) {
    RegionSolve& rs = solves[static_cast<std::size_t>(region.index())];
    rs = sca_maximize_region(region, nu, channels, weights, params,
                             mix_seed(seed, static_cast<std::uint64_t>(region.index())), options);
    point.sca_iterations += rs.iterations;
    if (rs.status != RegionStatus::solved) continue;
    if (best == nullptr || rs.value > best->value) {
      best = &rs;
      point.region = region;
    }
  }
  if (best == nullptr) {
    throw std::runtime_error("compute_phi_point: every saturation region was skipped");
  }

  const DominantBeam beam = dominant_beam(best->W);
  point.eig_ratio = beam.eig_ratio;
  point.relaxed_value = best->value;
  point.w = std::sqrt(std::max(0.0, best->W.trace().real())) * beam.u;
  point.value = psi_of_w(point.w, channels, weights, params);
  if (options.on_phi_point) options.on_phi_point(point);
  return point;
}

}  // namespace wpt
