#include "wpt/conic.hpp"

#include "wpt/eh_model.hpp"
#include "wpt/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wpt::conic {

Eigen::MatrixXd lift(const Eigen::MatrixXcd& H) {
  const Eigen::Index n = H.rows();
  Eigen::MatrixXd X(2 * n, 2 * n);
  X.topLeftCorner(n, n) = H.real();
  X.topRightCorner(n, n) = -H.imag();
  X.bottomLeftCorner(n, n) = H.imag();
  X.bottomRightCorner(n, n) = H.real();
  return X;
}

Eigen::MatrixXcd unlift(const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows() / 2;
  const Eigen::MatrixXd re = 0.5 * (X.topLeftCorner(n, n) + X.bottomRightCorner(n, n));
  const Eigen::MatrixXd im = 0.5 * (X.bottomLeftCorner(n, n) - X.topRightCorner(n, n));
  Eigen::MatrixXcd H(n, n);
  H.real() = 0.5 * (re + re.transpose());
  H.imag() = 0.5 * (im - im.transpose());
  return H;
}

void SdpProblem::validate() const {
  const int n = dim();
  if (n < 1 || objective.cols() != n) throw ContractViolation("SdpProblem: objective must be square");
  const double scale = std::max(1.0, objective.cwiseAbs().maxCoeff());
  if ((objective - objective.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw ContractViolation("SdpProblem: objective must be Hermitian");
  }
  if (!(trace_cap >= 0.0)) throw ContractViolation("SdpProblem: trace cap must be nonnegative");
  if (sat_constraints.size() > 2) throw ContractViolation("SdpProblem: at most two saturation constraints");
  for (const auto& sc : sat_constraints) {
    if (sc.g.size() != n) throw ContractViolation("SdpProblem: constraint vector has wrong length");
    if (sc.sign != 1 && sc.sign != -1) throw ContractViolation("SdpProblem: constraint sign must be +1 or -1");
    if (!(sc.threshold > 0.0)) throw ContractViolation("SdpProblem: threshold must be positive");
    if (sc.g.squaredNorm() == 0.0) throw ContractViolation("SdpProblem: constraint vector must be nonzero");
  }
}

// ---------------------------------------------------------------------------
// Interior-point core.

namespace {

double frob(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) { return A.cwiseProduct(B).sum(); }

// Largest alpha with M + alpha * dM PSD (M positive definite).
double max_step_psd(const Eigen::MatrixXd& M, const Eigen::MatrixXd& dM) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(dM, M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return 0.0;
  const double lmin = es.eigenvalues().minCoeff();
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

double max_step_orthant(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double alpha = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  }
  return alpha;
}

struct Direction {
  Eigen::MatrixXd dX, dZ;
  Eigen::VectorXd dx, dy, dz;
};

}  // namespace

IpmResult solve_standard_form(const StandardFormSdp& p, const IpmSettings& settings) {
  const Eigen::Index n = p.C.rows();
  const Eigen::Index m = p.b.size();
  const Eigen::Index l = p.c.size();
  const double dims = static_cast<double>(n + l);

  IpmResult r;
  r.X = Eigen::MatrixXd::Identity(n, n);
  r.Z = Eigen::MatrixXd::Identity(n, n);
  r.x = Eigen::VectorXd::Ones(l);
  r.z = Eigen::VectorXd::Ones(l);
  r.y = Eigen::VectorXd::Zero(m);

  double norm_b = p.b.norm();
  double norm_c = std::sqrt(p.C.squaredNorm() + p.c.squaredNorm());

  auto apply_A = [&](const Eigen::MatrixXd& X, const Eigen::VectorXd& x) {
    Eigen::VectorXd out(m);
    for (Eigen::Index k = 0; k < m; ++k) out[k] = frob(p.A[k], X);
    if (l > 0) out += p.a * x;
    return out;
  };
  auto apply_At = [&](const Eigen::VectorXd& y) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < m; ++k) out += y[k] * p.A[k];
    return out;
  };

  for (int iter = 0; iter <= settings.max_iterations; ++iter) {
    r.iterations = iter;
    const Eigen::VectorXd rp = p.b - apply_A(r.X, r.x);
    const Eigen::MatrixXd Rd = p.C - apply_At(r.y) - r.Z;
    const Eigen::VectorXd rd = (l > 0) ? Eigen::VectorXd(p.c - p.a.transpose() * r.y - r.z) : Eigen::VectorXd();
    r.primal_objective = frob(p.C, r.X) + (l > 0 ? p.c.dot(r.x) : 0.0);
    r.dual_objective = p.b.dot(r.y);
    const double gap = frob(r.X, r.Z) + (l > 0 ? r.x.dot(r.z) : 0.0);
    const double mu = gap / dims;

    const double rel_p = rp.norm() / (1.0 + norm_b);
    const double rel_d = std::sqrt(Rd.squaredNorm() + (l > 0 ? rd.squaredNorm() : 0.0)) / (1.0 + norm_c);
    const double rel_gap =
        std::max(std::abs(r.primal_objective - r.dual_objective), gap) /
        (1.0 + std::abs(r.primal_objective) + std::abs(r.dual_objective));
    r.kkt_residual = std::max({rel_p, rel_d, rel_gap});
    if (r.kkt_residual <= settings.tolerance) {
      r.converged = true;
      return r;
    }
    if (iter == settings.max_iterations) break;

    Eigen::LLT<Eigen::MatrixXd> z_chol(r.Z);
    if (z_chol.info() != Eigen::Success) break;
    const Eigen::MatrixXd Zinv = z_chol.solve(Eigen::MatrixXd::Identity(n, n));
    const Eigen::VectorXd x_over_z = (l > 0) ? Eigen::VectorXd(r.x.cwiseQuotient(r.z)) : Eigen::VectorXd();

    // Schur complement M_kl = Tr(A_k X A_l Z^-1) + sum_i a_ki a_li x_i / z_i.
    std::vector<Eigen::MatrixXd> XAZ(m);
    for (Eigen::Index k = 0; k < m; ++k) XAZ[k] = r.X * p.A[k] * Zinv;
    Eigen::MatrixXd M(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
      for (Eigen::Index j = 0; j < m; ++j) {
        M(k, j) = p.A[k].cwiseProduct(XAZ[j].transpose()).sum();
      }
    }
    if (l > 0) M += p.a * x_over_z.asDiagonal() * p.a.transpose();
    M = 0.5 * (M + M.transpose());
    Eigen::LDLT<Eigen::MatrixXd> schur(M);
    if (schur.info() != Eigen::Success) break;

    const Eigen::MatrixXd XRdZ = r.X * Rd * Zinv;

    auto direction = [&](double target, const Eigen::MatrixXd* E, const Eigen::VectorXd* e) {
      Direction d;
      Eigen::MatrixXd T = target * Zinv - r.X;
      if (E) T -= (*E) * Zinv;
      Eigen::VectorXd t;
      if (l > 0) {
        Eigen::VectorXd num = Eigen::VectorXd::Constant(l, target) - r.x.cwiseProduct(r.z);
        if (e) num -= *e;
        t = num.cwiseQuotient(r.z);
      }
      Eigen::VectorXd rhs = rp;
      const Eigen::MatrixXd base = T - XRdZ;
      for (Eigen::Index k = 0; k < m; ++k) rhs[k] -= frob(p.A[k], base);
      if (l > 0) rhs -= p.a * (t - x_over_z.cwiseProduct(rd));
      d.dy = schur.solve(rhs);
      d.dZ = Rd - apply_At(d.dy);
      const Eigen::MatrixXd full = T - r.X * d.dZ * Zinv;
      d.dX = 0.5 * (full + full.transpose());
      if (l > 0) {
        d.dz = rd - p.a.transpose() * d.dy;
        d.dx = t - x_over_z.cwiseProduct(d.dz);
      }
      return d;
    };
    auto step_lengths = [&](const Direction& d) {
      double ap = max_step_psd(r.X, d.dX);
      double ad = max_step_psd(r.Z, d.dZ);
      if (l > 0) {
        ap = std::min(ap, max_step_orthant(r.x, d.dx));
        ad = std::min(ad, max_step_orthant(r.z, d.dz));
      }
      return std::pair<double, double>{ap, ad};
    };

    // Predictor.
    const Direction aff = direction(0.0, nullptr, nullptr);
    auto [ap_aff, ad_aff] = step_lengths(aff);
    ap_aff = std::min(1.0, ap_aff);
    ad_aff = std::min(1.0, ad_aff);
    double gap_aff = frob(r.X + ap_aff * aff.dX, r.Z + ad_aff * aff.dZ);
    if (l > 0) gap_aff += (r.x + ap_aff * aff.dx).dot(r.z + ad_aff * aff.dz);
    const double sigma = std::clamp(std::pow(std::max(gap_aff, 0.0) / gap, 3.0), 0.0, 1.0);

    // Corrector.
    const Eigen::MatrixXd E = aff.dX * aff.dZ;
    Eigen::VectorXd e;
    if (l > 0) e = aff.dx.cwiseProduct(aff.dz);
    const Direction d = direction(sigma * mu, &E, l > 0 ? &e : nullptr);
    auto [ap, ad] = step_lengths(d);
    ap = std::min(1.0, settings.step_fraction * ap);
    ad = std::min(1.0, settings.step_fraction * ad);
    if (!(ap > 1e-14 && ad > 1e-14)) break;

    r.X += ap * d.dX;
    r.X = 0.5 * (r.X + r.X.transpose());
    r.Z += ad * d.dZ;
    r.Z = 0.5 * (r.Z + r.Z.transpose());
    r.y += ad * d.dy;
    if (l > 0) {
      r.x += ap * d.dx;
      r.z += ad * d.dz;
    }
  }
  r.converged = false;
  return r;
}

// ---------------------------------------------------------------------------
// Problem-level wrappers.

namespace {

struct Normalized {
  Eigen::MatrixXd G;  // lift(g^H g / |g|^2) / 2
  int sign;
  double t;           // threshold / (nu |g|^2)
};

Normalized normalize(const SaturationConstraint& sc, double nu) {
  const double gg = sc.g.squaredNorm();
  const Eigen::RowVectorXcd unit = sc.g / std::sqrt(gg);
  return {0.5 * lift(unit.adjoint() * unit), sc.sign, sc.threshold / (nu * gg)};
}

// Upper bounds with t >= 1 are implied by Tr W <= nu.
std::vector<Normalized> active_constraints(const SdpProblem& problem) {
  std::vector<Normalized> out;
  for (const auto& sc : problem.sat_constraints) {
    Normalized c = normalize(sc, problem.trace_cap);
    if (c.sign > 0 && c.t >= 1.0) continue;
    out.push_back(std::move(c));
  }
  return out;
}

Eigen::MatrixXcd clamp_trace(Eigen::MatrixXcd W, double cap) {
  W = 0.5 * (W + W.adjoint()).eval();
  const double tr = W.trace().real();
  if (tr > cap && tr > 0.0) W *= cap / tr;
  return W;
}

}  // namespace

FeasibilityReport feasibility_check(const SdpProblem& problem) {
  problem.validate();
  const int n = problem.dim();
  const double nu = problem.trace_cap;
  FeasibilityReport report;

  int lower_count = 0;
  for (const auto& sc : problem.sat_constraints) lower_count += sc.sign < 0 ? 1 : 0;
  if (lower_count == 0) {
    report.status = FeasibilityStatus::feasible;
    report.witness = Eigen::MatrixXcd::Zero(n, n);
    return report;
  }
  for (const auto& sc : problem.sat_constraints) {
    if (sc.sign < 0 && !(nu * sc.g.squaredNorm() >= sc.threshold * (1.0 + kBoundaryMargin))) {
      report.status = FeasibilityStatus::infeasible;
      return report;
    }
  }

  const std::vector<Normalized> cons = active_constraints(problem);
  if (cons.size() == 1) {
    // Only the lower bound is active: full power along g meets it.
    const auto& sc = *std::find_if(problem.sat_constraints.begin(), problem.sat_constraints.end(),
                                   [](const SaturationConstraint& s) { return s.sign < 0; });
    const Eigen::RowVectorXcd unit = sc.g / sc.g.norm();
    report.status = FeasibilityStatus::feasible;
    report.witness = nu * (unit.adjoint() * unit);
    return report;
  }

  // max t' s.t. sign (q_k/p_k - 1) + t' - 1 <= 0 for every active k, Tr W <= nu.
  // The region has an interior iff t' > 1.
  const Eigen::Index dim = 2 * n;
  const Eigen::Index m = 1 + static_cast<Eigen::Index>(cons.size());
  StandardFormSdp sf;
  sf.C = Eigen::MatrixXd::Zero(dim, dim);
  sf.c = Eigen::VectorXd::Zero(m + 1);
  sf.c[0] = -1.0;
  sf.a = Eigen::MatrixXd::Zero(m, m + 1);
  sf.b = Eigen::VectorXd::Zero(m);
  sf.A.push_back(0.5 * Eigen::MatrixXd::Identity(dim, dim));
  sf.a(0, 1) = 1.0;
  sf.b[0] = 1.0;
  for (std::size_t k = 0; k < cons.size(); ++k) {
    const Eigen::Index row = static_cast<Eigen::Index>(k) + 1;
    sf.A.push_back(cons[k].sign / cons[k].t * cons[k].G);
    sf.a(row, 0) = 1.0;
    sf.a(row, row + 1) = 1.0;
    sf.b[row] = 1.0 + cons[k].sign;
  }
  const IpmResult res = solve_standard_form(sf);
  if (!res.converged) {
    report.status = FeasibilityStatus::numerical_failure;
    return report;
  }
  if (res.x[0] - 1.0 < kBoundaryMargin) {
    report.status = FeasibilityStatus::infeasible;
    return report;
  }
  report.status = FeasibilityStatus::feasible;
  report.witness = clamp_trace(nu * unlift(res.X), nu);
  return report;
}

bool satisfies_invariants(const SdpProblem& problem, const SdpSolution& solution) {
  const Eigen::MatrixXcd& W = solution.W;
  if (W.rows() != problem.dim() || W.cols() != problem.dim()) return false;
  if (!W.allFinite()) return false;
  const double scale = std::max(1.0, W.cwiseAbs().maxCoeff());
  if ((W - W.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(W, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8) return false;
  if (W.trace().real() > problem.trace_cap + 1e-8) return false;
  for (const auto& sc : problem.sat_constraints) {
    if (sc.sign * (quadratic_form(sc.g, W) - sc.threshold) > 1e-8 * sc.threshold) return false;
  }
  return solution.kkt_residual <= 1e-6;
}

SdpSolution solve_linear_sdp(const SdpProblem& problem, const SolveOptions& options) {
  problem.validate();
  const int n = problem.dim();
  const double nu = problem.trace_cap;
  SdpSolution sol;

  const bool has_lower = std::any_of(problem.sat_constraints.begin(), problem.sat_constraints.end(),
                                     [](const SaturationConstraint& s) { return s.sign < 0; });
  if (nu == 0.0) {
    sol.status = has_lower ? SdpStatus::infeasible : SdpStatus::optimal;
    sol.W = Eigen::MatrixXcd::Zero(n, n);
    return sol;
  }

  Eigen::MatrixXcd witness;
  if (!options.assume_feasible || problem.objective.squaredNorm() == 0.0) {
    const FeasibilityReport feas = feasibility_check(problem);
    if (feas.status == FeasibilityStatus::infeasible) {
      sol.status = SdpStatus::infeasible;
      return sol;
    }
    if (feas.status == FeasibilityStatus::numerical_failure) {
      sol.status = SdpStatus::numerical_failure;
      return sol;
    }
    witness = feas.witness;
  }

  const double c_norm = problem.objective.norm();
  if (c_norm == 0.0) {
    sol.W = witness;
    sol.status = SdpStatus::optimal;
    return sol;
  }

  // Work with W = nu * What and C / |C| so every quantity is O(1).
  const std::vector<Normalized> cons = active_constraints(problem);
  const Eigen::Index dim = 2 * n;
  const Eigen::Index m = 1 + static_cast<Eigen::Index>(cons.size());
  StandardFormSdp sf;
  sf.C = -0.5 * lift(problem.objective / c_norm);
  sf.c = Eigen::VectorXd::Zero(m);
  sf.a = Eigen::MatrixXd::Identity(m, m);
  sf.b = Eigen::VectorXd(m);
  sf.A.push_back(0.5 * Eigen::MatrixXd::Identity(dim, dim));
  sf.b[0] = 1.0;
  for (std::size_t k = 0; k < cons.size(); ++k) {
    sf.A.push_back(cons[k].sign * cons[k].G);
    sf.b[static_cast<Eigen::Index>(k) + 1] = cons[k].sign * cons[k].t;
  }

  const IpmResult res = solve_standard_form(sf);
  sol.iterations = res.iterations;
  sol.kkt_residual = res.kkt_residual;
  if (!res.converged) {
    sol.status = SdpStatus::numerical_failure;
    return sol;
  }
  sol.W = clamp_trace(nu * unlift(res.X), nu);
  sol.value = (problem.objective.adjoint() * sol.W).trace().real();
  sol.status = SdpStatus::optimal;
  if (!satisfies_invariants(problem, sol)) sol.status = SdpStatus::numerical_failure;
  return sol;
}

}  // namespace wpt::conic
