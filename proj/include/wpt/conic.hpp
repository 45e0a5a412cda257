#pragma once

// Small linear-objective semidefinite programs over complex Hermitian
// matrices:
//
//   maximize   Re Tr(C^H W)
//   subject to Tr W <= nu,
//              sign_m * (g_m W g_m^H - threshold_m) <= 0   (at most two),
//              W Hermitian PSD.
//
// Complex data is lifted to real symmetric matrices of twice the size and
// handed to a primal-dual interior-point method (HKM direction, Mehrotra
// predictor-corrector) for the mixed semidefinite / nonnegative-orthant
// standard form below.

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace wpt::conic {

// H = A + iB  ->  [[A, -B], [B, A]].  Re Tr(H1^H H2) = Tr(lift(H1) lift(H2)) / 2.
Eigen::MatrixXd lift(const Eigen::MatrixXcd& H);
// Inverse of lift on the structured subspace; averages the duplicated blocks
// so any real symmetric (PSD) input maps to a Hermitian (PSD) matrix.
Eigen::MatrixXcd unlift(const Eigen::MatrixXd& X);

struct SaturationConstraint {
  Eigen::RowVectorXcd g;
  int sign = +1;  // +1: g W g^H <= threshold, -1: g W g^H >= threshold
  double threshold = 0.0;
};

struct SdpProblem {
  Eigen::MatrixXcd objective;
  double trace_cap = 0.0;
  std::vector<SaturationConstraint> sat_constraints;

  int dim() const { return static_cast<int>(objective.rows()); }
  void validate() const;
};

enum class SdpStatus { optimal, infeasible, numerical_failure };

struct SdpSolution {
  Eigen::MatrixXcd W;
  double value = 0.0;
  SdpStatus status = SdpStatus::numerical_failure;
  double kkt_residual = 0.0;
  int iterations = 0;
};

enum class FeasibilityStatus { feasible, infeasible, numerical_failure };

struct FeasibilityReport {
  FeasibilityStatus status = FeasibilityStatus::infeasible;
  // A feasible point when status == feasible: strictly inside every
  // lower-bound constraint whenever the set has an interior.
  Eigen::MatrixXcd witness;
};

// A feasible set whose best relative margin on the lower-bound constraints
// is below this is reported infeasible (it has no interior).
inline constexpr double kBoundaryMargin = 1e-9;

FeasibilityReport feasibility_check(const SdpProblem& problem);

struct SolveOptions {
  // Skip the feasibility pre-check; the caller already established it.
  bool assume_feasible = false;
};

SdpSolution solve_linear_sdp(const SdpProblem& problem, const SolveOptions& options = {});

// Post-hoc check of the optimal-solution invariants: W Hermitian with
// eigenvalues >= -1e-8, Tr W <= nu + 1e-8, each saturation constraint met
// within 1e-8 * threshold, kkt_residual <= 1e-6.
bool satisfies_invariants(const SdpProblem& problem, const SdpSolution& solution);

// ---------------------------------------------------------------------------
// Real standard form used by the interior-point core:
//
//   minimize   <C, X> + c.x
//   subject to <A_k, X> + a_k.x = b_k,   X symmetric PSD, x >= 0.
//
// with a_k the k-th row of `a`.
struct StandardFormSdp {
  Eigen::MatrixXd C;
  Eigen::VectorXd c;
  std::vector<Eigen::MatrixXd> A;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

struct IpmSettings {
  double tolerance = 1e-9;
  int max_iterations = 200;
  double step_fraction = 0.95;
};

struct IpmResult {
  Eigen::MatrixXd X;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::MatrixXd Z;
  Eigen::VectorXd z;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

IpmResult solve_standard_form(const StandardFormSdp& problem, const IpmSettings& settings = {});

}  // namespace wpt::conic
