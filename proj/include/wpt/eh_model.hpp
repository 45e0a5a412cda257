#pragma once

#include "wpt/types.hpp"

#include <Eigen/Dense>

namespace wpt {

// Rectenna circuit constants. All powers are in watts.
struct RectennaParams {
  double a = 1.29;      // dimensionless diode constant
  double b = 1.55e3;    // 1/sqrt(W)
  double i_s = 5e-6;    // reverse saturation current, A
  double r_l = 1e4;     // load resistance, ohm
  double p_sat = 25e-6; // input power where the output saturates, W

  void validate() const;
};

// Unclipped transfer function from received power p to harvested DC power.
double varphi(double p, const RectennaParams& params);
double varphi_prime(double p, const RectennaParams& params);

// Clipped transfer function min{varphi(p), varphi(p_sat)}.
double phi(double p, const RectennaParams& params);
double phi_saturation(const RectennaParams& params);

// d phi / dp. Zero for p >= p_sat; at p = 0 the analytic limit is used.
double phi_prime(double p, const RectennaParams& params);

struct PsiEvaluation {
  double value = 0.0;
  Eigen::MatrixXcd gradient;
};

// psi(W) = sum_m xi_m phi(g_m W g_m^H) and its gradient
// sum_m xi_m phi'(p_m) g_m^H g_m. Throws ContractViolation if W is not
// Hermitian to within 1e-9 (relative to max(1, max|W_ij|)).
PsiEvaluation weighted_psi(const Eigen::MatrixXcd& W, const ChannelPair& channels,
                           const Weights& weights, const RectennaParams& params);

// Received power g W g^H (real part; the imaginary part vanishes for Hermitian W).
double quadratic_form(const Eigen::RowVectorXcd& g, const Eigen::MatrixXcd& W);

}  // namespace wpt
