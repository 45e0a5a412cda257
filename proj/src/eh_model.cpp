#include "wpt/eh_model.hpp"

#include "wpt/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wpt {

void ChannelPair::validate() const {
  if (g1.size() < 1 || g1.size() != g2.size()) {
    throw ContractViolation("ChannelPair: g1 and g2 must have the same nonzero length");
  }
  if (g1.squaredNorm() == 0.0 || g2.squaredNorm() == 0.0) {
    throw ContractViolation("ChannelPair: channel vectors must be nonzero");
  }
}

Weights Weights::from_xi1(double xi1) {
  Weights w{xi1, 1.0 - xi1};
  w.validate();
  return w;
}

void Weights::validate() const {
  if (!(xi1 >= 0.0 && xi1 <= 1.0 && xi2 >= 0.0 && xi2 <= 1.0) ||
      std::abs(xi1 + xi2 - 1.0) > 1e-12) {
    throw ContractViolation("Weights: xi1, xi2 must lie in [0,1] and sum to 1");
  }
}

void RectennaParams::validate() const {
  if (!(a > 0.0 && a <= 10.0)) throw std::invalid_argument("RectennaParams: a must be in (0, 10]");
  if (!(b > 0.0 && i_s > 0.0 && r_l > 0.0 && p_sat > 0.0)) {
    throw std::invalid_argument("RectennaParams: b, i_s, r_l, p_sat must be positive");
  }
}

namespace {

void require_power(double p) {
  if (!(p >= 0.0)) throw std::domain_error("rectenna model: input power must be nonnegative");
}

// W0(a e^a I0(x)), through the log domain for large x.
double lambert_of_bessel(double x, double a) {
  if (x <= specfun::kLargeArgument) {
    return specfun::lambert_w0(a * std::exp(a) * specfun::bessel_i0(x));
  }
  return specfun::lambert_w0_from_log(std::log(a) + a + specfun::bessel_i0_log(x));
}

}  // namespace

double varphi(double p, const RectennaParams& params) {
  require_power(p);
  const double x = params.b * std::sqrt(2.0 * p);
  const double w = lambert_of_bessel(x, params.a);
  const double bracket = w / params.a - 1.0;
  return bracket * bracket * params.i_s * params.i_s * params.r_l;
}

double varphi_prime(double p, const RectennaParams& params) {
  require_power(p);
  const double x = params.b * std::sqrt(2.0 * p);
  const double w = lambert_of_bessel(x, params.a);
  // u'/u = (I1/I0)(x) * b / sqrt(2p) = b^2 * I1(x) / (x I0(x)).
  const double log_deriv_u = params.b * params.b * specfun::bessel_i1_over_x_i0(x);
  const double dw_dp = w / (1.0 + w) * log_deriv_u;
  return 2.0 * (w / params.a - 1.0) / params.a * dw_dp * params.i_s * params.i_s * params.r_l;
}

double phi_saturation(const RectennaParams& params) { return varphi(params.p_sat, params); }

double phi(double p, const RectennaParams& params) {
  require_power(p);
  const double cap = phi_saturation(params);
  if (p >= params.p_sat) return cap;
  return std::min(varphi(p, params), cap);
}

double phi_prime(double p, const RectennaParams& params) {
  require_power(p);
  if (p >= params.p_sat) return 0.0;
  return varphi_prime(p, params);
}

double quadratic_form(const Eigen::RowVectorXcd& g, const Eigen::MatrixXcd& W) {
  return (g * W * g.adjoint())(0, 0).real();
}

PsiEvaluation weighted_psi(const Eigen::MatrixXcd& W, const ChannelPair& channels,
                           const Weights& weights, const RectennaParams& params) {
  const int n = channels.n_t();
  if (W.rows() != n || W.cols() != n) {
    throw ContractViolation("weighted_psi: W dimension does not match the channels");
  }
  const double scale = std::max(1.0, W.cwiseAbs().maxCoeff());
  if ((W - W.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw ContractViolation("weighted_psi: W is not Hermitian");
  }

  PsiEvaluation out;
  out.gradient = Eigen::MatrixXcd::Zero(n, n);
  for (int m = 0; m < 2; ++m) {
    const auto& g = channels.g(m);
    const double p = std::max(0.0, quadratic_form(g, W));
    out.value += weights[m] * phi(p, params);
    const double slope = weights[m] * phi_prime(p, params);
    if (slope != 0.0) out.gradient += slope * (g.adjoint() * g);
  }
  return out;
}

}  // namespace wpt
