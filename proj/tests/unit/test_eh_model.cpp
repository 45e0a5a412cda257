#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wpt/eh_model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace wpt;

namespace {

// scripts/varphi_oracle.py, 60-digit mpmath.
constexpr double kVarphi25u = 7.353191743079691253117115e-6;
constexpr double kVarphi12u5 = 2.84200116953173579524501e-6;
constexpr double kVarphi1u = 5.163031975013081182380016e-8;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ChannelPair two_channels() {
  ChannelPair c;
  c.g1 = Eigen::RowVectorXcd(2);
  c.g2 = Eigen::RowVectorXcd(2);
  c.g1 << std::complex<double>(1e-3, 2e-4), std::complex<double>(-3e-4, 5e-4);
  c.g2 << std::complex<double>(2e-4, -1e-4), std::complex<double>(4e-4, 3e-4);
  return c;
}

Eigen::MatrixXcd random_hermitian(std::mt19937_64& rng, int n, double scale) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = {nd(rng), nd(rng)};
  return scale * (A + A.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("varphi against the arbitrary-precision oracle") {
  const RectennaParams p;
  CHECK(varphi(0.0, p) == 0.0);
  CHECK(rel(varphi(25e-6, p), kVarphi25u) < 1e-10);
  CHECK(rel(varphi(12.5e-6, p), kVarphi12u5) < 1e-10);
  CHECK(rel(varphi(1e-6, p), kVarphi1u) < 1e-10);
  CHECK(varphi(12.5e-6, p) > 0.0);
  CHECK(varphi(12.5e-6, p) < varphi(25e-6, p));
  CHECK_THROWS_AS(varphi(-1e-9, p), std::domain_error);
}

TEST_CASE("varphi stays finite deep in saturation") {
  const RectennaParams p;
  for (double q : {1e-3, 1.0, 100.0, 1e4}) {
    CAPTURE(q);
    CHECK(std::isfinite(varphi(q, p)));
    CHECK(std::isfinite(varphi_prime(q, p)));
  }
}

TEST_CASE("phi clipping") {
  const RectennaParams p;
  CHECK(phi(0.0, p) == 0.0);
  CHECK(phi(25e-6, p) == varphi(25e-6, p));
  CHECK(phi(100e-6, p) == phi(25e-6, p));
  CHECK(phi_saturation(p) == varphi(25e-6, p));
  for (int k = 0; k < 100; ++k) CHECK(phi(25e-6 + k * 1e-5, p) == phi_saturation(p));
}

TEST_CASE("phi non-decreasing and bounded") {
  const RectennaParams p;
  double prev = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double v = phi(k * 5e-8, p);
    CHECK(prev <= v + 1e-15);
    CHECK(v <= phi_saturation(p));
    prev = v;
  }
}

TEST_CASE("varphi convex below saturation") {
  const RectennaParams p;
  const double h = 25e-6 / 1000;
  const double scale = phi_saturation(p);
  for (int k = 1; k < 999; ++k) {
    const double d2 = varphi((k + 1) * h, p) - 2 * varphi(k * h, p) + varphi((k - 1) * h, p);
    CHECK(d2 >= -1e-9 * scale);
  }
}

TEST_CASE("phi_prime matches finite differences") {
  const RectennaParams p;
  CHECK(phi_prime(25e-6, p) == 0.0);
  CHECK(phi_prime(30e-6, p) == 0.0);
  const double d0 = phi_prime(0.0, p);
  CHECK(std::isfinite(d0));
  CHECK(d0 >= 0.0);

  const double h = 1e-10;
  auto fd = [&](double q) { return (phi(q + h, p) - phi(q - h, p)) / (2 * h); };
  CHECK(rel(phi_prime(10e-6, p), fd(10e-6)) < 1e-5);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(1e-7, 25e-6 - 1e-7);
  for (int k = 0; k < 50; ++k) {
    const double q = u(rng);
    CAPTURE(q);
    CHECK(rel(phi_prime(q, p), fd(q)) < 1e-5);
  }
  // phi grows like p^2 near zero, so the slope starts at 0 and is continuous there
  CHECK(d0 == 0.0);
  CHECK(phi_prime(1e-14, p) < 2e-6 * phi_prime(1e-8, p));
}

TEST_CASE("weighted_psi values and gradient") {
  const RectennaParams p;
  const ChannelPair ch = two_channels();
  const Weights w = Weights::from_xi1(0.3);

  const auto z = weighted_psi(Eigen::MatrixXcd::Zero(2, 2), ch, w, p);
  CHECK(z.value == 0.0);
  const Eigen::MatrixXcd g0 = w.xi1 * phi_prime(0, p) * ch.g1.adjoint() * ch.g1 +
                              w.xi2 * phi_prime(0, p) * ch.g2.adjoint() * ch.g2;
  CHECK((z.gradient - g0).norm() <= 1e-12 * g0.norm());

  // both nodes saturated
  const Eigen::MatrixXcd big = 1e3 * Eigen::MatrixXcd::Identity(2, 2);
  const auto s = weighted_psi(big, ch, w, p);
  CHECK(s.value == doctest::Approx(phi_saturation(p)).epsilon(1e-15));
  CHECK(s.gradient.norm() == 0.0);

  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(weighted_psi(bad, ch, w, p), ContractViolation);
}

TEST_CASE("weighted_psi directional derivative") {
  const RectennaParams p;
  const ChannelPair ch = two_channels();
  const Weights w = Weights::from_xi1(0.6);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    Eigen::MatrixXcd W = random_hermitian(rng, 2, 1.0);
    W = W * W.adjoint() + 2.0 * Eigen::MatrixXcd::Identity(2, 2);  // PSD, node powers well below p_sat
    const Eigen::MatrixXcd D = random_hermitian(rng, 2, 1.0);
    const auto base = weighted_psi(W, ch, w, p);
    // the step is relative to |W| so the change clears rounding of the value
    const double h = 1e-4;
    const double lhs = weighted_psi(W + h * D, ch, w, p).value - weighted_psi(W - h * D, ch, w, p).value;
    const double rhs = 2 * h * (base.gradient.adjoint() * D).trace().real();
    CAPTURE(t);
    CHECK(rel(lhs, rhs) < 1e-4);
  }
}

TEST_CASE("parameter and weight validation") {
  RectennaParams p;
  p.a = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK_THROWS_AS(Weights::from_xi1(1.5), ContractViolation);
  Weights w{0.5, 0.6};
  CHECK_THROWS_AS(w.validate(), ContractViolation);
}
