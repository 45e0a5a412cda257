#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wpt/conic.hpp"

#include <cmath>
#include <random>

using namespace wpt::conic;

namespace {

Eigen::MatrixXcd random_hermitian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = {nd(rng), nd(rng)};
  return (A + A.adjoint()) / 2.0;
}

Eigen::RowVectorXcd random_row(std::mt19937_64& rng, int n, double scale) {
  std::normal_distribution<double> nd;
  Eigen::RowVectorXcd g(n);
  for (int i = 0; i < n; ++i) g[i] = {scale * nd(rng), scale * nd(rng)};
  return g;
}

double qf(const Eigen::RowVectorXcd& g, const Eigen::MatrixXcd& W) {
  return (g * W * g.adjoint())(0, 0).real();
}

}  // namespace

TEST_CASE("lift preserves the real inner product and round-trips") {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXcd A = random_hermitian(rng, 3), B = random_hermitian(rng, 3);
  const double direct = (A.adjoint() * B).trace().real();
  const double lifted = (lift(A) * lift(B)).trace() / 2.0;
  CHECK(lifted == doctest::Approx(direct).epsilon(1e-13));
  CHECK((unlift(lift(A)) - A).norm() < 1e-14);
  // eigenvalues of the lift are those of A, each twice
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(A);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> el(lift(A));
  for (int k = 0; k < 3; ++k) {
    CHECK(el.eigenvalues()[2 * k] == doctest::Approx(ea.eigenvalues()[k]).epsilon(1e-12));
    CHECK(el.eigenvalues()[2 * k + 1] == doctest::Approx(ea.eigenvalues()[k]).epsilon(1e-12));
  }
}

TEST_CASE("rank-1 objective aligns W at full trace") {
  SdpProblem p;
  p.objective = Eigen::MatrixXcd::Zero(3, 3);
  p.objective(0, 0) = 1.0;
  p.trace_cap = 2.0;
  const SdpSolution s = solve_linear_sdp(p);
  REQUIRE(s.status == SdpStatus::optimal);
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-6));
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(3, 3);
  expect(0, 0) = 2.0;
  CHECK((s.W - expect).norm() < 1e-6);
  CHECK(satisfies_invariants(p, s));
}

TEST_CASE("binding saturation cap") {
  std::mt19937_64 rng(2);
  for (int n : {1, 2, 4}) {
    for (double scale : {1.0, 1e-3}) {
      const Eigen::RowVectorXcd g = random_row(rng, n, scale);
      const double p_sat = 0.25 * g.squaredNorm();
      SdpProblem p;
      p.objective = g.adjoint() * g;
      p.trace_cap = 1.0;  // nu |g|^2 = 4 p_sat
      p.sat_constraints.push_back({g, +1, p_sat});
      const SdpSolution s = solve_linear_sdp(p);
      CAPTURE(n);
      CAPTURE(scale);
      REQUIRE(s.status == SdpStatus::optimal);
      CHECK(std::abs(s.value - p_sat) <= 1e-6 * p_sat);
      CHECK(qf(g, s.W) <= p_sat * (1 + 1e-8));
      CHECK(satisfies_invariants(p, s));
    }
  }
}

TEST_CASE("infeasible lower bound") {
  std::mt19937_64 rng(3);
  const Eigen::RowVectorXcd g = random_row(rng, 2, 1.0);
  SdpProblem p;
  p.objective = Eigen::MatrixXcd::Identity(2, 2);
  p.trace_cap = 1.0;
  p.sat_constraints.push_back({g, -1, g.squaredNorm() / 0.9});  // nu |g|^2 = 0.9 p_sat
  CHECK(feasibility_check(p).status == FeasibilityStatus::infeasible);
  CHECK(solve_linear_sdp(p).status == SdpStatus::infeasible);
}

TEST_CASE("feasibility verdicts") {
  std::mt19937_64 rng(4);
  const Eigen::RowVectorXcd g = random_row(rng, 3, 1.0);
  SdpProblem none;
  none.objective = Eigen::MatrixXcd::Zero(3, 3);
  none.trace_cap = 1.0;
  none.sat_constraints.push_back({g, +1, 0.1});
  CHECK(feasibility_check(none).status == FeasibilityStatus::feasible);

  SdpProblem one = none;
  one.sat_constraints = {{g, -1, 0.5 * g.squaredNorm()}};
  const auto r1 = feasibility_check(one);
  REQUIRE(r1.status == FeasibilityStatus::feasible);
  CHECK(qf(g, r1.witness) >= 0.5 * g.squaredNorm());
  CHECK(r1.witness.trace().real() <= 1.0 + 1e-12);

  // orthogonal lower bounds with nu = p/|g1|^2 + p/|g2|^2
  Eigen::RowVectorXcd g1 = Eigen::RowVectorXcd::Zero(3), g2 = Eigen::RowVectorXcd::Zero(3);
  g1[0] = {2.0, 0.0};
  g2[1] = {0.0, 0.5};
  const double p_sat = 1.0;
  SdpProblem two;
  two.objective = Eigen::MatrixXcd::Zero(3, 3);
  two.trace_cap = p_sat / g1.squaredNorm() + p_sat / g2.squaredNorm() + 1e-6;
  two.sat_constraints = {{g1, -1, p_sat}, {g2, -1, p_sat}};
  const auto r2 = feasibility_check(two);
  REQUIRE(r2.status == FeasibilityStatus::feasible);
  CHECK(qf(g1, r2.witness) >= p_sat * (1 - 1e-9));
  CHECK(qf(g2, r2.witness) >= p_sat * (1 - 1e-9));
  // the constructed witness from the sum of scaled rank-1 terms
  const Eigen::MatrixXcd W = p_sat / std::pow(g1.squaredNorm(), 2) * g1.adjoint() * g1 +
                             p_sat / std::pow(g2.squaredNorm(), 2) * g2.adjoint() * g2;
  CHECK(qf(g1, W) == doctest::Approx(p_sat));
  CHECK(qf(g2, W) == doctest::Approx(p_sat));
  CHECK(W.trace().real() <= two.trace_cap);

  // too little power for both
  two.trace_cap = 0.8 * (p_sat / g1.squaredNorm() + p_sat / g2.squaredNorm());
  CHECK(feasibility_check(two).status == FeasibilityStatus::infeasible);
}

TEST_CASE("zero trace cap returns the zero matrix") {
  SdpProblem p;
  p.objective = Eigen::MatrixXcd::Identity(2, 2);
  p.trace_cap = 0.0;
  const SdpSolution s = solve_linear_sdp(p);
  REQUIRE(s.status == SdpStatus::optimal);
  CHECK(s.W.norm() == 0.0);
  CHECK(s.value == 0.0);
}

TEST_CASE("unconstrained optimum is nu times the top eigenvalue") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 5;
    SdpProblem p;
    p.objective = random_hermitian(rng, n);
    p.trace_cap = 0.5 + t;
    const SdpSolution s = solve_linear_sdp(p);
    const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(p.objective).eigenvalues().maxCoeff();
    const double expect = p.trace_cap * std::max(0.0, lmax);
    CAPTURE(t);
    REQUIRE(s.status == SdpStatus::optimal);
    CHECK(std::abs(s.value - expect) <= 1e-6 * std::max(1.0, expect));
    CHECK(satisfies_invariants(p, s));
  }
}

TEST_CASE("value bounded by the trace cap and monotone in it") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 5; ++t) {
    const int n = 3;
    const Eigen::RowVectorXcd g1 = random_row(rng, n, 1.0), g2 = random_row(rng, n, 1.0);
    const Eigen::MatrixXcd C = random_hermitian(rng, n);
    const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(C).eigenvalues().maxCoeff();
    double prev = -1e300;
    for (int k = 1; k <= 10; ++k) {
      SdpProblem p;
      p.objective = C;
      p.trace_cap = 0.3 * k;
      p.sat_constraints = {{g1, +1, 0.5}, {g2, +1, 0.7}};
      const SdpSolution s = solve_linear_sdp(p);
      REQUIRE(s.status == SdpStatus::optimal);
      CHECK(satisfies_invariants(p, s));
      CHECK(s.value <= p.trace_cap * std::max(0.0, lmax) + 1e-6);
      CHECK(s.value >= prev - 1e-7);
      prev = s.value;
    }
  }
}

TEST_CASE("mixed lower and upper bounds") {
  std::mt19937_64 rng(7);
  int solved = 0;
  for (int t = 0; t < 30; ++t) {
    const Eigen::RowVectorXcd g1 = random_row(rng, 2, 1.0), g2 = random_row(rng, 2, 1.0);
    SdpProblem p;
    p.objective = random_hermitian(rng, 2);
    p.trace_cap = 2.0;
    p.sat_constraints = {{g1, -1, 1.0}, {g2, +1, 1.0}};
    const auto f = feasibility_check(p);
    const SdpSolution s = solve_linear_sdp(p);
    if (f.status == FeasibilityStatus::feasible) {
      REQUIRE(s.status == SdpStatus::optimal);
      CHECK(satisfies_invariants(p, s));
      CHECK(qf(g1, f.witness) >= 1.0 - 1e-9);
      CHECK(qf(g2, f.witness) <= 1.0 + 1e-9);
      ++solved;
    } else {
      CHECK(s.status != SdpStatus::optimal);
    }
  }
  CHECK(solved > 0);
}

TEST_CASE("malformed problems are rejected") {
  SdpProblem p;
  p.objective = Eigen::MatrixXcd::Identity(2, 2);
  p.objective(0, 1) = 1.0;
  p.trace_cap = 1.0;
  CHECK_THROWS(p.validate());
  SdpProblem q;
  q.objective = Eigen::MatrixXcd::Identity(2, 2);
  q.trace_cap = -1.0;
  CHECK_THROWS(q.validate());
}
