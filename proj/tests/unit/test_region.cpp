#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wpt/region.hpp"
#include "wpt/rng.hpp"

#include <cmath>
#include <stdexcept>

using namespace wpt;

namespace {

ChannelPair channels(int n_t, std::uint64_t realization, double d1 = 10.0, double d2 = 25.0) {
  ChannelConfig c;
  c.n_t = n_t;
  c.d1 = d1;
  c.d2 = d2;
  c.seed = 21;
  return draw_channel_pair(c, realization);
}

GridSpec small_grid() { return {1.0, 50}; }

// Curve with hand-set values and unit beamformers along e1.
PhiCurve synthetic_curve(const std::vector<double>& grid, const std::vector<double>& values) {
  PhiCurve c;
  c.grid = grid;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    PhiPoint p;
    p.nu = grid[k];
    p.value = values[k];
    p.w = Eigen::VectorXcd::Zero(2);
    p.w[0] = std::sqrt(grid[k]);
    c.points.push_back(p);
  }
  return c;
}

}  // namespace

TEST_CASE("phi curve basics") {
  const RectennaParams p;
  const ChannelPair ch = channels(2, 0);
  const PhiCurve c = build_phi_curve(ch, Weights::from_xi1(0.5), p, small_grid(), 1);
  REQUIRE(c.points.size() == c.grid.size());
  REQUIRE(c.grid.size() >= 51);
  CHECK(c.points[0].value == 0.0);
  for (std::size_t k = 0; k < c.grid.size(); ++k) {
    CHECK(c.grid[k] == static_cast<double>(k) * 1.0);
    if (k > 0) CHECK(c.points[k].value >= c.points[k - 1].value);
  }
  // node 2 at 25 m cannot saturate within 200 W, so the curve is extended to the cap and flagged
  CHECK_FALSE(c.saturated);
  CHECK(c.grid.size() == 201);
  CHECK(c.extended_points == 150);
}

TEST_CASE("single antenna curve is the scalar formula") {
  const RectennaParams p;
  const ChannelPair ch = channels(1, 3);
  const Weights w = Weights::from_xi1(0.3);
  const PhiCurve c = build_phi_curve(ch, w, p, small_grid(), 2);
  for (const PhiPoint& pt : c.points) {
    const double expect = w.xi1 * phi(pt.nu * ch.g1.squaredNorm(), p) + w.xi2 * phi(pt.nu * ch.g2.squaredNorm(), p);
    CHECK(std::abs(pt.value - expect) <= 1e-12 * phi_saturation(p));
  }
}

TEST_CASE("curve tail reaches saturation when the grid allows it") {
  const RectennaParams p;
  // near nodes saturate at a few watts
  const ChannelPair ch = channels(2, 1, 2.0, 3.0);
  const PhiCurve c = build_phi_curve(ch, Weights::from_xi1(0.5), p, {0.5, 40}, 3);
  CHECK(c.saturated);
  CHECK(c.extended_points == 0);
  CHECK(std::abs(c.points.back().value - phi_saturation(p)) <= 1e-9 * phi_saturation(p));
}

TEST_CASE("grid extension stops once saturated") {
  const RectennaParams p;
  const ChannelPair ch = channels(2, 1, 2.0, 3.0);
  const PhiCurve c = build_phi_curve(ch, Weights::from_xi1(1.0), p, {0.05, 10}, 3);
  CHECK(c.saturated);
  CHECK(c.extended_points > 0);
  CHECK(c.grid.size() <= 41);
  CHECK(c.points[c.points.size() - 2].value < phi_saturation(p) * (1 - 1e-9));
}

TEST_CASE("solve_policy on synthetic curves") {
  // convex then flat: masses at 0 and the knee
  std::vector<double> g, v;
  for (int k = 0; k <= 20; ++k) {
    g.push_back(0.5 * k);
    v.push_back(std::min(0.25 * k * k, 25.0));
  }
  const TwoPointPolicy pol = solve_policy(synthetic_curve(g, v), 4.0);
  CHECK(pol.nu1 == 0.0);
  CHECK(pol.nu2 == 5.0);
  CHECK(pol.beta == doctest::Approx(0.2));
  CHECK(pol.w2.squaredNorm() == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(pol.w1.squaredNorm() == 0.0);
  CHECK(pol.mean_power() <= 4.0 + 1e-9);

  // beta arithmetic: masses at 0 and 10 with budget 4
  const TwoPointPolicy b = solve_policy(synthetic_curve({0, 2, 4, 6, 8, 10}, {0, 0, 0, 1, 2, 10}), 4.0);
  CHECK(b.nu1 == 0.0);
  CHECK(b.nu2 == 10.0);
  CHECK(b.beta == doctest::Approx(0.6));

  // concave curve: single beam at the budget
  std::vector<double> cv;
  for (double x : g) cv.push_back(std::sqrt(x));
  const TwoPointPolicy d = solve_policy(synthetic_curve(g, cv), 4.0);
  CHECK(d.beta == 1.0);
  CHECK(d.nu1 == 4.0);
  CHECK(d.w1 == d.w2);
  CHECK(d.w1.squaredNorm() == doctest::Approx(4.0));

  CHECK_THROWS_AS(solve_policy(synthetic_curve(g, v), 10.5), std::out_of_range);
}

TEST_CASE("average powers") {
  const RectennaParams p;
  const ChannelPair ch = channels(2, 4);
  TwoPointPolicy pol = single_beam_policy(ch.g1.adjoint(), 3.0);
  HarvestedPowers h = average_powers(pol, ch, p);
  CHECK(h.e1 == doctest::Approx(phi(std::norm((ch.g1 * pol.w1)(0, 0)), p)).epsilon(1e-14));

  // both masses saturate node 1
  pol.w1 = ch.g1.adjoint() * 1e6;
  pol.w2 = ch.g1.adjoint() * 2e6;
  pol.beta = 0.3;
  h = average_powers(pol, ch, p);
  CHECK(h.e1 == doctest::Approx(phi_saturation(p)).epsilon(1e-15));
}

TEST_CASE("average powers match a slot-by-slot playout") {
  const RectennaParams p;
  const ChannelPair ch = channels(4, 5);
  const Weights w = Weights::from_xi1(0.8);
  const PhiCurve c = build_phi_curve(ch, w, p, {1.0, 60}, 7);
  const TwoPointPolicy pol = solve_policy(c, 5.0);
  REQUIRE(pol.beta < 1.0);
  const HarvestedPowers h = average_powers(pol, ch, p);
  KeyedStream rng(mix_seed(8, 8));
  double e1 = 0.0, e2 = 0.0;
  const int n = 1'000'000;
  for (int k = 0; k < n; ++k) {
    const bool first = rng.uniform() < pol.beta;
    // symbol phase is arbitrary and must not matter
    const std::complex<double> s = std::polar(1.0, 2 * M_PI * rng.uniform());
    const Eigen::VectorXcd x = s * (first ? pol.w1 : pol.w2);
    e1 += phi(std::norm((ch.g1 * x)(0, 0)), p);
    e2 += phi(std::norm((ch.g2 * x)(0, 0)), p);
  }
  CHECK(std::abs(e1 / n - h.e1) <= 1e-2 * h.e1);
  CHECK(std::abs(e2 / n - h.e2) <= 1e-2 * h.e2);
}

TEST_CASE("linear-model baseline") {
  const RectennaParams p;
  const ChannelPair ch = channels(3, 6);
  const RegionPoint r = baseline_linear_eh(ch, Weights::from_xi1(1.0), p, 5.0);
  CHECK(r.e1 == doctest::Approx(phi(5.0 * ch.g1.squaredNorm(), p)).epsilon(1e-12));
  CHECK(r.policy.beta == 1.0);
  CHECK(r.policy.w1.squaredNorm() == doctest::Approx(5.0).epsilon(1e-12));

  ChannelPair orth;
  orth.g1 = Eigen::RowVectorXcd::Zero(2);
  orth.g2 = Eigen::RowVectorXcd::Zero(2);
  orth.g1[0] = 1e-3;
  orth.g2[1] = {0.0, 5e-4};
  const RegionPoint o = baseline_linear_eh(orth, Weights::from_xi1(0.5), p, 5.0);
  CHECK(o.e2 == 0.0);
  CHECK(o.e1 == doctest::Approx(phi(5.0 * 1e-6, p)));
}

TEST_CASE("single antenna baselines coincide for every weight") {
  const RectennaParams p;
  const ChannelPair ch = channels(1, 7);
  const GridSpec grid{0.5, 40};
  RegionPoint ref;
  bool first = true;
  for (double xi1 : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const Weights w = Weights::from_xi1(xi1);
    const PhiCurve c = build_phi_curve(ch, w, p, grid, 11);
    const RegionPoint b1 = baseline_linear_eh(ch, w, p, 5.0);
    const RegionPoint b2 = baseline_single_beam(c, ch, w, p, 5.0, 1);
    const RegionPoint b2d = baseline_single_beam(ch, w, p, 5.0, 1);
    const RegionPoint pr = proposed_point(c, ch, w, p, 5.0);
    CHECK(b1.e1 == b2.e1);
    CHECK(b1.e2 == b2.e2);
    CHECK(b2d.e1 == b2.e1);
    CHECK(b1.e1 == phi(5.0 * ch.g1.squaredNorm(), p));
    CHECK(pr.weighted(w) >= b2.weighted(w) - 1e-12);
    if (first) ref = b1;
    first = false;
    CHECK(b1.e1 == ref.e1);
    CHECK(b1.e2 == ref.e2);
  }
}

TEST_CASE("single-beam baseline equals a degenerate proposed policy") {
  const RectennaParams p;
  // high power, near nodes: the curve is concave near the budget
  const ChannelPair ch = channels(2, 2, 2.0, 3.0);
  const Weights w = Weights::from_xi1(0.5);
  const PhiCurve c = build_phi_curve(ch, w, p, {0.25, 80}, 5);
  for (double px : {10.0, 15.0}) {
    const RegionPoint pr = proposed_point(c, ch, w, p, px);
    const RegionPoint b2 = baseline_single_beam(c, ch, w, p, px, 1);
    CHECK(pr.weighted(w) >= b2.weighted(w) - 1e-6);
    if (pr.policy.beta == 1.0 && pr.policy.nu1 == px) {
      CHECK(pr.e1 == b2.e1);
      CHECK(pr.e2 == b2.e2);
    }
  }
}

TEST_CASE("off-grid budget solves one extra point") {
  const RectennaParams p;
  const ChannelPair ch = channels(2, 8);
  const Weights w = Weights::from_xi1(0.5);
  const PhiCurve c = build_phi_curve(ch, w, p, {1.0, 20}, 5);
  const RegionPoint b = baseline_single_beam(c, ch, w, p, 4.5, 1);
  CHECK(b.policy.w1.squaredNorm() == doctest::Approx(4.5).epsilon(1e-12));
  const TwoPointPolicy pol = solve_policy(c, 4.5);
  CHECK(pol.mean_power() <= 4.5 + 1e-9);
}

TEST_CASE("sweep dominance, ceiling and weight ordering") {
  SweepConfig cfg;
  cfg.channel.n_t = 2;
  cfg.channel.seed = 4;
  cfg.grid = {1.0, 60};
  cfg.weights = {0.0, 0.5, 1.0};
  cfg.p_x = {5.0, 30.0};
  cfg.n_realizations = 3;
  cfg.threads = 1;
  cfg.log_progress = false;
  const SweepResult r = sweep_region(cfg);
  REQUIRE(r.cells.size() == 9);
  REQUIRE(r.rows.size() == 2);
  const double cap = phi_saturation(cfg.rectenna);
  for (const CellResult& c : r.cells) {
    REQUIRE(c.ok);
    const Weights w = Weights::from_xi1(c.xi1);
    for (std::size_t b = 0; b < 2; ++b) {
      const auto& pts = c.points[b];
      CHECK(pts[0].weighted(w) >= pts[2].weighted(w) - 1e-6);
      CHECK(pts[2].weighted(w) >= pts[1].weighted(w) - 1e-6);
      for (const RegionPoint& q : pts) {
        CHECK(q.e1 <= cap);
        CHECK(q.e2 <= cap);
        CHECK(q.policy.mean_power() <= r.p_x[b] + 1e-9);
        CHECK(std::abs(q.policy.w1.squaredNorm() - q.policy.nu1) <= 1e-8);
        CHECK(std::abs(q.policy.w2.squaredNorm() - q.policy.nu2) <= 1e-8);
      }
      if (c.xi1 == 1.0) {
        CHECK(pts[0].e1 >= pts[1].e1 - 1e-12);
        CHECK(pts[0].e1 >= pts[2].e1 - 1e-12);
      }
    }
  }
  for (const auto& rows : r.rows) {
    REQUIRE(rows.size() == 9);
    CHECK(scheme_name(rows[0].scheme) == "baseline_linear");
    CHECK(scheme_name(rows[8].scheme) == "proposed");
    for (const SweepRow& row : rows) CHECK(row.n_ok == 3);
    // proposed rows dominate the linear-model rows in weighted objective
    for (int k = 0; k < 3; ++k) {
      const Weights w = Weights::from_xi1(rows[6 + k].xi1);
      CHECK(w.xi1 * rows[6 + k].e1 + w.xi2 * rows[6 + k].e2 >= w.xi1 * rows[k].e1 + w.xi2 * rows[k].e2 - 1e-6);
    }
  }
}

TEST_CASE("sweep results do not depend on the thread count") {
  SweepConfig cfg;
  cfg.channel.n_t = 2;
  cfg.grid = {2.0, 20};
  cfg.weights = {0.25, 0.75};
  cfg.p_x = {5.0};
  cfg.n_realizations = 3;
  cfg.log_progress = false;
  cfg.threads = 1;
  const SweepResult a = sweep_region(cfg);
  cfg.threads = 4;
  const SweepResult b = sweep_region(cfg);
  REQUIRE(a.rows[0].size() == b.rows[0].size());
  for (std::size_t k = 0; k < a.rows[0].size(); ++k) {
    CHECK(a.rows[0][k].e1 == b.rows[0][k].e1);
    CHECK(a.rows[0][k].e2 == b.rows[0][k].e2);
  }
  for (std::size_t k = 0; k < a.cells.size(); ++k)
    CHECK(a.cells[k].points[0][0].policy.w1 == b.cells[k].points[0][0].policy.w1);
}

TEST_CASE("failing cells are excluded with a count") {
  SweepConfig cfg;
  cfg.channel.n_t = 1;
  cfg.grid = {1.0, 5};
  cfg.weights = {0.5};
  cfg.p_x = {1e6};  // beyond the capped grid
  cfg.n_realizations = 2;
  cfg.log_progress = false;
  const SweepResult r = sweep_region(cfg);
  for (const CellResult& c : r.cells) {
    CHECK_FALSE(c.ok);
    CHECK_FALSE(c.error.empty());
  }
  for (const SweepRow& row : r.rows[0]) {
    CHECK(row.n_ok == 0);
    CHECK(row.e1 == 0.0);
  }
}
