#include <gtest/gtest.h>

#include "oracles.hpp"
#include "schrolab/weights.hpp"

using namespace schrolab;

TEST(Ap, ConstantWeightIsOne) {
  Domain d(2, 2.0, 16);
  const auto w = GridFunction::constant(d, 3.0);
  const auto rho = GridFunction::constant(d, 1.0);
  for (auto mode : {RegionMode::kAllBalls, RegionMode::kSubCritical, RegionMode::kCubes}) {
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
      const auto rep = ap_constant(w, p, 0.0, mode, rho, BallSampleSpec{});
      EXPECT_NEAR(rep.constant, 1.0, 1e-12) << to_string(mode) << " p = " << p;
    }
  }
}

TEST(Ap, TwoValuedWeightClosedForm) {
  // w = 1 on half of a ball and 4 on the other half; at p = 2 the ratio is
  // (avg(w) avg(1/w))^(1/2) over the in-ball cells.
  Domain d(1, 2.0, 64);
  const auto w = sample(d, [](const Point& x) { return x[0] < 0 ? 1.0 : 4.0; });
  const auto rho = GridFunction::constant(d, 10.0);
  const Ball b{{0.0, 0, 0}, 0.5};
  const auto ratios = ap_ratios(w, 2.0, RegionMode::kAllBalls, rho, {b});
  ASSERT_TRUE(ratios[0].used);
  EXPECT_NEAR(ratios[0].raw, std::sqrt(2.5 * 0.625), 1e-12);
  // At p = 1 the ratio is avg(w) / min(w).
  EXPECT_NEAR(ap_ratios(w, 1.0, RegionMode::kAllBalls, rho, {b})[0].raw, 2.5, 1e-12);
}

TEST(Ap, DampingIsMonotoneInTheta) {
  Domain d(2, 3.0, 16);
  const auto w = sample(d, [](const Point& x) { return std::pow(1.0 + norm(x, 2), 1.5); });
  const auto rho = sample(d, [](const Point& x) { return 1.0 / (1.0 + norm(x, 2)); });
  const auto balls = make_ball_sample(d, BallSampleSpec{});
  const auto ratios = ap_ratios(w, 2.0, RegionMode::kAllBalls, rho, balls);
  double prev = kInf;
  for (double theta : {0.0, 0.5, 1.0, 2.0}) {
    const double c = ap_from_ratios(balls, ratios, 2.0, theta, RegionMode::kAllBalls).constant;
    EXPECT_LE(c, prev);
    if (theta == 0.0) EXPECT_GE(c, 1.0 - 1e-12);
    prev = c;
  }
}

TEST(Ap, SubCriticalModeSkipsLargeBalls) {
  Domain d(2, 3.0, 16);
  const auto w = GridFunction::constant(d, 1.0);
  const auto rho = GridFunction::constant(d, 0.5);
  const auto balls = make_ball_sample(d, BallSampleSpec{});
  const auto ratios = ap_ratios(w, 2.0, RegionMode::kSubCritical, rho, balls);
  for (std::size_t i = 0; i < balls.size(); ++i)
    if (balls[i].radius > 0.5 * (1 + 1e-12)) EXPECT_FALSE(ratios[i].used);
}

TEST(MaximalFunction, MatchesBruteForce) {
  Domain d(2, 2.0, 12);
  Rng rng(3);
  std::vector<double> fv(d.size());
  for (auto& x : fv) x = rng.normal();
  const GridFunction f(d, fv);
  const auto rho = sample(d, [](const Point& x) { return 0.3 + 0.2 * std::abs(x[0]); });
  const MaximalProfile profile(f, rho);
  for (double theta : {0.0, 0.7, 2.0}) {
    const auto m = profile.evaluate(theta);
    for (std::size_t cell = 0; cell < d.size(); cell += 7) {
      const double ref = oracle::maximal_value(f, rho, theta, cell, profile.radii());
      EXPECT_NEAR(m[cell], ref, 1e-12 * std::max(1.0, ref)) << "cell " << cell << " theta " << theta;
    }
  }
}

TEST(MaximalFunction, PointwiseProperties) {
  Domain d(3, 2.0, 8);
  Rng rng(8);
  std::vector<double> fv(d.size());
  for (auto& x : fv) x = rng.normal();
  const GridFunction f(d, fv);
  const auto rho = GridFunction::constant(d, 0.5);
  const auto m0 = m_theta(f, rho, 0.0);
  const auto m1 = m_theta(f, rho, 1.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_GE(m1[i], std::abs(f[i]) - 1e-15);
    EXPECT_LE(m1[i], m0[i] + 1e-15);
  }
  const auto mc = m_theta(GridFunction::constant(d, 2.0), rho, 1.0);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(mc[i], 2.0, 1e-13);
}

TEST(LevelSet, CountsCells) {
  Domain d(1, 1.0, 10);
  const auto g = sample(d, [](const Point& x) { return x[0]; });
  EXPECT_NEAR(level_set_measure(g, 0.0), 5 * d.cell_volume(), 1e-15);
  EXPECT_NEAR(level_set_measure(g, 0.5), 2 * d.cell_volume(), 1e-15);
  EXPECT_EQ(level_set_measure(g, 2.0), 0.0);
}

TEST(A1Weight, InheritsTheA1Bound) {
  Domain d(2, 2.0, 16);
  const auto rho = sample(d, [](const Point& x) { return 1.0 / (1.0 + norm(x, 2)); });
  auto g = std::vector<double>(d.size(), 0.0);
  g[d.locate(Point{0.3, -0.4, 0})] = 1.0 / d.cell_volume();
  const GridFunction source(d, g);
  BallSampleSpec spec;
  spec.centers = 60;
  spec.radii = 10;
  const auto balls = make_ball_sample(d, spec);
  const auto built = build_a1_weight(source, rho, 1.0, 0.5, balls, 64.0);
  EXPECT_GT(built.weight.min(), 0.0);
  EXPECT_TRUE(built.beta_fit.feasible);
  // The zero-violation fit reproduces the sampled avg/inf envelope.
  for (const auto& s : a1_samples(built.weight, rho, balls))
    EXPECT_LE(s.ratio, built.beta_fit.constant * std::pow(s.base, built.beta_fit.exponent) * (1 + 1e-12));
  EXPECT_THROW(build_a1_weight(source, rho, 1.0, 1.0, balls), PreconditionError);
  EXPECT_THROW(build_a1_weight(GridFunction::constant(d, 0.0), rho, 1.0, 0.5, balls), PreconditionError);
}

TEST(A1Weight, MaximalDominationFit) {
  Domain d(2, 2.0, 16);
  const auto rho = GridFunction::constant(d, 0.5);
  const auto u = GridFunction::constant(d, 1.5);
  const auto fit = fit_maximal_domination(u, rho, ExponentLattice{0.0, 0.25, 4.0}, 2.0);
  ASSERT_TRUE(fit.feasible);
  EXPECT_EQ(fit.theta, 0.0);
  EXPECT_NEAR(fit.constant, 1.0, 1e-12);
}

TEST(Openness, ConstantWeightAdmitsEverything) {
  Domain d(2, 2.0, 16);
  const auto w = GridFunction::constant(d, 1.0);
  const auto rho = GridFunction::constant(d, 1.0);
  const auto balls = make_ball_sample(d, BallSampleSpec{});
  const auto scan = openness_scan(w, 2.0, 0.0, RegionMode::kAllBalls, rho, {0.05, 0.1, 0.4}, 64.0, balls);
  ASSERT_EQ(scan.rows.size(), 3u);
  for (const auto& row : scan.rows) EXPECT_TRUE(row.admissible);
  EXPECT_EQ(scan.largest_epsilon, 0.4);
}

TEST(PowerCheck, ConstantIsA1EveryPower) {
  Domain d(2, 2.0, 16);
  const auto u = GridFunction::constant(d, 2.0);
  const auto rho = GridFunction::constant(d, 1.0);
  const auto balls = make_ball_sample(d, BallSampleSpec{});
  const auto check = a1_power_check(u, rho, {1.0, 2.0, 3.0}, {0.0, 1.0}, 4.0, balls);
  for (const auto& row : check.rows) EXPECT_TRUE(row.admissible);
  EXPECT_EQ(check.largest_nu, 3.0);
}
