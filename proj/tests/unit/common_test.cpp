#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>

#include "schrolab/common.hpp"

using namespace schrolab;

TEST(Rng, ReproducibleStream) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  Rng c(43);
  EXPECT_NE(Rng(42).next(), c.next());
}

TEST(Rng, UniformAndIndexRanges) {
  Rng r(5);
  double mean = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    mean += u;
    ASSERT_LT(r.index(7), 7u);
  }
  EXPECT_NEAR(mean / 20000, 0.5, 0.01);
}

TEST(Rng, NormalMoments) {
  Rng r(9);
  double s = 0.0;
  double s2 = 0.0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.02);
  EXPECT_NEAR(s2 / n, 1.0, 0.03);
}

TEST(CompensatedSum, RecoversCancellation) {
  std::vector<double> v{1e16, 1.0, -1e16, 1.0};
  EXPECT_EQ(compensated_sum(v), 2.0);
}

TEST(ParallelFor, VisitsEachIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, ResultIndependentOfThreadCount) {
  auto run = [] {
    std::vector<double> out(257);
    parallel_for(out.size(), [&](std::size_t i) { out[i] = std::sin(static_cast<double>(i)); });
    return out;
  };
  setenv("SCHROLAB_THREADS", "1", 1);
  const auto one = run();
  setenv("SCHROLAB_THREADS", "3", 1);
  const auto three = run();
  unsetenv("SCHROLAB_THREADS");
  EXPECT_EQ(one, three);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, [](std::size_t i) {
                 if (i == 7) throw PreconditionError("boom");
               }),
               PreconditionError);
}

TEST(LogGrid, EndpointsAndDensity) {
  const auto g = log_grid(0.1, 10.0, 4);
  ASSERT_EQ(g.size(), 9u);
  EXPECT_EQ(g.front(), 0.1);
  EXPECT_EQ(g.back(), 10.0);
  for (std::size_t k = 1; k < g.size(); ++k) EXPECT_NEAR(g[k] / g[k - 1], std::pow(10.0, 0.25), 1e-12);
}

TEST(SnapUp, LatticeAndMonotone) {
  EXPECT_EQ(snap_up_log2(1.0), 1.0);
  EXPECT_EQ(snap_up_log2(2.0), 2.0);
  EXPECT_NEAR(snap_up_log2(1.1), std::exp2(0.25), 1e-15);
  for (double v = 0.01; v < 100.0; v *= 1.37) EXPECT_GE(snap_up_log2(v), v);
}

TEST(Envelope, SmallestExponentUnderCap) {
  // ratio = base^2 exactly: with cap 1 the fit must land on exponent 2.
  std::vector<EnvelopeSample> s;
  for (double b = 1.0; b <= 16.0; b *= 2.0) s.push_back({b, b * b});
  const auto fit = fit_envelope(s, ExponentLattice{0.0, 0.25, 6.0}, 1.0);
  ASSERT_TRUE(fit.feasible);
  EXPECT_EQ(fit.exponent, 2.0);
  EXPECT_EQ(fit.constant, 1.0);
  EXPECT_EQ(count_envelope_violations(s, fit.exponent, fit.constant), 0u);
}

TEST(Envelope, InfeasibleReported) {
  std::vector<EnvelopeSample> s{{1.0, 10.0}};
  const auto fit = fit_envelope(s, ExponentLattice{0.0, 0.5, 2.0}, 4.0);
  EXPECT_FALSE(fit.feasible);
}

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}
