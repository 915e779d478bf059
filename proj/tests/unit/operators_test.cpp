#include <gtest/gtest.h>

#include "oracles.hpp"
#include "schrolab/geometry.hpp"
#include "schrolab/operators.hpp"

using namespace schrolab;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

double dot(std::span<const double> a, std::span<const double> b) {
  CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
  return s.value();
}

GridFunction hermite(const Domain& d) { return Potential::hermite(d.dim()).sample(d); }

}  // namespace

TEST(Schrodinger, MatrixMatchesStencilOracle) {
  for (int dim : {1, 2, 3}) {
    Domain d(dim, 2.0, dim == 3 ? 6 : 10);
    const auto v = hermite(d);
    const auto op = assemble_schrodinger(v);
    EXPECT_TRUE(op.symmetric);
    EXPECT_LT((op.matrix - oracle::schrodinger_matrix(v)).cwiseAbs().maxCoeff(), 1e-13 * op.matrix.cwiseAbs().maxCoeff())
        << "d = " << dim;
  }
}

TEST(Schrodinger, StaggeredGradientReproducesLaplacian) {
  Domain d(2, 1.5, 8);
  const auto zero = GridFunction::constant(d, 0.0);
  const Matrix lap = oracle::schrodinger_matrix(zero);
  Rng rng(2);
  const auto f = random_vector(rng, d.size());
  double grad = 0.0;
  for (int j = 0; j < 2; ++j)
    for (double g : face_gradient(d, j, f)) grad += g * g;
  const Eigen::Map<const Vector> fv(f.data(), static_cast<Eigen::Index>(f.size()));
  EXPECT_NEAR(grad, fv.dot(lap * fv), 1e-10 * grad);
  EXPECT_EQ(face_gradient(d, 0, f).size(), face_count(d));
}

TEST(Riesz, InverseSqrtMatchesOracle) {
  Domain d(2, 2.0, 8);
  const auto v = hermite(d);
  const auto r = build_riesz(v);
  const Eigen::MatrixXd ref = oracle::inverse_sqrt(oracle::schrodinger_matrix(v));
  EXPECT_LT((r->inverse_sqrt() - ref).cwiseAbs().maxCoeff(), 1e-10 * ref.cwiseAbs().maxCoeff());
  EXPECT_GT(r->min_eigenvalue(), 0.0);
}

TEST(Riesz, ComponentsAreCentralDifferences) {
  Domain d(2, 2.0, 8);
  const auto v = hermite(d);
  const auto r = build_riesz(v);
  const Eigen::MatrixXd s = oracle::inverse_sqrt(oracle::schrodinger_matrix(v));
  const double h = d.spacing();
  for (int j = 0; j < 2; ++j) {
    double worst = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      Eigen::RowVectorXd expect = Eigen::RowVectorXd::Zero(s.cols());
      for (std::size_t m = 0; m < d.size(); ++m) {
        const Point ci = d.center(i);
        const Point cm = d.center(m);
        bool same_line = true;
        for (int a = 0; a < 2; ++a)
          if (a != j && std::abs(ci[a] - cm[a]) > 1e-12) same_line = false;
        if (!same_line) continue;
        if (std::abs(cm[j] - ci[j] - h) < 1e-12) expect += s.row(static_cast<Eigen::Index>(m)) / (2 * h);
        if (std::abs(cm[j] - ci[j] + h) < 1e-12) expect -= s.row(static_cast<Eigen::Index>(m)) / (2 * h);
      }
      worst = std::max(worst, (r->component(j).row(static_cast<Eigen::Index>(i)) - expect).cwiseAbs().maxCoeff());
    }
    EXPECT_LT(worst, 1e-10);
  }
}

TEST(Riesz, EnergyIdentity) {
  for (int dim : {1, 2, 3}) {
    Domain d(dim, 2.0, dim == 3 ? 6 : 12);
    const auto r = build_riesz(hermite(d));
    Rng rng(10 + dim);
    for (int trial = 0; trial < 5; ++trial) {
      const auto f = random_vector(rng, d.size());
      const auto e = r->energy(f);
      EXPECT_NEAR(e.gradient + e.potential, e.input, 1e-10 * e.input);
      EXPECT_GE(e.gradient, 0.0);
      EXPECT_GE(e.potential, 0.0);
    }
  }
}

TEST(Riesz, AdjointPairing) {
  Domain d(2, 2.0, 8);
  const auto r = build_riesz(hermite(d));
  Rng rng(5);
  const auto f = random_vector(rng, d.size());
  const auto g = random_vector(rng, d.size() * 2);
  EXPECT_NEAR(dot(r->apply(f), g), dot(f, r->apply_adjoint(g)), 1e-12 * d.size());
  const auto block = riesz_block(*r);
  const auto via_block = block.apply(f);
  const auto direct = r->apply(f);
  for (std::size_t i = 0; i < direct.size(); ++i) EXPECT_NEAR(via_block[i], direct[i], 1e-13);
  const auto adj = riesz_adjoint_block(*r).apply(g);
  const auto adj_direct = r->apply_adjoint(g);
  for (std::size_t i = 0; i < adj.size(); ++i) EXPECT_NEAR(adj[i], adj_direct[i], 1e-13);
}

TEST(Riesz, KernelScaling) {
  Domain d(2, 2.0, 8);
  const auto r = build_riesz(hermite(d));
  const Matrix k = kernel_matrix(*r, 1);
  EXPECT_LT((k * d.cell_volume() - r->component(1)).cwiseAbs().maxCoeff(), 1e-14 * r->max_abs_entry());
}

TEST(Commutator, MatchesDefinition) {
  Domain d(2, 2.0, 8);
  const auto r = build_riesz(hermite(d));
  const auto b = sample(d, [](const Point& x) { return x[0] * x[0] - 0.5 * x[1]; });
  Eigen::VectorXd bv(static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) bv(static_cast<Eigen::Index>(i)) = b[i];
  for (int j = 0; j < 2; ++j) {
    const Matrix& rj = r->component(j);
    const Matrix expect = rj * bv.asDiagonal() - bv.asDiagonal() * rj;
    EXPECT_LT((commutator_component(rj, b) - expect).cwiseAbs().maxCoeff(), 1e-12 * rj.cwiseAbs().maxCoeff() * 4);
  }
  const auto c = commutator(*r, b);
  EXPECT_EQ(c.out_components, 2);
  EXPECT_EQ(c.in_components, 1);
}

TEST(Commutator, ConstantSymbolVanishes) {
  Domain d(2, 2.0, 8);
  const auto r = build_riesz(hermite(d));
  const auto c = commutator(*r, GridFunction::constant(d, 3.25));
  EXPECT_LT(c.max_abs_entry(), 1e-13 * r->max_abs_entry());
}

TEST(Commutator, AdjointIsMinusTranspose) {
  Domain d(2, 2.0, 8);
  const auto r = build_riesz(hermite(d));
  const auto b = sample(d, [](const Point& x) { return std::abs(x[0]); });
  const auto c = commutator(*r, b);
  const auto a = adjoint_commutator(*r, b);
  ASSERT_EQ(a.in_components, 2);
  ASSERT_EQ(a.out_components, 1);
  for (int j = 0; j < 2; ++j)
    EXPECT_LT((a.block(0, j) + c.block(j, 0).transpose()).cwiseAbs().maxCoeff(), 1e-13 * r->max_abs_entry() * 8);
  // Operator form: (R*)_b g = R*(b g) - b R* g.
  Rng rng(14);
  const auto g = random_vector(rng, d.size() * 2);
  std::vector<double> bg(g);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (int j = 0; j < 2; ++j) bg[i * 2 + j] *= b[i];
  const auto first = r->apply_adjoint(bg);
  const auto second = r->apply_adjoint(g);
  const auto got = a.apply(g);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(got[i], first[i] - b[i] * second[i], 1e-12);
}

TEST(LocGlob, SplitIsExact) {
  Domain d(2, 2.0, 8);
  const auto r = build_riesz(hermite(d));
  const auto rho = sample(d, [](const Point& x) { return 0.4 + 0.3 * std::abs(x[0]); });
  const Matrix& t = r->component(0);
  const auto s = loc_glob_split(t, rho);
  EXPECT_EQ((s.local + s.global - t).cwiseAbs().maxCoeff(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t m = 0; m < d.size(); ++m) {
      const bool near = distance(d.center(i), d.center(m), 2) < rho[i];
      const auto ii = static_cast<Eigen::Index>(i);
      const auto mm = static_cast<Eigen::Index>(m);
      if (near) {
        EXPECT_EQ(s.global(ii, mm), 0.0);
      } else {
        EXPECT_EQ(s.local(ii, mm), 0.0);
      }
    }
  }
  const auto c = commutator(*r, sample(d, [](const Point& x) { return x[1]; }));
  const auto loc = restrict_block(c, rho, true);
  const auto glob = restrict_block(c, rho, false);
  for (int j = 0; j < 2; ++j)
    EXPECT_EQ((loc.block(j, 0) + glob.block(j, 0) - c.block(j, 0)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(BlockOperator, IdentityApplies) {
  Domain d(1, 1.0, 6);
  const auto id = identity_operator(d);
  const std::vector<double> f{1, 2, 3, 4, 5, 6};
  EXPECT_EQ(id.apply(f), f);
}
