#include <gtest/gtest.h>

#include <cmath>

#include "infoflow/granger.hpp"
#include "infoflow/stats.hpp"
#include "infoflow/synth.hpp"
#include "oracles.hpp"

using namespace infoflow;
using Eigen::VectorXd;

namespace {

CouplingSpec driven_pair(double a, double b, std::uint64_t seed, double var_y = 1.0) {
  CouplingSpec spec;
  spec.n_vars = 2;
  spec.couplings = {{1, 1, 1, a}, {0, 1, 1, b}};
  spec.noise_variances = Eigen::Vector2d(1.0, var_y);
  spec.seed = seed;
  spec.labels = {"X", "Y"};
  return spec;
}

CouplingSpec white(int n, std::uint64_t seed) {
  CouplingSpec spec;
  spec.n_vars = n;
  spec.noise_variances = VectorXd::Ones(n);
  spec.seed = seed;
  return spec;
}

// ln(RSS_reduced / RSS_full) by an independent least-squares route.
double oracle_f(const VectorXd& x, const VectorXd& y, int p) {
  const VectorXd future = y.tail(y.size() - p);
  const Eigen::MatrixXd own = oracle::lags(y, p);
  Eigen::MatrixXd full(own.rows(), 2 * p);
  full << own, oracle::lags(x, p);
  return std::log(oracle::rss(future, own) / oracle::rss(future, full));
}

}  // namespace

TEST(Embed, RowLayout) {
  VectorXd x(5);
  x << 1, 2, 3, 4, 5;
  const auto m = embed(x, 2);
  // rows line up with the futures x[2..4]
  ASSERT_EQ(m.rows(), 3);
  ASSERT_EQ(m.cols(), 2);
  EXPECT_EQ(m(0, 0), 2);
  EXPECT_EQ(m(0, 1), 1);
  EXPECT_EQ(m(2, 0), 4);
  EXPECT_EQ(m(2, 1), 3);
}

TEST(FitVar, RecoversCoefficients) {
  const auto panel = gen_var(driven_pair(0.5, 0.9, 1), 100000);
  const VectorXd x = panel.values.col(0);
  const VectorXd y = panel.values.col(1);
  const SeriesRef xr(x);
  const VarFit fit = fit_var(y, &xr, 1, 1);
  ASSERT_EQ(fit.coefficients.size(), 2);
  EXPECT_NEAR(fit.coefficients(0), 0.5, 0.01);
  EXPECT_NEAR(fit.coefficients(1), 0.9, 0.01);
  EXPECT_NEAR(fit.residual_variance, 1.0, 0.02);
  EXPECT_EQ(fit.sample_count, 100000 - 1);
}

TEST(PairwiseGc, MatchesAnalyticValue) {
  const auto spec = driven_pair(0.5, 0.9, 2);
  EXPECT_NEAR(analytic_var_gc(spec, 0, 1), 0.5933268452777344, 1e-15);
  const auto panel = gen_var(spec, 200000);
  const GcEdge e = pairwise_gc(panel.values.col(0), panel.values.col(1), 1, 1, 0.01);
  EXPECT_NEAR(e.f_value, std::log(1.81), 0.015);
  EXPECT_TRUE(e.significant);
  EXPECT_LT(e.p_value, 1e-100);
}

TEST(PairwiseGc, ReverseDirectionIsNull) {
  const auto panel = gen_var(driven_pair(0.5, 0.9, 3), 50000);
  const GcEdge e = pairwise_gc(panel.values.col(1), panel.values.col(0), 1, 1, 0.01);
  EXPECT_LT(e.f_value, 5e-4);
}

TEST(PairwiseGc, AgreesWithLeastSquaresOracle) {
  for (int p = 1; p <= 4; ++p) {
    const auto panel = gen_var(driven_pair(0.3, 0.2, 10 + p), 5000);
    const VectorXd x = panel.values.col(0);
    const VectorXd y = panel.values.col(1);
    const GcEdge e = pairwise_gc(x, y, p, p, 0.01);
    EXPECT_NEAR(e.f_value, std::max(0.0, oracle_f(x, y, p)), 1e-10) << p;
  }
}

TEST(PairwiseGc, TransferEntropyIsHalfF) {
  for (int p = 1; p <= 3; ++p) {
    const auto panel = gen_var(driven_pair(0.5, 0.4, 20 + p), 20000);
    const GcEdge e = pairwise_gc(panel.values.col(0), panel.values.col(1), p, p, 0.01);
    const double te = transfer_entropy_gaussian(panel.values.col(0), panel.values.col(1), p);
    EXPECT_NEAR(e.f_value, 2 * te, 1e-9) << p;
  }
}

TEST(PairwiseGc, ScaleInvariant) {
  const auto panel = gen_var(driven_pair(0.5, 0.3, 5), 10000);
  const VectorXd x = panel.values.col(0);
  const VectorXd y = panel.values.col(1);
  const double base = pairwise_gc(x, y, 2, 2, 0.01).f_value;
  for (double c : {1e-3, 1e3}) {
    EXPECT_NEAR(pairwise_gc(c * x, y, 2, 2, 0.01).f_value, base, 1e-9);
    EXPECT_NEAR(pairwise_gc(x, c * y, 2, 2, 0.01).f_value, base, 1e-9);
  }
}

TEST(PairwiseGcProperty, NonNegativeOnIndependentNoise) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto panel = gen_var(white(2, 100 + seed), 2000);
    const GcEdge e = pairwise_gc(panel.values.col(0), panel.values.col(1), 1 + seed % 3,
                                 1 + seed % 3, 0.01);
    EXPECT_GE(e.f_value, 0.0);
    EXPECT_GE(e.p_value, 0.0);
    EXPECT_LE(e.p_value, 1.0);
  }
}

TEST(PairwiseGc, Errors) {
  const VectorXd c = VectorXd::Constant(100, 3.0);
  const VectorXd r = VectorXd::LinSpaced(100, 0, 1).array().sin();
  EXPECT_THROW(pairwise_gc(c, r, 1, 1, 0.01), DegenerateError);
  EXPECT_THROW(pairwise_gc(r, c, 1, 1, 0.01), DegenerateError);
  EXPECT_THROW(pairwise_gc(r.head(12), r.head(12), 2, 2, 0.01), std::invalid_argument);
  EXPECT_THROW(pairwise_gc(r, r.head(50), 1, 1, 0.01), std::invalid_argument);
}

TEST(Bic, SelectsTrueOrder) {
  CouplingSpec spec = white(1, 9);
  spec.couplings = {{0, 0, 1, 0.4}, {0, 0, 2, 0.3}};
  const auto panel = gen_var(spec, 20000);
  EXPECT_EQ(select_order_bic(panel.values.col(0), nullptr, 10), 2);
}

TEST(Bic, WhiteNoiseGivesOrderOne) {
  const auto panel = gen_var(white(2, 4), 10080);
  const VectorXd x = panel.values.col(0);
  const SeriesRef xr(x);
  EXPECT_EQ(select_order_bic(panel.values.col(1), &xr, 20), 1);
}

TEST(Bic, RejectsLargeOrder) {
  const auto panel = gen_var(white(1, 4), 1000);
  EXPECT_THROW(select_order_bic(panel.values.col(0), nullptr, 250), std::invalid_argument);
  EXPECT_THROW(select_order_bic(panel.values.col(0), nullptr, 0), std::invalid_argument);
}

TEST(GcMatrix, ChainNetwork) {
  CouplingSpec spec = white(3, 12);
  spec.couplings = {{0, 1, 1, 0.5}, {1, 2, 1, 0.5}};
  const auto panel = gen_var(spec, 10080);
  const GcNetwork net = gc_matrix(panel, GcConfig{5, 0.01});
  ASSERT_EQ(net.adjacency.size(), 3);
  EXPECT_EQ(net.edges.size(), 6u);
  EXPECT_GT(net.adjacency.weights(0, 1), 0.1);
  EXPECT_GT(net.adjacency.weights(1, 2), 0.1);
  EXPECT_TRUE((net.adjacency.weights.diagonal().array() == 0).all());
  EXPECT_TRUE((net.adjacency.weights.array() >= 0).all());
  for (const auto& e : net.edges) {
    const auto i = e.source == "X0" ? 0 : e.source == "X1" ? 1 : 2;
    const auto j = e.target == "X0" ? 0 : e.target == "X1" ? 1 : 2;
    EXPECT_EQ(net.adjacency.weights(i, j), e.significant ? e.f_value : 0.0);
  }
  EXPECT_EQ(top_out_strength(net.adjacency), "X0");
}

TEST(GcMatrix, ExcludesInactiveAndConstantColumns) {
  auto panel = gen_var(white(4, 13), 2000);
  panel.active[1] = false;
  panel.values.col(1).setConstant(std::nan(""));
  panel.values.col(3).setConstant(1.0);
  const GcNetwork net = gc_matrix(panel);
  EXPECT_EQ(net.adjacency.labels, (std::vector<std::string>{"X0", "X2"}));
  EXPECT_EQ(net.excluded, (std::vector<std::string>{"X1", "X3"}));
  ASSERT_FALSE(net.diagnostics.empty());
  EXPECT_EQ(net.diagnostics[0].code, "degenerate_column");
}

TEST(GcMatrix, TooFewColumns) {
  auto panel = gen_var(white(2, 14), 2000);
  panel.values.col(1).setConstant(2.0);
  const GcNetwork net = gc_matrix(panel);
  EXPECT_EQ(net.adjacency.size(), 1);
  EXPECT_TRUE(net.edges.empty());
  EXPECT_EQ(net.diagnostics.back().code, "too_few_columns");
}

TEST(Stats, ChiSquareSurvival) {
  EXPECT_NEAR(chi2_survival(3.841458820694124, 1), 0.05, 1e-12);
  EXPECT_NEAR(chi2_survival(0.0, 3), 1.0, 1e-15);
  EXPECT_NEAR(chi2_survival(9.21034037197618, 2), 0.01, 1e-12);
}
