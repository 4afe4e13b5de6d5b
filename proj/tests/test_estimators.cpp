#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "infoflow/estimators.hpp"
#include "infoflow/oinfo.hpp"
#include "infoflow/rng.hpp"
#include "oracles.hpp"

using namespace infoflow;
using Eigen::Matrix2d;
using Eigen::Matrix3d;
using Eigen::MatrixXd;

namespace {

const Subset k0{0}, k1{1}, k2{2}, k01{0, 1}, k012{0, 1, 2};

Matrix3d sigma_a() {
  Matrix3d m;
  m << 1, 0, 1, 0, 1, 1, 1, 1, 3;
  return m;
}

Matrix3d sigma_b() {
  Matrix3d m;
  m << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  return m;
}

}  // namespace

TEST(Entropy, UnitVarianceScalar) {
  const MatrixXd one = MatrixXd::Identity(1, 1);
  EXPECT_NEAR(gaussian_entropy(one, k0), 1.4189385332046727, 1e-12);
  EXPECT_NEAR(gaussian_entropy(one, k0), 0.5 * std::log(2 * std::numbers::pi * std::numbers::e),
              1e-15);
}

TEST(Entropy, IdentityTwoDims) {
  EXPECT_NEAR(gaussian_entropy(Matrix2d::Identity(), k01), 2.8378770664093453, 1e-12);
}

TEST(Entropy, DeterminantThree) {
  Matrix2d m;
  m << 2, 1, 1, 2;
  EXPECT_NEAR(gaussian_entropy(m, k01), 3.3871832107434, 1e-12);
}

TEST(Entropy, AgreesWithEigenvalueRoute) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = 1 + trial % 8;
    const MatrixXd cov = oracle::random_spd(gen, d);
    const auto s = oracle::iota(d);
    EXPECT_NEAR(gaussian_entropy(cov, s), oracle::entropy(cov, s), 1e-10);
  }
}

TEST(MutualInformation, CorrelationHalf) {
  Matrix2d m;
  m << 1, 0.5, 0.5, 1;
  EXPECT_NEAR(mutual_information(m, k0, k1), 0.14384103622589045, 1e-12);
  EXPECT_NEAR(mutual_information(m, k0, k1), -0.5 * std::log(0.75), 1e-12);
}

TEST(MutualInformation, Symmetric) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    const MatrixXd cov = oracle::random_spd(gen, 5);
    const Subset a{0, 3}, b{1, 2, 4};
    EXPECT_NEAR(mutual_information(cov, a, b), mutual_information(cov, b, a), 1e-12);
    EXPECT_GE(mutual_information(cov, a, b), 0.0);
  }
}

TEST(MutualInformation, RejectsOverlap) {
  EXPECT_THROW(mutual_information(Matrix2d::Identity(), k01, k1), std::invalid_argument);
}

TEST(ConditionalMi, ExampleMatrix) {
  // I(X0; X1 | X2) on sigma_a
  EXPECT_NEAR(conditional_mi(sigma_a(), k0, k1, k2), 0.14384103622588995, 1e-12);
}

TEST(ConditionalMi, EmptyConditionIsMutualInformation) {
  const Subset none;
  EXPECT_DOUBLE_EQ(conditional_mi(sigma_b(), k0, k1, none), mutual_information(sigma_b(), k0, k1));
}

TEST(ConditionalMi, ChainRule) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    const MatrixXd cov = oracle::random_spd(gen, 6);
    const Subset a{0}, b{1, 2}, c{3, 4}, bc{1, 2, 3, 4};
    const double lhs = mutual_information(cov, a, bc);
    const double rhs = mutual_information(cov, a, c) + conditional_mi(cov, a, b, c);
    EXPECT_NEAR(lhs, rhs, 1e-10);
  }
}

TEST(TotalCorrelation, Examples) {
  EXPECT_NEAR(total_correlation(sigma_a(), k012), 0.5493061443340546, 1e-12);
  EXPECT_NEAR(dual_total_correlation(sigma_a(), k012), 0.6931471805599445, 1e-12);
  EXPECT_NEAR(total_correlation(sigma_b(), k012), 0.3465735902799718, 1e-12);
  EXPECT_NEAR(dual_total_correlation(sigma_b(), k012), 0.261624071882272, 1e-12);
}

TEST(OInformation, Examples) {
  EXPECT_NEAR(o_information(sigma_a(), k012), -0.14384103622588995, 1e-9);
  EXPECT_NEAR(o_information(sigma_b(), k012), 0.08494951839769982, 1e-9);
  EXPECT_LT(o_information(sigma_a(), k012), 0.0);
  EXPECT_GT(o_information(sigma_b(), k012), 0.0);
}

TEST(OInformation, PairIsExactlyZero) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 100; ++trial) {
    const MatrixXd cov = oracle::random_spd(gen, 4);
    for (Index i = 0; i < 4; ++i)
      for (Index j = i + 1; j < 4; ++j) {
        const Subset s{i, j};
        EXPECT_EQ(o_information(cov, s), 0.0);
      }
  }
}

TEST(OInformation, IndependentVariablesGiveZero) {
  EXPECT_NEAR(o_information(Matrix3d::Identity(), k012), 0.0, 1e-14);
  EXPECT_NEAR(total_correlation(Matrix3d::Identity(), k012), 0.0, 1e-14);
}

TEST(OInformation, MatchesEigenvalueOracle) {
  std::mt19937_64 gen(19);
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = 3 + trial % 6;
    const MatrixXd cov = oracle::random_spd(gen, d);
    const auto s = oracle::iota(d);
    EXPECT_NEAR(o_information(cov, s), oracle::o_information(cov, s), 1e-9);
  }
}

TEST(OInformation, PermutationInvariant) {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 100; ++trial) {
    const MatrixXd cov = oracle::random_spd(gen, 5);
    Subset s{0, 1, 2, 3, 4};
    const double base = o_information(cov, s);
    std::shuffle(s.begin(), s.end(), gen);
    EXPECT_NEAR(o_information(cov, s), base, 1e-10);
  }
}

TEST(OInformation, DiagonalRescalingInvariant) {
  std::mt19937_64 gen(29);
  std::uniform_real_distribution<double> log_scale(-6, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const MatrixXd cov = oracle::random_spd(gen, 4);
    Eigen::VectorXd c(4);
    for (Index i = 0; i < 4; ++i) c(i) = std::pow(10.0, log_scale(gen) / 2);
    const MatrixXd scaled = c.asDiagonal() * cov * c.asDiagonal();
    const Subset s{0, 1, 2, 3};
    EXPECT_NEAR(o_information(scaled, s), o_information(cov, s), 1e-9);
    EXPECT_NEAR(total_correlation(scaled, s), total_correlation(cov, s), 1e-9);
  }
}

TEST(DeltaY, Examples) {
  EXPECT_NEAR(delta_y(sigma_a(), k01, 2), -0.14384103622588995, 1e-12);
  EXPECT_NEAR(delta_y(sigma_b(), k01, 2), 0.08494951839769982, 1e-12);
}

TEST(DeltaY, DecompositionIdentity) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 300; ++trial) {
    const Index d = 3 + trial % 6;
    const MatrixXd cov = oracle::random_spd(gen, d);
    Subset sources = oracle::iota(d - 1);
    Subset all = oracle::iota(d);
    const double omega_s = sources.size() >= 2 ? o_information(cov, sources) : 0.0;
    EXPECT_NEAR(o_information(cov, all), omega_s + delta_y(cov, sources, d - 1), 1e-9);
  }
}

TEST(TotalCorrelation, NonNegative) {
  std::mt19937_64 gen(37);
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = 2 + trial % 7;
    const MatrixXd cov = oracle::random_spd(gen, d);
    const auto s = oracle::iota(d);
    EXPECT_GE(total_correlation(cov, s), 0.0);
    EXPECT_GE(dual_total_correlation(cov, s), 0.0);
  }
}

TEST(Covariance, ThreeCollinearPoints) {
  MatrixXd data(3, 2);
  data << 0, 0, 1, 1, 2, 2;
  const auto m = estimate_covariance(data, {}, RidgePolicy{0.0, 1e300});
  EXPECT_NEAR(m.matrix(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(m.matrix(0, 1), 1.0, 1e-15);
  EXPECT_NEAR(m.matrix(1, 1), 1.0, 1e-15);
  EXPECT_EQ(m.sample_count, 3);
}

TEST(Covariance, SingularGetsRidge) {
  MatrixXd data(3, 2);
  data << 0, 0, 1, 1, 2, 2;
  const auto m = estimate_covariance(data);
  EXPECT_GT(m.ridge_applied, 0.0);
  EXPECT_NEAR(m.ridge_applied, 1e-8, 1e-20);
  EXPECT_NO_THROW(log_det(m.matrix, k01));
}

TEST(Covariance, ConstantColumnIsDegenerate) {
  MatrixXd data(5, 2);
  data << 1, 3, 2, 3, 3, 3, 4, 3, 5, 3;
  try {
    estimate_covariance(data, {"a", "b"});
    FAIL() << "expected DegenerateError";
  } catch (const DegenerateError& e) {
    EXPECT_EQ(e.variable(), "b");
  }
}

TEST(Covariance, Preconditions) {
  MatrixXd few(2, 2);
  few << 1, 2, 3, 4;
  EXPECT_THROW(estimate_covariance(few), std::invalid_argument);
  MatrixXd bad(4, 1);
  bad << 1, std::nan(""), 2, 3;
  EXPECT_THROW(estimate_covariance(bad), std::invalid_argument);
}

TEST(LogDet, SingularBlockThrows) {
  Matrix2d m;
  m << 1, 1, 1, 1;
  EXPECT_THROW(log_det(m, k01), DegenerateError);
}

TEST(MonteCarlo, SampleMutualInformationConverges) {
  Xoshiro256 rng(2024);
  const Index n = 200000;
  MatrixXd data(n, 2);
  const double rho = 0.5;
  for (Index t = 0; t < n; ++t) {
    const double a = rng.normal();
    const double b = rng.normal();
    data(t, 0) = a;
    data(t, 1) = rho * a + std::sqrt(1 - rho * rho) * b;
  }
  const auto m = estimate_covariance(data);
  // sd of the MI estimator ~ rho / sqrt(n)
  EXPECT_NEAR(mutual_information(m, k0, k1), 0.14384103622589045, 5e-3);
}
