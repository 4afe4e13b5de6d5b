#ifndef INFOFLOW_ESTIMATORS_HPP
#define INFOFLOW_ESTIMATORS_HPP

// Gaussian (linear) information-theoretic estimators.
//
// Every quantity is derived from log-determinants of covariance sub-blocks,
// so all functions operate on a symmetric positive definite matrix plus index
// subsets into it. Results are in nats.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infoflow/error.hpp"

namespace infoflow {

using Index = Eigen::Index;
using Subset = std::vector<Index>;

// Values within this distance below zero are rounding noise and get clamped.
inline constexpr double kClampTolerance = 1e-10;
// Tolerance for the two algebraic forms of the O-information to agree.
inline constexpr double kFormAgreementTolerance = 1e-9;

struct RidgePolicy {
  double lambda = 1e-8;
  double condition_threshold = 1e10;
};

template <typename Scalar>
struct CovModel {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  std::vector<std::string> labels;
  Matrix matrix;
  Index sample_count = 0;
  Scalar ridge_applied = 0;

  Index dim() const { return matrix.rows(); }

  Index index_of(std::string_view label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
      throw std::invalid_argument("unknown variable '" + std::string(label) + "'");
    }
    return static_cast<Index>(it - labels.begin());
  }
};

using CovModeld = CovModel<double>;

namespace detail {

inline std::string default_label(Index i) { return "v" + std::to_string(i); }

inline void require_disjoint(std::span<const Index> a, std::span<const Index> b,
                             const char* what) {
  for (Index i : a) {
    if (std::find(b.begin(), b.end(), i) != b.end()) {
      throw std::invalid_argument(std::string(what) + ": subsets overlap");
    }
  }
}

inline Subset join(std::span<const Index> a, std::span<const Index> b) {
  Subset out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline Subset without(std::span<const Index> s, std::size_t k) {
  Subset out;
  out.reserve(s.size() - 1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i != k) out.push_back(s[i]);
  }
  return out;
}

template <typename Scalar>
Scalar clamp_nonnegative(Scalar value, const char* what) {
  if (value >= Scalar(0)) return value;
  if (value >= Scalar(-kClampTolerance)) return Scalar(0);
  throw ConsistencyError(std::string(what) + " is negative beyond rounding: " +
                         std::to_string(static_cast<double>(value)));
}

}  // namespace detail

// Condition number (ratio of extreme eigenvalues) of a symmetric matrix.
// Returns +inf when the smallest eigenvalue is not positive.
template <typename Derived>
typename Derived::Scalar condition_number(const Eigen::MatrixBase<Derived>& sym) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym.derived(), Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  if (ev.size() == 0) return Scalar(1);
  Scalar lo = ev.minCoeff();
  Scalar hi = ev.maxCoeff();
  if (!(lo > Scalar(0))) return std::numeric_limits<Scalar>::infinity();
  return hi / lo;
}

// Adds lambda * trace/d to the diagonal when the condition number exceeds the
// policy threshold. Returns the ridge actually added (0 when none).
template <typename Scalar>
Scalar apply_ridge(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& cov,
                   const RidgePolicy& policy) {
  if (cov.rows() == 0) return Scalar(0);
  if (condition_number(cov) <= Scalar(policy.condition_threshold)) return Scalar(0);
  const Scalar ridge = Scalar(policy.lambda) * cov.trace() / Scalar(cov.rows());
  cov.diagonal().array() += ridge;
  return ridge;
}

// Wraps a known covariance (population value, or one computed elsewhere).
template <typename Derived>
CovModel<typename Derived::Scalar> make_cov_model(const Eigen::MatrixBase<Derived>& matrix,
                                                  std::vector<std::string> labels = {},
                                                  Index sample_count = 0) {
  using Scalar = typename Derived::Scalar;
  if (matrix.rows() != matrix.cols()) {
    throw std::invalid_argument("covariance must be square");
  }
  if (labels.empty()) {
    for (Index i = 0; i < matrix.rows(); ++i) labels.push_back(detail::default_label(i));
  }
  if (static_cast<Index>(labels.size()) != matrix.rows()) {
    throw std::invalid_argument("label count does not match covariance dimension");
  }
  CovModel<Scalar> model;
  model.labels = std::move(labels);
  model.matrix = (matrix + matrix.transpose()) / Scalar(2);
  model.sample_count = sample_count;
  return model;
}

// Sample covariance of the columns of `data` (rows are observations), with
// mean removal and divisor T-1. A near-singular result gets the policy ridge.
template <typename Derived>
CovModel<typename Derived::Scalar> estimate_covariance(const Eigen::MatrixBase<Derived>& data,
                                                       std::vector<std::string> labels = {},
                                                       const RidgePolicy& policy = {}) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Index rows = data.rows();
  const Index cols = data.cols();
  if (labels.empty()) {
    for (Index i = 0; i < cols; ++i) labels.push_back(detail::default_label(i));
  }
  if (static_cast<Index>(labels.size()) != cols) {
    throw std::invalid_argument("label count does not match column count");
  }
  if (rows <= cols) {
    throw std::invalid_argument("estimate_covariance needs more rows than columns");
  }
  if (!data.allFinite()) throw std::invalid_argument("estimate_covariance: non-finite input");
  for (Index j = 0; j < cols; ++j) {
    if (data.col(j).minCoeff() == data.col(j).maxCoeff()) {
      throw DegenerateError("zero-variance variable '" + labels[j] + "'", labels[j]);
    }
  }

  Matrix centered = data.rowwise() - data.colwise().mean();
  Matrix cov = (centered.adjoint() * centered) / Scalar(rows - 1);
  cov = (cov + cov.transpose()) / Scalar(2);

  CovModel<Scalar> model;
  model.labels = std::move(labels);
  model.sample_count = rows;
  model.ridge_applied = apply_ridge(cov, policy);
  model.matrix = std::move(cov);
  return model;
}

// Log-determinant of the sub-block indexed by `subset` via Cholesky.
template <typename Derived>
typename Derived::Scalar log_det(const Eigen::MatrixBase<Derived>& cov,
                                 std::span<const Index> subset) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Index k = static_cast<Index>(subset.size());
  Matrix block(k, k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) block(a, b) = cov(subset[a], subset[b]);
  }
  Eigen::LLT<Matrix> llt(block);
  if (llt.info() != Eigen::Success) throw DegenerateError("degenerate subset");
  const auto diag = llt.matrixLLT().diagonal();
  if (!(diag.minCoeff() > Scalar(0))) throw DegenerateError("degenerate subset");
  return Scalar(2) * diag.array().log().sum();
}

// H(S) = 1/2 ln((2 pi e)^|S| det Sigma_S).
template <typename Derived>
typename Derived::Scalar gaussian_entropy(const Eigen::MatrixBase<Derived>& cov,
                                          std::span<const Index> subset) {
  using Scalar = typename Derived::Scalar;
  if (subset.empty()) throw std::invalid_argument("gaussian_entropy: empty subset");
  const Scalar log_two_pi_e = std::log(Scalar(2) * std::numbers::pi_v<Scalar>) + Scalar(1);
  return Scalar(0.5) * (Scalar(subset.size()) * log_two_pi_e + log_det(cov, subset));
}

template <typename Derived>
typename Derived::Scalar mutual_information(const Eigen::MatrixBase<Derived>& cov,
                                            std::span<const Index> a,
                                            std::span<const Index> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mutual_information: empty subset");
  detail::require_disjoint(a, b, "mutual_information");
  const Subset ab = detail::join(a, b);
  auto mi = gaussian_entropy(cov, a) + gaussian_entropy(cov, b) - gaussian_entropy(cov, ab);
  return detail::clamp_nonnegative(mi, "mutual information");
}

// I(A;B|C); an empty C reduces to mutual_information.
template <typename Derived>
typename Derived::Scalar conditional_mi(const Eigen::MatrixBase<Derived>& cov,
                                        std::span<const Index> a, std::span<const Index> b,
                                        std::span<const Index> c) {
  if (c.empty()) return mutual_information(cov, a, b);
  if (a.empty() || b.empty()) throw std::invalid_argument("conditional_mi: empty subset");
  detail::require_disjoint(a, b, "conditional_mi");
  detail::require_disjoint(a, c, "conditional_mi");
  detail::require_disjoint(b, c, "conditional_mi");
  const Subset ac = detail::join(a, c);
  const Subset bc = detail::join(b, c);
  const Subset abc = detail::join(ac, b);
  auto cmi = gaussian_entropy(cov, ac) + gaussian_entropy(cov, bc) -
             gaussian_entropy(cov, abc) - gaussian_entropy(cov, c);
  return detail::clamp_nonnegative(cmi, "conditional mutual information");
}

template <typename Derived>
typename Derived::Scalar total_correlation(const Eigen::MatrixBase<Derived>& cov,
                                           std::span<const Index> s) {
  using Scalar = typename Derived::Scalar;
  if (s.size() < 2) throw std::invalid_argument("total_correlation needs |S| >= 2");
  Scalar marginals = 0;
  for (Index k : s) marginals += gaussian_entropy(cov, std::span<const Index>(&k, 1));
  return detail::clamp_nonnegative(marginals - gaussian_entropy(cov, s), "total correlation");
}

// DTC = H(S) - sum_k H(X_k | S\k) = (1-n) H(S) + sum_k H(S\k).
template <typename Derived>
typename Derived::Scalar dual_total_correlation(const Eigen::MatrixBase<Derived>& cov,
                                                std::span<const Index> s) {
  using Scalar = typename Derived::Scalar;
  if (s.size() < 2) throw std::invalid_argument("dual_total_correlation needs |S| >= 2");
  const Scalar joint = gaussian_entropy(cov, s);
  Scalar conditionals = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    conditionals += joint - gaussian_entropy(cov, detail::without(s, k));
  }
  return detail::clamp_nonnegative(joint - conditionals, "dual total correlation");
}

// Omega = TC - DTC. The alternative form (n-2) H(S) + sum_k [H(X_k) - H(S\k)]
// is evaluated as well and both must agree.
template <typename Derived>
typename Derived::Scalar o_information(const Eigen::MatrixBase<Derived>& cov,
                                       std::span<const Index> s) {
  using Scalar = typename Derived::Scalar;
  if (s.size() < 2) throw std::invalid_argument("o_information needs |S| >= 2");
  // TC and DTC both equal I(X1;X2) for a pair.
  if (s.size() == 2) return Scalar(0);
  const Scalar via_tc_dtc = total_correlation(cov, s) - dual_total_correlation(cov, s);

  const Scalar n = Scalar(s.size());
  Scalar via_entropies = (n - Scalar(2)) * gaussian_entropy(cov, s);
  for (std::size_t k = 0; k < s.size(); ++k) {
    via_entropies += gaussian_entropy(cov, s.subspan(k, 1)) -
                     gaussian_entropy(cov, detail::without(s, k));
  }
  if (std::abs(via_tc_dtc - via_entropies) > Scalar(kFormAgreementTolerance)) {
    throw ConsistencyError("O-information forms disagree");
  }
  return via_tc_dtc;
}

// CovModel overloads.

template <typename Scalar>
Scalar gaussian_entropy(const CovModel<Scalar>& m, std::span<const Index> s) {
  return gaussian_entropy(m.matrix, s);
}
template <typename Scalar>
Scalar mutual_information(const CovModel<Scalar>& m, std::span<const Index> a,
                          std::span<const Index> b) {
  return mutual_information(m.matrix, a, b);
}
template <typename Scalar>
Scalar conditional_mi(const CovModel<Scalar>& m, std::span<const Index> a,
                      std::span<const Index> b, std::span<const Index> c) {
  return conditional_mi(m.matrix, a, b, c);
}
template <typename Scalar>
Scalar total_correlation(const CovModel<Scalar>& m, std::span<const Index> s) {
  return total_correlation(m.matrix, s);
}
template <typename Scalar>
Scalar dual_total_correlation(const CovModel<Scalar>& m, std::span<const Index> s) {
  return dual_total_correlation(m.matrix, s);
}
template <typename Scalar>
Scalar o_information(const CovModel<Scalar>& m, std::span<const Index> s) {
  return o_information(m.matrix, s);
}

}  // namespace infoflow

#endif  // INFOFLOW_ESTIMATORS_HPP
