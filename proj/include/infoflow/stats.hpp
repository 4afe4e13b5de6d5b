#ifndef INFOFLOW_STATS_HPP
#define INFOFLOW_STATS_HPP

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace infoflow {

struct Correlation {
  double rho = 0;
  double p_value = 1;  // two-sided
  bool defined = false;
};

// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi2_survival(double x, double dof);

Correlation pearson(const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& y);

// Ranks starting at 1, ties get their average rank.
Eigen::VectorXd average_ranks(const Eigen::Ref<const Eigen::VectorXd>& x);

// Pearson on average ranks, p-value from the t approximation with n-2 dof.
Correlation spearman(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y);

// Trailing moving average over the last `width` entries that are present.
std::vector<std::optional<double>> trailing_mean(std::span<const std::optional<double>> values,
                                                 std::size_t width);

// Standardizes to zero mean, unit sample variance.
Eigen::VectorXd zscore(const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace infoflow

#endif  // INFOFLOW_STATS_HPP
