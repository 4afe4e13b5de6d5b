#include "infoflow/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace infoflow {

double chi2_survival(double x, double dof) {
  if (!(dof > 0)) throw std::invalid_argument("chi2_survival: dof must be positive");
  if (x <= 0) return 1.0;
  if (!std::isfinite(x)) return 0.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, x));
}

namespace {

double t_two_sided(double r, double n) {
  const double dof = n - 2;
  if (std::abs(r) >= 1.0) return 0.0;
  const double t = r * std::sqrt(dof / (1.0 - r * r));
  boost::math::students_t dist(dof);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

}  // namespace

Correlation pearson(const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  Correlation out;
  const auto n = x.size();
  if (n < 3) return out;
  const Eigen::ArrayXd dx = x.array() - x.mean();
  const Eigen::ArrayXd dy = y.array() - y.mean();
  const double sxx = dx.square().sum();
  const double syy = dy.square().sum();
  if (!(sxx > 0) || !(syy > 0)) return out;
  out.rho = std::clamp((dx * dy).sum() / std::sqrt(sxx * syy), -1.0, 1.0);
  out.p_value = t_two_sided(out.rho, static_cast<double>(n));
  out.defined = true;
  return out;
}

Eigen::VectorXd average_ranks(const Eigen::Ref<const Eigen::VectorXd>& x) {
  const auto n = x.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return x(a) < x(b); });
  Eigen::VectorXd ranks(n);
  for (Eigen::Index i = 0; i < n;) {
    Eigen::Index j = i;
    while (j + 1 < n && x(order[j + 1]) == x(order[i])) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Eigen::Index k = i; k <= j; ++k) ranks(order[k]) = avg;
    i = j + 1;
  }
  return ranks;
}

Correlation spearman(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y) {
  return pearson(average_ranks(x), average_ranks(y));
}

std::vector<std::optional<double>> trailing_mean(std::span<const std::optional<double>> values,
                                                 std::size_t width) {
  if (width == 0) throw std::invalid_argument("trailing_mean: zero width");
  std::vector<std::optional<double>> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double sum = 0;
    std::size_t n = 0;
    for (std::size_t j = (i + 1 >= width ? i + 1 - width : 0); j <= i; ++j) {
      if (values[j]) {
        sum += *values[j];
        ++n;
      }
    }
    if (n > 0) out[i] = sum / static_cast<double>(n);
  }
  return out;
}

Eigen::VectorXd zscore(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() < 2) throw std::invalid_argument("zscore: need at least two values");
  const double mean = x.mean();
  Eigen::VectorXd centered = x.array() - mean;
  const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(x.size() - 1));
  if (!(sd > 0)) return centered;
  return centered / sd;
}

}  // namespace infoflow
