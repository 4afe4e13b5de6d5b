#ifndef INFOFLOW_GRANGER_HPP
#define INFOFLOW_GRANGER_HPP

// Pairwise linear Granger causality.
//
// For a source X and target Y the reduced model regresses Y_t on its own p
// lags, the full model adds q lags of X; both include an intercept and are
// fitted by least squares on the common sample t = max(p, q) .. T-1. The
// statistic is F = ln(sigma_r^2 / sigma_f^2) and N*F is asymptotically
// chi-square with q degrees of freedom under the null.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "infoflow/error.hpp"
#include "infoflow/estimators.hpp"
#include "infoflow/ingest.hpp"
#include "infoflow/network.hpp"

namespace infoflow {

using SeriesRef = Eigen::Ref<const Eigen::VectorXd>;

struct VarFit {
  std::string target;
  std::vector<std::string> sources;  // empty for the reduced model
  int order_p = 0;
  int order_q = 0;
  Eigen::VectorXd coefficients;  // a_1..a_p, then b_1..b_q per source
  double intercept = 0;
  double residual_variance = 0;  // RSS / N
  Index sample_count = 0;
};

struct GcEdge {
  std::string source;
  std::string target;
  double f_value = 0;
  double p_value = 1;
  int order_p = 0;
  int order_q = 0;
  bool significant = false;
};

struct GcConfig {
  int p_max = 20;
  double alpha = 0.01;
};

// Row r holds (x[r+p-1], ..., x[r]) and lines up with the future value x[r+p].
Eigen::MatrixXd embed(const SeriesRef& series, int lags);

// Least-squares fit of `target` on its own p lags and q lags of `source`,
// using rows t = first_row .. T-1 (first_row defaults to max(p, q)).
VarFit fit_var(const SeriesRef& target, const SeriesRef* source, int p, int q,
               std::optional<Index> first_row = std::nullopt);

// BIC order over 1..p_max on a sample trimmed to p_max. With a source the
// candidate model uses p lags of both series. Ties go to the smaller order.
int select_order_bic(const SeriesRef& target, const SeriesRef* source, int p_max);

GcEdge pairwise_gc(const SeriesRef& source, const SeriesRef& target, int p, int q,
                   double alpha);

// I(y_t ; X^- | Y^-) with p lags of each, from the joint sample covariance.
double transfer_entropy_gaussian(const SeriesRef& source, const SeriesRef& target, int p,
                                 const RidgePolicy& ridge = {});

struct GcNetwork {
  AdjacencyMatrix adjacency;
  std::vector<GcEdge> edges;          // every evaluated ordered pair
  std::vector<std::string> excluded;  // inactive or degenerate columns
  Diagnostics diagnostics;
};

// Pairwise GC over all ordered pairs of usable columns, each with its own BIC
// order (q = p). a_ij holds F for significant edges and 0 otherwise.
GcNetwork gc_matrix(const ReturnPanel& panel, const GcConfig& config = {});

}  // namespace infoflow

#endif  // INFOFLOW_GRANGER_HPP
