#include "infoflow/granger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "infoflow/stats.hpp"

namespace infoflow {

namespace {

// Residual variances below this (on z-scored data) mean the target is an exact
// linear function of the regressors.
constexpr double kDeterministicVariance = 1e-20;

bool is_constant(const SeriesRef& x) { return x.size() == 0 || x.minCoeff() == x.maxCoeff(); }

// Lag block of x for rows t = first .. T-1: column l-1 holds x[t-l].
void fill_lags(Eigen::Ref<Eigen::MatrixXd> out, const SeriesRef& x, Index first, int lags) {
  const Index rows = x.size() - first;
  for (int l = 1; l <= lags; ++l) out.col(l - 1) = x.segment(first - l, rows);
}

}  // namespace

Eigen::MatrixXd embed(const SeriesRef& series, int lags) {
  if (lags < 1) throw std::invalid_argument("embed: lags must be >= 1");
  if (series.size() <= lags) throw std::invalid_argument("embed: series shorter than lags");
  Eigen::MatrixXd out(series.size() - lags, lags);
  fill_lags(out, series, lags, lags);
  return out;
}

VarFit fit_var(const SeriesRef& target, const SeriesRef* source, int p, int q,
               std::optional<Index> first_row) {
  if (p < 1) throw std::invalid_argument("fit_var: p must be >= 1");
  if (source == nullptr) q = 0;
  if (source != nullptr) {
    if (q < 1) throw std::invalid_argument("fit_var: q must be >= 1 with a source");
    if (source->size() != target.size()) throw std::invalid_argument("fit_var: length mismatch");
  }
  const Index start = first_row.value_or(std::max(p, q));
  if (start < std::max(p, q)) throw std::invalid_argument("fit_var: first row before max lag");
  const Index n = target.size() - start;
  const Index k = 1 + p + q;
  if (n <= k) throw std::invalid_argument("fit_var: not enough samples for the model");

  Eigen::MatrixXd design(n, k);
  design.col(0).setOnes();
  fill_lags(design.middleCols(1, p), target, start, p);
  if (q > 0) fill_lags(design.middleCols(1 + p, q), *source, start, q);
  const Eigen::VectorXd y = target.tail(n);

  const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd resid = y - design * beta;

  VarFit fit;
  fit.order_p = p;
  fit.order_q = q;
  fit.intercept = beta(0);
  fit.coefficients = beta.tail(k - 1);
  fit.residual_variance = resid.squaredNorm() / static_cast<double>(n);
  fit.sample_count = n;
  return fit;
}

int select_order_bic(const SeriesRef& target, const SeriesRef* source, int p_max) {
  const Index t_len = target.size();
  if (p_max < 1 || 4 * static_cast<Index>(p_max) >= t_len) {
    throw std::invalid_argument("select_order_bic: need 1 <= p_max < T/4");
  }
  if (is_constant(target)) throw DegenerateError("select_order_bic: constant target");
  if (source != nullptr && source->size() != t_len) {
    throw std::invalid_argument("select_order_bic: length mismatch");
  }

  const Eigen::VectorXd y = zscore(target);
  Eigen::VectorXd x;
  if (source != nullptr) x = zscore(*source);

  const Index n = t_len - p_max;
  const int blocks = source != nullptr ? 2 : 1;
  Eigen::MatrixXd z(n, 1 + blocks * p_max);
  z.col(0) = y.tail(n);
  fill_lags(z.middleCols(1, p_max), y, p_max, p_max);
  if (source != nullptr) fill_lags(z.middleCols(1 + p_max, p_max), x, p_max, p_max);
  z.rowwise() -= z.colwise().mean();
  const Eigen::MatrixXd gram = z.transpose() * z;

  const double log_n = std::log(static_cast<double>(n));
  int best = 0;
  double best_bic = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= p_max; ++p) {
    std::vector<Index> regressors;
    for (int l = 1; l <= p; ++l) regressors.push_back(l);
    if (source != nullptr) {
      for (int l = 1; l <= p; ++l) regressors.push_back(p_max + l);
    }
    const Index k = static_cast<Index>(regressors.size());
    Eigen::MatrixXd gaa(k, k);
    Eigen::VectorXd gay(k);
    for (Index a = 0; a < k; ++a) {
      gay(a) = gram(regressors[a], 0);
      for (Index b = 0; b < k; ++b) gaa(a, b) = gram(regressors[a], regressors[b]);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(gaa);
    if (llt.info() != Eigen::Success) continue;
    const double rss = gram(0, 0) - gay.dot(llt.solve(gay));
    if (!(rss > 0) || !std::isfinite(rss)) continue;
    const double bic = static_cast<double>(n) * std::log(rss / static_cast<double>(n)) +
                       static_cast<double>(k + 1) * log_n;
    if (bic < best_bic) {
      best_bic = bic;
      best = p;
    }
  }
  if (best == 0) throw Error("select_order_bic: every candidate model is degenerate");
  return best;
}

GcEdge pairwise_gc(const SeriesRef& source, const SeriesRef& target, int p, int q,
                   double alpha) {
  if (source.size() != target.size()) throw std::invalid_argument("pairwise_gc: length mismatch");
  if (p < 1 || q < 1) throw std::invalid_argument("pairwise_gc: orders must be >= 1");
  const Index max_lag = std::max(p, q);
  if (target.size() <= max_lag + 10) throw std::invalid_argument("pairwise_gc: series too short");
  if (is_constant(source)) throw DegenerateError("pairwise_gc: constant source");
  if (is_constant(target)) throw DegenerateError("pairwise_gc: constant target");

  const Eigen::VectorXd x = zscore(source);
  const Eigen::VectorXd y = zscore(target);
  const VarFit reduced = fit_var(y, nullptr, p, 0, max_lag);
  const SeriesRef xr(x);
  const VarFit full = fit_var(y, &xr, p, q, max_lag);
  if (reduced.residual_variance <= kDeterministicVariance ||
      full.residual_variance <= kDeterministicVariance) {
    throw Error("deterministic fit");
  }

  const double raw = std::log(reduced.residual_variance / full.residual_variance);
  if (raw < -1e-9) throw ConsistencyError("pairwise_gc: full model fits worse than reduced");

  GcEdge edge;
  edge.f_value = std::max(raw, 0.0);
  edge.order_p = p;
  edge.order_q = q;
  edge.p_value = chi2_survival(static_cast<double>(full.sample_count) * edge.f_value, q);
  edge.significant = edge.p_value < alpha;
  return edge;
}

double transfer_entropy_gaussian(const SeriesRef& source, const SeriesRef& target, int p,
                                 const RidgePolicy& ridge) {
  if (source.size() != target.size()) {
    throw std::invalid_argument("transfer_entropy_gaussian: length mismatch");
  }
  if (p < 1) throw std::invalid_argument("transfer_entropy_gaussian: p must be >= 1");
  if (target.size() <= p + 10) throw std::invalid_argument("transfer_entropy_gaussian: too short");
  const Index n = target.size() - p;
  Eigen::MatrixXd joint(n, 1 + 2 * p);
  joint.col(0) = target.tail(n);
  fill_lags(joint.middleCols(1, p), source, p, p);
  fill_lags(joint.middleCols(1 + p, p), target, p, p);
  const CovModeld cov = estimate_covariance(joint, {}, ridge);

  const Subset future{0};
  Subset source_past;
  Subset target_past;
  for (int l = 0; l < p; ++l) {
    source_past.push_back(1 + l);
    target_past.push_back(1 + p + l);
  }
  return conditional_mi(cov, future, source_past, target_past);
}

GcNetwork gc_matrix(const ReturnPanel& panel, const GcConfig& config) {
  GcNetwork net;
  net.adjacency.window_id = panel.window_id;
  net.adjacency.alpha = config.alpha;

  std::vector<Index> usable;
  for (Index j = 0; j < panel.cols(); ++j) {
    const auto& label = panel.labels[static_cast<std::size_t>(j)];
    if (!panel.active[static_cast<std::size_t>(j)]) {
      net.excluded.push_back(label);
      continue;
    }
    const auto col = panel.values.col(j);
    if (!col.allFinite() || col.size() == 0 || col.minCoeff() == col.maxCoeff()) {
      net.excluded.push_back(label);
      emit(&net.diagnostics, "degenerate_column",
           "window " + std::to_string(panel.window_id) + ": column '" + label +
               "' is constant or non-finite; excluded");
      continue;
    }
    usable.push_back(j);
    net.adjacency.labels.push_back(label);
  }

  const Index n = static_cast<Index>(usable.size());
  net.adjacency.weights = Eigen::MatrixXd::Zero(n, n);
  if (n < 2) {
    emit(&net.diagnostics, "too_few_columns",
         "window " + std::to_string(panel.window_id) + ": fewer than 2 usable columns");
    return net;
  }

  const Index t_len = panel.rows();
  const int p_max = static_cast<int>(std::min<Index>(config.p_max, (t_len - 1) / 4));
  if (p_max < 1) {
    emit(&net.diagnostics, "too_few_rows",
         "window " + std::to_string(panel.window_id) + ": too few rows for order selection");
    return net;
  }

  for (Index i = 0; i < n; ++i) {
    const SeriesRef x = panel.values.col(usable[i]);
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const SeriesRef y = panel.values.col(usable[j]);
      const auto& src = net.adjacency.labels[static_cast<std::size_t>(i)];
      const auto& dst = net.adjacency.labels[static_cast<std::size_t>(j)];
      try {
        const int p = select_order_bic(y, &x, p_max);
        GcEdge edge = pairwise_gc(x, y, p, p, config.alpha);
        edge.source = src;
        edge.target = dst;
        if (edge.significant) net.adjacency.weights(i, j) = edge.f_value;
        net.edges.push_back(std::move(edge));
      } catch (const Error& e) {
        emit(&net.diagnostics, "pair_failed",
             "window " + std::to_string(panel.window_id) + ": " + src + "->" + dst + ": " +
                 e.what());
      }
    }
  }
  return net;
}

}  // namespace infoflow
