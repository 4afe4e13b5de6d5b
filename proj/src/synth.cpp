#include "infoflow/synth.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "infoflow/rng.hpp"

namespace infoflow {

int CouplingSpec::max_lag() const {
  int lag = 1;
  for (const auto& c : couplings) lag = std::max(lag, c.lag);
  return lag;
}

std::vector<std::string> CouplingSpec::resolved_labels() const {
  if (!labels.empty()) return labels;
  std::vector<std::string> out;
  for (int i = 0; i < n_vars; ++i) out.push_back("X" + std::to_string(i));
  return out;
}

namespace {

void validate(const CouplingSpec& spec) {
  if (spec.n_vars < 1) throw std::invalid_argument("coupling spec needs at least one variable");
  if (spec.noise_variances.size() != spec.n_vars || !(spec.noise_variances.array() > 0).all()) {
    throw std::invalid_argument("noise variances must be positive, one per variable");
  }
  if (!spec.labels.empty() && static_cast<int>(spec.labels.size()) != spec.n_vars) {
    throw std::invalid_argument("label count does not match n_vars");
  }
  for (const auto& c : spec.couplings) {
    if (c.source < 0 || c.source >= spec.n_vars || c.target < 0 || c.target >= spec.n_vars ||
        c.lag < 1) {
      throw std::invalid_argument("coupling refers to an unknown variable or lag");
    }
  }
}

}  // namespace

Eigen::MatrixXd companion_matrix(const CouplingSpec& spec) {
  validate(spec);
  const int n = spec.n_vars;
  const int lags = spec.max_lag();
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n * lags, n * lags);
  for (const auto& c : spec.couplings) f(c.target, (c.lag - 1) * n + c.source) += c.coefficient;
  if (lags > 1) f.bottomLeftCorner(n * (lags - 1), n * (lags - 1)).setIdentity();
  return f;
}

double spectral_radius(const CouplingSpec& spec) {
  const Eigen::MatrixXd f = companion_matrix(spec);
  Eigen::EigenSolver<Eigen::MatrixXd> es(f, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd stationary_covariance(const CouplingSpec& spec) {
  if (!(spectral_radius(spec) < 1.0)) throw Error("coupling spec is not stationary");
  const Eigen::MatrixXd f = companion_matrix(spec);
  const Index m = f.rows();
  const Index n = spec.n_vars;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m, m);
  q.topLeftCorner(n, n).diagonal() = spec.noise_variances;

  // vec(S) = (I - F (x) F)^-1 vec(Q), column-major vec.
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(m * m, m * m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      system.block(i * m, j * m, m, m) -= f(i, j) * f;
    }
  }
  const Eigen::VectorXd vec_q = Eigen::Map<const Eigen::VectorXd>(q.data(), m * m);
  const Eigen::VectorXd vec_s = system.partialPivLu().solve(vec_q);
  Eigen::MatrixXd s = Eigen::Map<const Eigen::MatrixXd>(vec_s.data(), m, m);
  s = (s + s.transpose()) / 2.0;
  return s.topLeftCorner(n, n);
}

ReturnPanel gen_var(const CouplingSpec& spec, Index t_len) {
  validate(spec);
  if (t_len < 1000) throw std::invalid_argument("gen_var: T must be at least 1000");
  if (!(spectral_radius(spec) < 1.0)) throw Error("coupling spec is not stationary");

  const int n = spec.n_vars;
  const int lags = spec.max_lag();
  const Index total = t_len + kBurnIn;
  const Eigen::VectorXd sd = spec.noise_variances.cwiseSqrt();
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(total + lags, n);
  Xoshiro256 rng(spec.seed);
  for (Index t = lags; t < total + lags; ++t) {
    for (int i = 0; i < n; ++i) x(t, i) = sd(i) * rng.normal();
    for (const auto& c : spec.couplings) x(t, c.target) += c.coefficient * x(t - c.lag, c.source);
  }

  ReturnPanel panel;
  panel.labels = spec.resolved_labels();
  panel.values = x.bottomRows(t_len);
  panel.active.assign(static_cast<std::size_t>(n), true);
  panel.first_trade.assign(static_cast<std::size_t>(n), 0);
  return panel;
}

double analytic_var_gc(const CouplingSpec& spec, int source, int target) {
  validate(spec);
  const auto unsupported = [] {
    return Error("analytic_var_gc supports only the bivariate lag-1 white-source family; "
                 "estimate other specs by Monte Carlo");
  };
  if (spec.n_vars != 2 || source == target || source < 0 || source > 1 || target < 0 ||
      target > 1) {
    throw unsupported();
  }
  double b = 0;
  for (const auto& c : spec.couplings) {
    if (c.lag != 1 || c.target == source) throw unsupported();
    if (c.source == source) b += c.coefficient;
  }
  if (!(spectral_radius(spec) < 1.0)) throw Error("coupling spec is not stationary");
  const double var_x = spec.noise_variances(source);
  const double var_y = spec.noise_variances(target);
  return std::log((b * b * var_x + var_y) / var_y);
}

PlantedPanel gen_planted_highorder(MultipletKind kind, int n_extra, Index t_len,
                                   std::uint64_t seed) {
  if (t_len < 10000) throw std::invalid_argument("gen_planted_highorder: T must be >= 1e4");
  if (n_extra < 0) throw std::invalid_argument("gen_planted_highorder: negative n_extra");
  Xoshiro256 rng(seed);
  const Index total = t_len + 1;
  const Index cols = 3 + n_extra;
  Eigen::MatrixXd x(total, cols);  // Y, S1, S2, D1..
  if (kind == MultipletKind::synergistic) {
    for (Index t = 0; t < total; ++t) {
      x(t, 1) = rng.normal();
      x(t, 2) = rng.normal();
    }
    x(0, 0) = rng.normal();
    for (Index t = 1; t < total; ++t) x(t, 0) = x(t - 1, 1) + x(t - 1, 2) + 0.1 * rng.normal();
  } else {
    Eigen::VectorXd z(total);
    for (Index t = 0; t < total; ++t) {
      z(t) = rng.normal();
      x(t, 1) = z(t) + 0.5 * rng.normal();
      x(t, 2) = z(t) + 0.5 * rng.normal();
    }
    x(0, 0) = rng.normal();
    for (Index t = 1; t < total; ++t) x(t, 0) = z(t - 1) + rng.normal();
  }
  for (Index c = 3; c < cols; ++c) {
    for (Index t = 0; t < total; ++t) x(t, c) = rng.normal();
  }

  PlantedPanel out;
  out.target = "Y";
  out.planted = {"S1", "S2"};
  out.panel.labels = {"Y", "S1", "S2"};
  for (int k = 1; k <= n_extra; ++k) out.panel.labels.push_back("D" + std::to_string(k));
  out.panel.values = x.bottomRows(t_len);
  out.panel.active.assign(static_cast<std::size_t>(cols), true);
  out.panel.first_trade.assign(static_cast<std::size_t>(cols), 0);
  return out;
}

std::vector<AssetTape> gen_trade_tape(const ReturnPanel& returns, const TapeOptions& options) {
  if (!options.listing_delay_minutes.empty() &&
      static_cast<Index>(options.listing_delay_minutes.size()) != returns.cols()) {
    throw std::invalid_argument("gen_trade_tape: one listing delay per column");
  }
  Xoshiro256 rng(options.seed);
  std::vector<AssetTape> tapes;
  for (Index c = 0; c < returns.cols(); ++c) {
    AssetTape tape;
    tape.ticker = returns.labels[static_cast<std::size_t>(c)];
    const std::int64_t delay =
        options.listing_delay_minutes.empty() ? 0 : options.listing_delay_minutes[c];
    double log_price = std::log(options.base_price);
    for (Index m = 0; m < returns.rows(); ++m) {
      log_price += options.return_scale * returns.values(m, c);
      // Draws happen for every minute so that columns stay aligned across options.
      const double gap = rng.uniform();
      const bool two = rng.uniform() < 0.3;
      const double v1 = 0.1 + 2.0 * rng.uniform();
      const double v2 = 0.1 + 2.0 * rng.uniform();
      const std::int64_t sec = rng.uniform_int(0, 58);
      const bool first_minute = m == delay;  // listing minute always trades
      if (m < delay || (!first_minute && gap < options.gap_probability)) continue;
      const double price = std::exp(log_price);
      const std::int64_t ts = options.start + m * kSecondsPerMinute;
      tape.trades.push_back({ts + sec, price, v1});
      if (two) tape.trades.push_back({ts + sec + 1, price, v2});
    }
    tapes.push_back(std::move(tape));
  }
  return tapes;
}

}  // namespace infoflow
