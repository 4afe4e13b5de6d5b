#include "infoflow/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace infoflow {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::map<std::string, Eigen::Index, std::less<>> index_map(const AdjacencyMatrix& a) {
  std::map<std::string, Eigen::Index, std::less<>> out;
  for (std::size_t i = 0; i < a.labels.size(); ++i) out.emplace(a.labels[i], static_cast<Eigen::Index>(i));
  return out;
}

}  // namespace

Strengths strengths(const AdjacencyMatrix& a) {
  Strengths s;
  Eigen::MatrixXd w = a.weights;
  w.diagonal().setZero();
  s.k_out = w.rowwise().sum();
  s.k_in = w.colwise().sum().transpose();
  return s;
}

std::string top_out_strength(const AdjacencyMatrix& a) {
  if (a.size() == 0) return {};
  const Strengths s = strengths(a);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < s.k_out.size(); ++i) {
    if (s.k_out(i) > s.k_out(best) ||
        (s.k_out(i) == s.k_out(best) &&
         a.labels[static_cast<std::size_t>(i)] < a.labels[static_cast<std::size_t>(best)])) {
      best = i;
    }
  }
  return a.labels[static_cast<std::size_t>(best)];
}

AdjacencyMatrix average_network(std::span<const AdjacencyMatrix> matrices) {
  if (matrices.empty()) throw std::invalid_argument("average_network: no matrices");
  AdjacencyMatrix avg;
  avg.window_id = kAverageWindowId;
  avg.alpha = matrices.front().alpha;
  for (const auto& m : matrices) avg.labels.insert(avg.labels.end(), m.labels.begin(), m.labels.end());
  std::sort(avg.labels.begin(), avg.labels.end());
  avg.labels.erase(std::unique(avg.labels.begin(), avg.labels.end()), avg.labels.end());

  const auto n = static_cast<Eigen::Index>(avg.labels.size());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd count = Eigen::MatrixXd::Zero(n, n);
  const auto global = index_map(avg);
  for (const auto& m : matrices) {
    std::vector<Eigen::Index> to_global;
    for (const auto& l : m.labels) to_global.push_back(global.find(l)->second);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      for (Eigen::Index j = 0; j < m.size(); ++j) {
        if (i == j) continue;
        sum(to_global[i], to_global[j]) += m.weights(i, j);
        count(to_global[i], to_global[j]) += 1;
      }
    }
  }
  avg.weights = (count.array() > 0).select(sum.array() / count.array().max(1.0), 0.0);
  avg.weights.diagonal().setZero();
  return avg;
}

WindowCorrelation window_correlation(std::span<const AdjacencyMatrix> matrices, double alpha,
                                     int min_overlap) {
  if (matrices.size() < 2) throw std::invalid_argument("window_correlation: need >= 2 matrices");
  const auto w = static_cast<Eigen::Index>(matrices.size());
  WindowCorrelation out;
  out.alpha = alpha;
  out.rho = Eigen::MatrixXd::Constant(w, w, kNaN);
  out.p_value = Eigen::MatrixXd::Constant(w, w, kNaN);
  out.overlap = Eigen::MatrixXi::Zero(w, w);
  for (const auto& m : matrices) out.window_ids.push_back(m.window_id);

  std::vector<std::map<std::string, Eigen::Index, std::less<>>> maps;
  for (const auto& m : matrices) maps.push_back(index_map(m));

  for (Eigen::Index h = 0; h < w; ++h) {
    const auto& a = matrices[static_cast<std::size_t>(h)];
    out.overlap(h, h) = static_cast<int>(a.size() * (a.size() - 1));
    out.rho(h, h) = 1.0;
    out.p_value(h, h) = 0.0;
    for (Eigen::Index k = h + 1; k < w; ++k) {
      const auto& b = matrices[static_cast<std::size_t>(k)];
      const auto& bmap = maps[static_cast<std::size_t>(k)];
      // Shared nodes as (index in a, index in b).
      std::vector<std::pair<Eigen::Index, Eigen::Index>> shared;
      for (std::size_t i = 0; i < a.labels.size(); ++i) {
        auto it = bmap.find(a.labels[i]);
        if (it != bmap.end()) shared.emplace_back(static_cast<Eigen::Index>(i), it->second);
      }
      const auto s = static_cast<Eigen::Index>(shared.size());
      const Eigen::Index pairs = s * (s - 1);
      out.overlap(h, k) = out.overlap(k, h) = static_cast<int>(std::max<Eigen::Index>(pairs, 0));
      if (pairs < min_overlap) continue;
      Eigen::VectorXd va(pairs);
      Eigen::VectorXd vb(pairs);
      Eigen::Index r = 0;
      for (const auto& [ai, bi] : shared) {
        for (const auto& [aj, bj] : shared) {
          if (ai == aj) continue;
          va(r) = a.weights(ai, aj);
          vb(r) = b.weights(bi, bj);
          ++r;
        }
      }
      const Correlation c = pearson(va, vb);
      if (!c.defined) continue;
      out.rho(h, k) = out.rho(k, h) = c.rho;
      out.p_value(h, k) = out.p_value(k, h) = c.p_value;
    }
  }
  return out;
}

StrengthHistory strength_history(std::span<const AdjacencyMatrix> matrices) {
  std::map<std::string, std::tuple<double, double, double>> acc;  // age, sum_in, sum_out
  for (const auto& m : matrices) {
    const Strengths s = strengths(m);
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
      auto& [age, in, out] = acc[m.labels[i]];
      age += 1;
      in += s.k_in(static_cast<Eigen::Index>(i));
      out += s.k_out(static_cast<Eigen::Index>(i));
    }
  }
  StrengthHistory h;
  const auto n = static_cast<Eigen::Index>(acc.size());
  h.age.resize(n);
  h.mean_k_in.resize(n);
  h.mean_k_out.resize(n);
  Eigen::Index i = 0;
  for (const auto& [label, v] : acc) {
    const auto& [age, in, out] = v;
    h.labels.push_back(label);
    h.age(i) = age;
    h.mean_k_in(i) = in / age;
    h.mean_k_out(i) = out / age;
    ++i;
  }
  return h;
}

std::string RankCorrelation::stars() const {
  if (!defined) return "";
  if (p_value < 0.01) return "**";
  if (p_value < 0.05) return "*";
  return "";
}

AgeStrengthCorrelation age_strength_correlation(const Eigen::Ref<const Eigen::VectorXd>& age,
                                                const Eigen::Ref<const Eigen::VectorXd>& k_in,
                                                const Eigen::Ref<const Eigen::VectorXd>& k_out) {
  if (age.size() != k_in.size() || age.size() != k_out.size()) {
    throw std::invalid_argument("age_strength_correlation: length mismatch");
  }
  if (age.size() < 5) throw std::invalid_argument("age_strength_correlation: need >= 5 assets");
  AgeStrengthCorrelation out;
  static_cast<Correlation&>(out.in) = spearman(age, k_in);
  static_cast<Correlation&>(out.out) = spearman(age, k_out);
  return out;
}

std::vector<IndicatorRow> window_indicators(std::span<const WindowSummary> windows,
                                            std::size_t ma_width) {
  std::vector<WindowSummary> sorted(windows.begin(), windows.end());
  std::sort(sorted.begin(), sorted.end(), [](const WindowSummary& a, const WindowSummary& b) {
    return a.window_id < b.window_id;
  });

  auto column = [&](std::optional<double> WindowSummary::*field) {
    std::vector<std::optional<double>> v;
    for (const auto& w : sorted) v.push_back(w.*field);
    return trailing_mean(v, ma_width);
  };
  const auto ma_volume = column(&WindowSummary::total_volume);
  const auto ma_f = column(&WindowSummary::mean_f);
  const auto ma_red = column(&WindowSummary::mean_redundancy);
  const auto ma_syn = column(&WindowSummary::mean_synergy);

  std::vector<IndicatorRow> rows;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    IndicatorRow row;
    row.current = sorted[i];
    row.moving_average.window_id = sorted[i].window_id;
    row.moving_average.start_date = sorted[i].start_date;
    row.moving_average.total_volume = ma_volume[i];
    row.moving_average.mean_f = ma_f[i];
    row.moving_average.mean_redundancy = ma_red[i];
    row.moving_average.mean_synergy = ma_syn[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace infoflow
