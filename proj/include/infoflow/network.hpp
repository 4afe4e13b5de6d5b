#ifndef INFOFLOW_NETWORK_HPP
#define INFOFLOW_NETWORK_HPP

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infoflow/stats.hpp"

namespace infoflow {

inline constexpr int kAverageWindowId = -1;

// Directed weighted network of one window: weights(i, j) is the influence of
// labels[i] on labels[j]. Nonnegative, zero diagonal.
struct AdjacencyMatrix {
  int window_id = 0;
  std::vector<std::string> labels;
  Eigen::MatrixXd weights;
  double alpha = 0.01;

  Eigen::Index size() const { return weights.rows(); }
};

struct Strengths {
  Eigen::VectorXd k_out;  // row sums
  Eigen::VectorXd k_in;   // column sums
};

Strengths strengths(const AdjacencyMatrix& a);

// Label of the node with the largest out-strength (first in label order on ties).
std::string top_out_strength(const AdjacencyMatrix& a);

// Union of labels; each edge averaged over the windows where both endpoints
// are present. window_id is kAverageWindowId.
AdjacencyMatrix average_network(std::span<const AdjacencyMatrix> matrices);

struct WindowCorrelation {
  std::vector<int> window_ids;
  Eigen::MatrixXd rho;      // NaN where undefined
  Eigen::MatrixXd p_value;  // NaN where undefined
  Eigen::MatrixXi overlap;  // number of shared ordered node pairs
  double alpha = 0.01;

  bool defined(Eigen::Index h, Eigen::Index k) const { return !std::isnan(rho(h, k)); }
  bool significant(Eigen::Index h, Eigen::Index k) const {
    return defined(h, k) && (h == k || p_value(h, k) <= alpha);
  }
};

// Pearson correlation of off-diagonal weights restricted to ordered node
// pairs present in both windows. Fewer than `min_overlap` shared pairs leaves
// the entry undefined.
WindowCorrelation window_correlation(std::span<const AdjacencyMatrix> matrices,
                                     double alpha = 0.01, int min_overlap = 10);

struct StrengthHistory {
  std::vector<std::string> labels;
  Eigen::VectorXd age;         // number of windows the node was present in
  Eigen::VectorXd mean_k_in;   // averaged over those windows
  Eigen::VectorXd mean_k_out;
};

StrengthHistory strength_history(std::span<const AdjacencyMatrix> matrices);

struct RankCorrelation : Correlation {
  // "**" for p < 0.01, "*" for p < 0.05.
  std::string stars() const;
};

struct AgeStrengthCorrelation {
  RankCorrelation in;
  RankCorrelation out;
};

AgeStrengthCorrelation age_strength_correlation(const Eigen::Ref<const Eigen::VectorXd>& age,
                                                const Eigen::Ref<const Eigen::VectorXd>& k_in,
                                                const Eigen::Ref<const Eigen::VectorXd>& k_out);

struct WindowSummary {
  int window_id = 0;
  std::string start_date;
  std::optional<double> total_volume;
  std::optional<double> mean_f;
  std::optional<double> mean_redundancy;
  std::optional<double> mean_synergy;
};

struct IndicatorRow {
  WindowSummary current;
  WindowSummary moving_average;  // trailing 10-window means of each field
};

// Orders by window id and attaches trailing moving averages.
std::vector<IndicatorRow> window_indicators(std::span<const WindowSummary> windows,
                                            std::size_t ma_width = 10);

}  // namespace infoflow

#endif  // INFOFLOW_NETWORK_HPP
