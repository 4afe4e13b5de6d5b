#ifndef INFOFLOW_OINFO_HPP
#define INFOFLOW_OINFO_HPP

// Dynamic O-information toward a target and the best-multiplet search.
//
//   dOmega^y(X^n) = (1-n) I(y; X^n- | Y^-) + sum_k I(y; X^n-_{-k} | Y^-)
//
// Positive values mean the sources carry redundant information about the
// target's future, negative values synergistic information.

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infoflow/error.hpp"
#include "infoflow/estimators.hpp"
#include "infoflow/ingest.hpp"

namespace infoflow {

enum class MultipletKind { redundant, synergistic };

std::string_view to_string(MultipletKind kind);
std::optional<MultipletKind> parse_multiplet_kind(std::string_view s);

struct MultipletResult {
  int window_id = 0;
  std::string target;
  MultipletKind kind = MultipletKind::redundant;
  int size = 0;
  std::vector<std::string> members;  // in the order they joined the multiplet
  double value = 0;
  int lag_p = 1;
};

// Delta^y = (1-n) I(y; S) + sum_k I(y; S\k): the change in O-information when
// the target joins the multiplet, Omega(S u y) = Omega(S) + Delta^y.
template <typename Derived>
typename Derived::Scalar delta_y(const Eigen::MatrixBase<Derived>& cov,
                                 std::span<const Index> sources, Index target) {
  using Scalar = typename Derived::Scalar;
  if (sources.size() < 2) throw std::invalid_argument("delta_y needs at least 2 sources");
  if (std::find(sources.begin(), sources.end(), target) != sources.end()) {
    throw std::invalid_argument("delta_y: target is among the sources");
  }
  const std::span<const Index> y(&target, 1);
  const Scalar n = Scalar(sources.size());
  Scalar value = (Scalar(1) - n) * mutual_information(cov, y, sources);
  for (std::size_t k = 0; k < sources.size(); ++k) {
    value += mutual_information(cov, y, detail::without(sources, k));
  }
  return value;
}

template <typename Scalar>
Scalar delta_y(const CovModel<Scalar>& cov, std::span<const Index> sources, Index target) {
  return delta_y(cov.matrix, sources, target);
}

// Joint covariance of every usable panel column at time t and at lags 1..p,
// computed once per panel and shared by all targets and multiplets.
class DynamicOInfo {
 public:
  DynamicOInfo(const ReturnPanel& panel, int lag, const RidgePolicy& ridge = {});

  int lag() const { return lag_; }
  int window_id() const { return window_id_; }
  // Usable (active, non-constant) columns, sorted by label.
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::string>& excluded() const { return excluded_; }
  const CovModeld& covariance() const { return cov_; }
  const Diagnostics& diagnostics() const { return diagnostics_; }

  // Index into labels(); throws DegenerateError for excluded columns and
  // std::invalid_argument for unknown ones.
  Index column(std::string_view label) const;

  double operator()(Index target, std::span<const Index> sources) const;
  double operator()(std::string_view target, std::span<const std::string> sources) const;

 private:
  Index future_index(Index column) const { return column; }
  Index lag_index(Index column, int l) const;

  int lag_ = 1;
  int window_id_ = 0;
  std::vector<std::string> labels_;
  std::vector<std::string> excluded_;
  CovModeld cov_;
  Diagnostics diagnostics_;
};

double dynamic_o_information(const ReturnPanel& panel, std::string_view target,
                             std::span<const std::string> sources, int lag = 1,
                             const RidgePolicy& ridge = {});

// Exhaustive scan over unordered source pairs; ties go to the lexicographically
// smallest pair.
MultipletResult best_pair(const DynamicOInfo& model, std::string_view target, MultipletKind kind);
MultipletResult best_pair(const ReturnPanel& panel, std::string_view target, int lag,
                          MultipletKind kind);

// Adds the remaining candidate that maximizes (redundant) or minimizes
// (synergistic) dOmega. Throws Error("exhausted") when no candidate is left.
MultipletResult greedy_extend(const DynamicOInfo& model, const MultipletResult& current);
MultipletResult greedy_extend(const ReturnPanel& panel, const MultipletResult& current);

inline constexpr int kMaxMultipletSize = 5;

struct MultipletScan {
  std::vector<MultipletResult> results;  // ordered by (target, kind, size)
  Diagnostics diagnostics;
};

// For every target and both kinds: best pair, then greedy growth up to n_max
// (capped by the number of available sources). Failures of one target are
// recorded and the scan moves on. An empty target list means every usable
// column.
MultipletScan multiplet_scan(const ReturnPanel& panel, std::span<const std::string> targets,
                             int lag = 1, int n_max = kMaxMultipletSize,
                             const RidgePolicy& ridge = {});

struct SurrogateNull {
  double observed = 0;
  double mean = 0;
  double stddev = 0;
  std::vector<double> values;

  // |observed - mean| within `k` null standard deviations.
  bool within(double k) const { return std::abs(observed - mean) <= k * stddev; }
};

// Null distribution of dOmega under independent circular shifts of each
// source column by a uniform offset in [min_shift, T - min_shift].
SurrogateNull circular_shift_null(const ReturnPanel& panel, std::string_view target,
                                  std::span<const std::string> sources, int lag,
                                  int surrogates = 100, int min_shift = 100,
                                  std::uint64_t seed = 1);

struct MembershipRow {
  std::string ticker;
  AssetClass asset_class = AssetClass::unknown;
  int redundant = 0;
  int synergistic = 0;
  int total() const { return redundant + synergistic; }
};

// Appearances of each asset across all stored best multiplets, one count per
// result (so an asset present at sizes 2..5 of one family counts 4 times).
// Sorted by total, descending, then ticker.
std::vector<MembershipRow> membership_counts(std::span<const MultipletResult> results,
                                             const AssetRegistry& registry,
                                             Diagnostics* diagnostics = nullptr);

struct ClassFractionRow {
  MultipletKind kind = MultipletKind::redundant;
  int size = 0;
  int multiplets = 0;
  std::map<AssetClass, double> fraction;  // mean share of each class
};

std::vector<ClassFractionRow> class_fractions(std::span<const MultipletResult> results,
                                              const AssetRegistry& registry,
                                              Diagnostics* diagnostics = nullptr);

}  // namespace infoflow

#endif  // INFOFLOW_OINFO_HPP
