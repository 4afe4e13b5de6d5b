#include "infoflow/oinfo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "infoflow/rng.hpp"

namespace infoflow {

std::string_view to_string(MultipletKind kind) {
  return kind == MultipletKind::redundant ? "redundant" : "synergistic";
}

std::optional<MultipletKind> parse_multiplet_kind(std::string_view s) {
  if (s == "redundant") return MultipletKind::redundant;
  if (s == "synergistic") return MultipletKind::synergistic;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// DynamicOInfo

DynamicOInfo::DynamicOInfo(const ReturnPanel& panel, int lag, const RidgePolicy& ridge)
    : lag_(lag), window_id_(panel.window_id) {
  if (lag < 1) throw std::invalid_argument("dynamic O-information: lag must be >= 1");

  std::vector<Index> usable;
  for (Index j = 0; j < panel.cols(); ++j) {
    const auto& label = panel.labels[static_cast<std::size_t>(j)];
    const auto col = panel.values.col(j);
    if (!panel.active[static_cast<std::size_t>(j)]) {
      excluded_.push_back(label);
    } else if (col.size() == 0 || !col.allFinite() || col.minCoeff() == col.maxCoeff()) {
      excluded_.push_back(label);
      emit(&diagnostics_, "degenerate_column",
           "window " + std::to_string(panel.window_id) + ": column '" + label +
               "' is constant or non-finite; excluded");
    } else {
      usable.push_back(j);
    }
  }
  std::sort(usable.begin(), usable.end(), [&](Index a, Index b) {
    return panel.labels[static_cast<std::size_t>(a)] < panel.labels[static_cast<std::size_t>(b)];
  });

  for (Index c : usable) labels_.push_back(panel.labels[static_cast<std::size_t>(c)]);
  const Index n = static_cast<Index>(usable.size());
  const Index rows = panel.rows() - lag;
  const Index dim = n * (lag + 1);
  if (rows <= dim + 10) {
    throw std::invalid_argument("dynamic O-information: too few rows for the embedding");
  }

  Eigen::MatrixXd data(rows, dim);
  std::vector<std::string> var_labels(static_cast<std::size_t>(dim));
  for (Index c = 0; c < n; ++c) {
    const auto& label = labels_[static_cast<std::size_t>(c)];
    const auto col = panel.values.col(usable[c]);
    data.col(future_index(c)) = col.tail(rows);
    var_labels[static_cast<std::size_t>(future_index(c))] = label + "[t]";
    for (int l = 1; l <= lag; ++l) {
      data.col(lag_index(c, l)) = col.segment(lag - l, rows);
      var_labels[static_cast<std::size_t>(lag_index(c, l))] =
          label + "[t-" + std::to_string(l) + "]";
    }
  }
  if (n > 0) {
    cov_ = estimate_covariance(data, std::move(var_labels), ridge);
    if (cov_.ridge_applied > 0) {
      emit(&diagnostics_, "ridge_applied",
           "window " + std::to_string(panel.window_id) + ": ridge " +
               std::to_string(cov_.ridge_applied) + " added to the lagged covariance");
    }
  }
}

Index DynamicOInfo::lag_index(Index column, int l) const {
  const Index n = static_cast<Index>(labels_.size());
  return n + column * lag_ + (l - 1);
}

Index DynamicOInfo::column(std::string_view label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it != labels_.end() && *it == label) return static_cast<Index>(it - labels_.begin());
  if (std::find(excluded_.begin(), excluded_.end(), label) != excluded_.end()) {
    throw DegenerateError("column '" + std::string(label) + "' is inactive or degenerate",
                          std::string(label));
  }
  throw std::invalid_argument("unknown column '" + std::string(label) + "'");
}

double DynamicOInfo::operator()(Index target, std::span<const Index> sources) const {
  const std::size_t n = sources.size();
  if (n < 2) throw std::invalid_argument("dynamic O-information needs at least 2 sources");
  std::set<Index> distinct(sources.begin(), sources.end());
  if (distinct.size() != n) throw std::invalid_argument("duplicate source");
  if (distinct.count(target) != 0) throw std::invalid_argument("target is among the sources");

  const Subset future{future_index(target)};
  Subset target_past;
  for (int l = 1; l <= lag_; ++l) target_past.push_back(lag_index(target, l));

  auto source_past = [&](std::optional<std::size_t> skip) {
    Subset out;
    for (std::size_t k = 0; k < n; ++k) {
      if (skip && *skip == k) continue;
      for (int l = 1; l <= lag_; ++l) out.push_back(lag_index(sources[k], l));
    }
    return out;
  };

  double value = (1.0 - static_cast<double>(n)) *
                 conditional_mi(cov_, future, source_past(std::nullopt), target_past);
  for (std::size_t k = 0; k < n; ++k) {
    value += conditional_mi(cov_, future, source_past(k), target_past);
  }
  return value;
}

double DynamicOInfo::operator()(std::string_view target,
                                std::span<const std::string> sources) const {
  Subset idx;
  for (const auto& s : sources) idx.push_back(column(s));
  return (*this)(column(target), idx);
}

namespace {

ReturnPanel sub_panel(const ReturnPanel& panel, std::string_view target,
                      std::span<const std::string> sources) {
  ReturnPanel out;
  out.window_id = panel.window_id;
  out.start = panel.start;
  std::vector<std::string> wanted{std::string(target)};
  wanted.insert(wanted.end(), sources.begin(), sources.end());
  out.values.resize(panel.rows(), static_cast<Index>(wanted.size()));
  for (std::size_t k = 0; k < wanted.size(); ++k) {
    auto it = std::find(panel.labels.begin(), panel.labels.end(), wanted[k]);
    if (it == panel.labels.end()) {
      throw std::invalid_argument("unknown column '" + wanted[k] + "'");
    }
    const auto j = static_cast<std::size_t>(it - panel.labels.begin());
    out.labels.push_back(wanted[k]);
    out.active.push_back(panel.active[j]);
    out.first_trade.push_back(panel.first_trade.empty() ? 0 : panel.first_trade[j]);
    out.values.col(static_cast<Index>(k)) = panel.values.col(static_cast<Index>(j));
  }
  return out;
}

bool better(MultipletKind kind, double candidate, double incumbent) {
  return kind == MultipletKind::redundant ? candidate > incumbent : candidate < incumbent;
}

}  // namespace

double dynamic_o_information(const ReturnPanel& panel, std::string_view target,
                             std::span<const std::string> sources, int lag,
                             const RidgePolicy& ridge) {
  const DynamicOInfo model(sub_panel(panel, target, sources), lag, ridge);
  return model(target, sources);
}

// ---------------------------------------------------------------------------
// Search

MultipletResult best_pair(const DynamicOInfo& model, std::string_view target,
                          MultipletKind kind) {
  const Index y = model.column(target);
  std::vector<Index> candidates;
  for (Index c = 0; c < static_cast<Index>(model.labels().size()); ++c) {
    if (c != y) candidates.push_back(c);
  }
  if (candidates.size() < 2) throw Error("best_pair: fewer than 2 candidate sources");

  MultipletResult best;
  best.window_id = model.window_id();
  best.target = std::string(target);
  best.kind = kind;
  best.size = 2;
  best.lag_p = model.lag();
  bool found = false;
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    for (std::size_t b = a + 1; b < candidates.size(); ++b) {
      const Index pair[2] = {candidates[a], candidates[b]};
      const double v = model(y, pair);
      if (!found || better(kind, v, best.value)) {
        found = true;
        best.value = v;
        best.members = {model.labels()[static_cast<std::size_t>(pair[0])],
                        model.labels()[static_cast<std::size_t>(pair[1])]};
      }
    }
  }
  return best;
}

MultipletResult best_pair(const ReturnPanel& panel, std::string_view target, int lag,
                          MultipletKind kind) {
  return best_pair(DynamicOInfo(panel, lag), target, kind);
}

MultipletResult greedy_extend(const DynamicOInfo& model, const MultipletResult& current) {
  const Index y = model.column(current.target);
  Subset members;
  for (const auto& m : current.members) members.push_back(model.column(m));

  MultipletResult next = current;
  next.size = current.size + 1;
  bool found = false;
  Subset trial = members;
  trial.push_back(0);
  for (Index c = 0; c < static_cast<Index>(model.labels().size()); ++c) {
    if (c == y || std::find(members.begin(), members.end(), c) != members.end()) continue;
    trial.back() = c;
    const double v = model(y, trial);
    if (!found || better(current.kind, v, next.value)) {
      found = true;
      next.value = v;
      next.members = current.members;
      next.members.push_back(model.labels()[static_cast<std::size_t>(c)]);
    }
  }
  if (!found) throw Error("exhausted");
  return next;
}

MultipletResult greedy_extend(const ReturnPanel& panel, const MultipletResult& current) {
  return greedy_extend(DynamicOInfo(panel, current.lag_p), current);
}

MultipletScan multiplet_scan(const ReturnPanel& panel, std::span<const std::string> targets,
                             int lag, int n_max, const RidgePolicy& ridge) {
  if (n_max < 2 || n_max > 8) throw std::invalid_argument("multiplet_scan: n_max must be in [2, 8]");
  MultipletScan scan;
  const DynamicOInfo model(panel, lag, ridge);
  scan.diagnostics = model.diagnostics();

  std::vector<std::string> all = targets.empty()
                                     ? model.labels()
                                     : std::vector<std::string>(targets.begin(), targets.end());
  const std::string where = "window " + std::to_string(panel.window_id) + ": ";
  for (const auto& target : all) {
    try {
      model.column(target);
      const int candidates = static_cast<int>(model.labels().size()) - 1;
      if (candidates < 2) {
        emit(&scan.diagnostics, "too_few_sources",
             where + "target '" + target + "' has fewer than 2 candidate sources");
        continue;
      }
      const int cap = std::min(n_max, candidates);
      if (cap < n_max) {
        emit(&scan.diagnostics, "size_capped",
             where + "target '" + target + "': multiplet size capped at " + std::to_string(cap));
      }
      for (MultipletKind kind : {MultipletKind::redundant, MultipletKind::synergistic}) {
        MultipletResult r = best_pair(model, target, kind);
        scan.results.push_back(r);
        while (r.size < cap) {
          r = greedy_extend(model, r);
          scan.results.push_back(r);
        }
      }
    } catch (const std::exception& e) {
      emit(&scan.diagnostics, "target_failed", where + "target '" + target + "': " + e.what());
    }
  }
  return scan;
}

SurrogateNull circular_shift_null(const ReturnPanel& panel, std::string_view target,
                                  std::span<const std::string> sources, int lag, int surrogates,
                                  int min_shift, std::uint64_t seed) {
  if (surrogates < 2) throw std::invalid_argument("circular_shift_null: need >= 2 surrogates");
  ReturnPanel sub = sub_panel(panel, target, sources);
  const Index t_len = sub.rows();
  if (t_len <= 2 * static_cast<Index>(min_shift)) {
    throw std::invalid_argument("circular_shift_null: series too short for the shift range");
  }

  SurrogateNull null;
  null.observed = DynamicOInfo(sub, lag)(target, sources);

  Xoshiro256 rng(seed);
  const Eigen::MatrixXd original = sub.values;
  for (int s = 0; s < surrogates; ++s) {
    for (Index c = 1; c < sub.cols(); ++c) {
      const Index shift = rng.uniform_int(min_shift, t_len - min_shift);
      const auto src = original.col(c);
      auto dst = sub.values.col(c);
      dst.head(t_len - shift) = src.tail(t_len - shift);
      dst.tail(shift) = src.head(shift);
    }
    null.values.push_back(DynamicOInfo(sub, lag)(target, sources));
  }
  const double n = static_cast<double>(null.values.size());
  null.mean = std::accumulate(null.values.begin(), null.values.end(), 0.0) / n;
  double ss = 0;
  for (double v : null.values) ss += (v - null.mean) * (v - null.mean);
  null.stddev = std::sqrt(ss / (n - 1));
  return null;
}

// ---------------------------------------------------------------------------
// Summaries

namespace {

AssetClass class_of(const AssetRegistry& registry, const std::string& ticker,
                    std::set<std::string>& reported, Diagnostics* diagnostics) {
  auto it = registry.find(ticker);
  if (it != registry.end()) return it->second.asset_class;
  if (reported.insert(ticker).second) {
    emit(diagnostics, "unregistered_asset",
         "asset '" + ticker + "' missing from registry; counted as unknown");
  }
  return AssetClass::unknown;
}

}  // namespace

std::vector<MembershipRow> membership_counts(std::span<const MultipletResult> results,
                                             const AssetRegistry& registry,
                                             Diagnostics* diagnostics) {
  std::map<std::string, MembershipRow> rows;
  std::set<std::string> reported;
  for (const auto& r : results) {
    for (const auto& m : r.members) {
      auto [it, inserted] = rows.try_emplace(m);
      if (inserted) {
        it->second.ticker = m;
        it->second.asset_class = class_of(registry, m, reported, diagnostics);
      }
      (r.kind == MultipletKind::redundant ? it->second.redundant : it->second.synergistic) += 1;
    }
  }
  std::vector<MembershipRow> out;
  for (auto& [ticker, row] : rows) out.push_back(std::move(row));
  std::stable_sort(out.begin(), out.end(), [](const MembershipRow& a, const MembershipRow& b) {
    return a.total() > b.total();
  });
  return out;
}

std::vector<ClassFractionRow> class_fractions(std::span<const MultipletResult> results,
                                              const AssetRegistry& registry,
                                              Diagnostics* diagnostics) {
  std::map<std::pair<MultipletKind, int>, ClassFractionRow> groups;
  std::set<std::string> reported;
  for (const auto& r : results) {
    if (r.members.empty()) continue;
    auto [it, inserted] = groups.try_emplace({r.kind, r.size});
    auto& row = it->second;
    if (inserted) {
      row.kind = r.kind;
      row.size = r.size;
      for (auto c : {AssetClass::coin, AssetClass::token, AssetClass::stablecoin}) {
        row.fraction[c] = 0.0;
      }
    }
    // pooled member count per class; the group size is fixed
    for (const auto& m : r.members) row.fraction[class_of(registry, m, reported, diagnostics)] += 1;
    row.multiplets += 1;
  }
  std::vector<ClassFractionRow> out;
  for (auto& [key, row] : groups) {
    const double members = static_cast<double>(row.size) * row.multiplets;
    for (auto& [cls, count] : row.fraction) count /= members;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace infoflow
