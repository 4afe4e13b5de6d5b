// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "infoflow/estimators.hpp"
#include "infoflow/granger.hpp"
#include "infoflow/network.hpp"
#include "infoflow/oinfo.hpp"
#include "infoflow/pipeline.hpp"
#include "infoflow/synth.hpp"
#include "oracles.hpp"

using namespace infoflow;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

CouplingSpec white(int n, std::uint64_t seed) {
  CouplingSpec spec;
  spec.n_vars = n;
  spec.noise_variances = VectorXd::Ones(n);
  spec.seed = seed;
  return spec;
}

Outcome closed_forms() {
  const MatrixXd one = MatrixXd::Identity(1, 1);
  const Subset a{0}, b{1};
  const double h = gaussian_entropy(one, a);
  const double h_ref = 0.5 * std::log(2 * std::numbers::pi * std::numbers::e);
  Eigen::Matrix2d m;
  m << 1, 0.5, 0.5, 1;
  const double mi = mutual_information(m, a, b);
  const double err = std::max(std::abs(h - h_ref), std::abs(mi - (-0.5 * std::log(0.75))));
  return {err < 1e-12, "H=" + fmt("%.10f", h) + " MI=" + fmt("%.10f", mi) +
                           " max err=" + fmt("%.2e", err)};
}

Outcome o_information_signs() {
  Eigen::Matrix3d sa, sb;
  sa << 1, 0, 1, 0, 1, 1, 1, 1, 3;
  sb << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  const Subset all{0, 1, 2};
  const double oa = o_information(sa, all);
  const double ob = o_information(sb, all);
  const double err = std::max(std::abs(oa - oracle::o_information(sa, all)),
                              std::abs(ob - oracle::o_information(sb, all)));
  bool pairs_zero = true;
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 200; ++trial) {
    const MatrixXd cov = oracle::random_spd(gen, 5);
    for (Index i = 0; i < 5; ++i)
      for (Index j = i + 1; j < 5; ++j) {
        const Subset s{i, j};
        pairs_zero = pairs_zero && o_information(cov, s) == 0.0;
      }
  }
  const bool pass = err < 1e-9 && oa < 0 && ob > 0 && pairs_zero;
  return {pass, "Omega(A)=" + fmt("%.7f", oa) + " Omega(B)=" + fmt("%.7f", ob) +
                    " oracle err=" + fmt("%.2e", err) +
                    (pairs_zero ? " pairs exactly 0" : " nonzero pair")};
}

Outcome decomposition() {
  std::mt19937_64 gen(2);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Index d = 3 + trial % 6;
    const MatrixXd cov = oracle::random_spd(gen, d);
    const Subset all = oracle::iota(d);
    const Subset sources = oracle::iota(d - 1);
    const double os = sources.size() >= 2 ? o_information(cov, sources) : 0.0;
    worst = std::max(worst, std::abs(o_information(cov, all) - os - delta_y(cov, sources, d - 1)));
  }
  return {worst < 1e-9, "max violation=" + fmt("%.2e", worst)};
}

Outcome granger_oracle() {
  CouplingSpec spec;
  spec.n_vars = 2;
  spec.couplings = {{1, 1, 1, 0.5}, {0, 1, 1, 0.9}};
  spec.noise_variances = Eigen::Vector2d(1, 1);
  spec.seed = 2024;
  const auto panel = gen_var(spec, 1000000);
  const VectorXd x = panel.values.col(0);
  const VectorXd y = panel.values.col(1);
  const GcEdge e = pairwise_gc(x, y, 1, 1, 0.01);
  const double te = transfer_entropy_gaussian(x, y, 1);
  const double dev = std::abs(e.f_value - std::log(1.81));
  const double gap = std::abs(e.f_value - 2 * te);
  return {dev <= 0.01 && gap < 1e-9,
          "F=" + fmt("%.6f", e.f_value) + " |F-ln1.81|=" + fmt("%.2e", dev) +
              " |F-2TE|=" + fmt("%.2e", gap)};
}

Outcome null_calibration() {
  int hits = 0;
  const int pairs = 2000;
  for (int k = 0; k < pairs; ++k) {
    const auto panel = gen_var(white(2, 900000 + k), 10080);
    const VectorXd x = panel.values.col(0);
    const VectorXd y = panel.values.col(1);
    const SeriesRef xr(x);
    const int p = select_order_bic(y, &xr, 20);
    if (pairwise_gc(x, y, p, p, 0.01).significant) ++hits;
  }
  const double fpr = static_cast<double>(hits) / pairs;
  return {fpr >= 0.005 && fpr <= 0.02, "FPR=" + fmt("%.4f", fpr) + " (" + std::to_string(hits) +
                                           "/" + std::to_string(pairs) + ")"};
}

Outcome scale_invariance() {
  CouplingSpec spec = fixture::chain(5, 31);
  const auto base = gen_var(spec, 10080);
  const auto gc0 = gc_matrix(base, GcConfig{5, 0.01});
  const std::string top0 = top_out_strength(gc0.adjacency);
  const auto cov0 = estimate_covariance(base.values);
  const Subset all = oracle::iota(5);
  const double omega0 = o_information(cov0, all);
  const std::vector<std::string> srcs{"X0", "X1", "X3"};
  const double d0 = dynamic_o_information(base, "X2", srcs);

  double worst = 0;
  bool same_top = true;
  for (double c : {1e-3, 1e3}) {
    for (Index j = 0; j < base.cols(); ++j) {
      ReturnPanel scaled = base;
      scaled.values.col(j) *= c;
      const auto gc = gc_matrix(scaled, GcConfig{5, 0.01});
      for (std::size_t e = 0; e < gc.edges.size(); ++e) {
        worst = std::max(worst, std::abs(gc.edges[e].f_value - gc0.edges[e].f_value));
      }
      same_top = same_top && top_out_strength(gc.adjacency) == top0;
      const auto cov = estimate_covariance(scaled.values);
      worst = std::max(worst, std::abs(o_information(cov, all) - omega0));
      worst = std::max(worst, std::abs(dynamic_o_information(scaled, "X2", srcs) - d0));
    }
  }
  return {worst < 1e-9 && same_top,
          "max change=" + fmt("%.2e", worst) + " top k_out " + top0 +
              (same_top ? " unchanged" : " changed")};
}

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

Outcome greedy_vs_exhaustive() {
  int pair_hits = 0, triple_hits = 0;
  const int panels = 100;
  for (int k = 0; k < panels; ++k) {
    const auto kind = k % 2 ? MultipletKind::redundant : MultipletKind::synergistic;
    const auto planted = gen_planted_highorder(kind, 4, 100000, 5000 + k);
    const DynamicOInfo model(planted.panel, 1);
    const Index target = model.column(planted.target);
    std::vector<Index> candidates;
    for (Index j = 0; j < static_cast<Index>(model.labels().size()); ++j)
      if (j != target) candidates.push_back(j);
    const bool maximize = kind == MultipletKind::redundant;
    auto f = [&](const std::vector<Index>& s) { return model(target, s); };
    auto names = [&](const std::vector<Index>& s) {
      std::vector<std::string> out;
      for (Index j : s) out.push_back(model.labels()[static_cast<std::size_t>(j)]);
      return sorted(out);
    };
    const auto pair = best_pair(model, planted.target, kind);
    if (sorted(pair.members) == names(oracle::exhaustive(candidates, 2, maximize, f).members))
      ++pair_hits;
    const auto triple = greedy_extend(model, pair);
    if (sorted(triple.members) == names(oracle::exhaustive(candidates, 3, maximize, f).members))
      ++triple_hits;
  }
  return {pair_hits == panels && triple_hits >= 90,
          "pairs " + std::to_string(pair_hits) + "/100, triples " + std::to_string(triple_hits) +
              "/100"};
}

Outcome sign_recovery() {
  int syn = 0, red = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const auto s = gen_planted_highorder(MultipletKind::synergistic, 2, 100000, 7000 + seed);
    const auto r = gen_planted_highorder(MultipletKind::redundant, 2, 100000, 8000 + seed);
    if (dynamic_o_information(s.panel, s.target, s.planted) < 0) ++syn;
    if (dynamic_o_information(r.panel, r.target, r.planted) > 0) ++red;
  }
  return {syn >= 95 && red >= 95,
          "synergistic<0 " + std::to_string(syn) + "/100, redundant>0 " + std::to_string(red) +
              "/100"};
}

std::map<fs::path, std::string> snapshot(const fs::path& dir) {
  std::map<fs::path, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir)] = fixture::slurp(e.path());
  return out;
}

Outcome pipeline_contract() {
  const auto in = fixture::scratch("acceptance_tape");
  const auto out = fixture::scratch("acceptance_out");
  fixture::write_tape_dir(in, fixture::chain(10, 99), 4, 1578268800);  // 2020-01-06

  RunConfig config;
  config.input_dir = in;
  config.out_dir = out;
  Logger quiet(nullptr);
  const auto t0 = std::chrono::steady_clock::now();
  const auto report = run_pipeline(config, quiet);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::vector<std::string> problems;
  if (report.exit_code != ExitCode::ok) problems.push_back("exit code");
  int edge_lists = 0;
  for (int w = 0; w < 4; ++w) {
    if (fs::exists(out / "windows" / ("edges_" + std::to_string(w) + ".csv"))) ++edge_lists;
    std::istringstream s(fixture::slurp(out / "windows" / ("strengths_" + std::to_string(w) + ".csv")));
    std::string line;
    std::getline(s, line);
    double in_sum = 0, out_sum = 0;
    while (std::getline(s, line)) {
      const auto f = split_csv(line);
      in_sum += std::stod(f[1]);
      out_sum += std::stod(f[2]);
    }
    if (std::abs(in_sum - out_sum) > 1e-9 * std::max(1.0, in_sum)) problems.push_back("strength sums");
  }
  if (edge_lists != 4) problems.push_back("edge lists");

  std::istringstream corr(fixture::slurp(out / "window_corr.csv"));
  std::string line;
  std::getline(corr, line);
  int rows = 0;
  while (std::getline(corr, line)) {
    const auto f = split_csv(line);
    if (f.size() != 5 || std::stod(f[static_cast<std::size_t>(rows) + 1]) != 1.0)
      problems.push_back("window_corr row " + std::to_string(rows));
    ++rows;
  }
  if (rows != 4) problems.push_back("window_corr shape");

  const auto first = snapshot(out);
  fs::remove_all(out);
  run_pipeline(config, quiet);
  if (snapshot(out) != first) problems.push_back("rerun differs");
  if (secs >= 60) problems.push_back("too slow");
  fs::remove_all(in);

  std::string detail = "4 windows in " + fmt("%.1f", secs) + " s, " + std::to_string(first.size()) +
                       " files";
  for (const auto& p : problems) detail += "; " + p;
  return {problems.empty(), detail + (problems.empty() ? ", rerun byte-identical" : "")};
}

Outcome calendar_fidelity() {
  const std::int64_t begin = 1577664000;  // 2019-12-30 00:00 UTC
  const std::int64_t end = 1640995200;    // 2022-01-01 00:00 UTC
  const Index minutes = (end - begin) / kSecondsPerMinute;
  CouplingSpec spec = white(2, 10);
  const auto panel = gen_var(spec, minutes);
  TapeOptions opts;
  opts.start = begin;
  opts.seed = 10;
  std::vector<AssetSeries> series;
  std::int64_t first_minute = std::numeric_limits<std::int64_t>::max(), last_minute = 0;
  for (const auto& t : gen_trade_tape(panel, opts)) {
    first_minute = std::min(first_minute, minute_of(t.trades.front().timestamp));
    last_minute = std::max(last_minute, minute_of(t.trades.back().timestamp));
  }
  const auto cal = calendar_from_data(first_minute, last_minute);
  for (const auto& t : gen_trade_tape(panel, opts)) {
    const auto bars = aggregate_minutes(t.trades, MinuteRange{first_minute, cal.end / kSecondsPerMinute});
    series.push_back(make_asset_series(t.ticker, t.trades.front().timestamp, bars));
  }
  const auto windows = slice_windows(series, cal);
  const Index last_rows = windows.empty() ? 0 : windows.back().rows();
  bool full = true;
  for (std::size_t k = 0; k + 1 < windows.size(); ++k) full = full && windows[k].rows() == kMinutesPerWindow;
  const bool pass = windows.size() == 104 && last_rows < kMinutesPerWindow && full;
  return {pass, std::to_string(windows.size()) + " windows from " + format_date(cal.start) +
                    ", last window " + std::to_string(last_rows) + " minutes"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0 = no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "gaussian entropy closed forms", 1, closed_forms},
      {2, "o-information signs and values", 1, o_information_signs},
      {3, "decomposition identity", 10, decomposition},
      {4, "granger oracle", 30, granger_oracle},
      {5, "null calibration", 300, null_calibration},
      {6, "scale invariance", 0, scale_invariance},
      {7, "greedy vs exhaustive", 0, greedy_vs_exhaustive},
      {8, "planted sign recovery", 300, sign_recovery},
      {9, "pipeline contract", 0, pipeline_contract},
      {10, "calendar fidelity", 0, calendar_fidelity},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs >= c.budget_s) {
      o.pass = false;
      o.detail += "; over runtime budget";
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << o.detail
              << " (" << fmt("%.2f", secs) << " s)" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
