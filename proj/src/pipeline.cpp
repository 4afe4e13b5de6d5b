#include "infoflow/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "infoflow/granger.hpp"
#include "infoflow/io.hpp"
#include "infoflow/network.hpp"
#include "infoflow/oinfo.hpp"
#include "infoflow/rng.hpp"

namespace infoflow {

namespace {

using json = nlohmann::ordered_json;

fs::path window_file(const fs::path& dir, std::string_view stem, int id, std::string_view ext) {
  return dir / (std::string(stem) + "_" + std::to_string(id) + std::string(ext));
}

// Writes through a temporary so an interrupted run never leaves a truncated
// artifact behind.
template <typename Body>
void write_file(const fs::path& path, Body&& body) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    body(out);
    out.flush();
    if (!out) throw Error("write failed: " + path.string());
  }
  fs::rename(tmp, path);
}

std::ifstream open_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

json read_json(const fs::path& path) {
  auto in = open_file(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

json to_json(const Diagnostics& diagnostics) {
  json out = json::array();
  for (const auto& d : diagnostics) out.push_back({{"code", d.code}, {"message", d.message}});
  return out;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

std::optional<double> mean_of(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

fs::path registry_path(const RunConfig& config) {
  return config.registry.empty() ? config.input_dir / "assets.csv" : config.registry;
}

AssetRegistry load_registry(const RunConfig& config) {
  const fs::path path = registry_path(config);
  if (!fs::is_regular_file(path)) return {};
  auto in = open_file(path);
  return read_registry(in);
}

std::int64_t unix_seconds(std::chrono::sys_days day) {
  return std::chrono::duration_cast<std::chrono::seconds>(day.time_since_epoch()).count();
}

// ---------------------------------------------------------------------------
// Window stages on an already parsed panel

void gc_stage(const RunConfig& config, const ReturnPanel& panel, Diagnostics* diag) {
  const fs::path dir = windows_dir(config);
  const int id = panel.window_id;
  const GcNetwork net = gc_matrix(panel, GcConfig{config.p_max, config.alpha});
  diag->insert(diag->end(), net.diagnostics.begin(), net.diagnostics.end());

  std::vector<double> all;
  std::vector<double> significant;
  for (const auto& e : net.edges) {
    all.push_back(e.f_value);
    if (e.significant) significant.push_back(e.f_value);
  }
  write_file(window_file(dir, "edges", id, ".csv"),
             [&](std::ostream& out) { write_edges(out, id, net.edges); });
  write_file(window_file(dir, "strengths", id, ".csv"),
             [&](std::ostream& out) { write_strengths(out, net.adjacency); });
  write_file(window_file(dir, "matrix", id, ".csv"),
             [&](std::ostream& out) { write_dense_matrix(out, net.adjacency); });

  json summary;
  summary["window"] = id;
  summary["rows"] = panel.rows();
  summary["nodes"] = net.adjacency.labels;
  summary["excluded"] = net.excluded;
  summary["pairs"] = all.size();
  summary["significant"] = significant.size();
  summary["mean_f_all"] = optional_json(mean_of(all));
  summary["mean_f_significant"] = optional_json(mean_of(significant));
  summary["diagnostics"] = to_json(net.diagnostics);
  write_file(window_file(dir, "gc", id, ".json"),
             [&](std::ostream& out) { out << summary.dump(2) << '\n'; });
}

void oinfo_stage(const RunConfig& config, const ReturnPanel& panel, Diagnostics* diag) {
  const fs::path dir = windows_dir(config);
  const int id = panel.window_id;
  const MultipletScan scan = multiplet_scan(panel, {}, config.oinfo_lag, config.n_max,
                                            RidgePolicy{config.ridge, config.ridge_condition});
  diag->insert(diag->end(), scan.diagnostics.begin(), scan.diagnostics.end());
  write_file(window_file(dir, "multiplets", id, ".csv"),
             [&](std::ostream& out) { write_multiplets(out, scan.results); });

  // largest stored multiplet of each (target, kind)
  std::map<std::pair<std::string, MultipletKind>, const MultipletResult*> largest;
  for (const auto& r : scan.results) {
    auto& slot = largest[{r.target, r.kind}];
    if (slot == nullptr || r.size > slot->size) slot = &r;
  }
  std::vector<double> red;
  std::vector<double> syn;
  for (const auto& [key, r] : largest) {
    (key.second == MultipletKind::redundant ? red : syn).push_back(r->value);
  }

  json summary;
  summary["window"] = id;
  summary["lag"] = config.oinfo_lag;
  summary["n_max"] = config.n_max;
  summary["results"] = scan.results.size();
  summary["mean_redundancy"] = optional_json(mean_of(red));
  summary["mean_synergy"] = optional_json(mean_of(syn));
  summary["diagnostics"] = to_json(scan.diagnostics);
  write_file(window_file(dir, "oinfo", id, ".json"),
             [&](std::ostream& out) { out << summary.dump(2) << '\n'; });
}

ReturnPanel load_panel(const WindowInfo& window) {
  auto in = open_file(window.panel);
  return read_panel(in, window.id);
}

std::vector<fs::path> window_outputs(const RunConfig& config, int id) {
  const fs::path dir = windows_dir(config);
  return {window_file(dir, "edges", id, ".csv"),      window_file(dir, "strengths", id, ".csv"),
          window_file(dir, "matrix", id, ".csv"),     window_file(dir, "multiplets", id, ".csv"),
          window_file(dir, "gc", id, ".json"),        window_file(dir, "oinfo", id, ".json")};
}

std::vector<AdjacencyMatrix> load_networks(const RunConfig& config,
                                           const std::vector<WindowInfo>& windows, Logger& log) {
  const fs::path dir = windows_dir(config);
  std::vector<AdjacencyMatrix> out;
  for (const auto& w : windows) {
    const auto edges_path = window_file(dir, "edges", w.id, ".csv");
    const auto nodes_path = window_file(dir, "strengths", w.id, ".csv");
    if (!fs::exists(edges_path) || !fs::exists(nodes_path)) {
      log.warn("network_missing", {{"window", std::to_string(w.id)}});
      continue;
    }
    auto edges_in = open_file(edges_path);
    auto nodes_in = open_file(nodes_path);
    const auto edges = read_edges(edges_in);
    out.push_back(adjacency_from_edges(w.id, read_strength_labels(nodes_in), edges, config.alpha));
  }
  return out;
}

std::vector<MultipletResult> load_multiplets(const RunConfig& config,
                                             const std::vector<WindowInfo>& windows, Logger& log) {
  const fs::path dir = windows_dir(config);
  std::vector<MultipletResult> out;
  for (const auto& w : windows) {
    const auto path = window_file(dir, "multiplets", w.id, ".csv");
    if (!fs::exists(path)) {
      log.warn("multiplets_missing", {{"window", std::to_string(w.id)}});
      continue;
    }
    auto in = open_file(path);
    auto rows = read_multiplets(in, config.oinfo_lag);
    out.insert(out.end(), std::make_move_iterator(rows.begin()),
               std::make_move_iterator(rows.end()));
  }
  return out;
}

json interpretations(const RunConfig& config) {
  json j;
  j["window_returns"] = "returns computed on the continuous minute series";
  j["activity"] = "asset active when its first trade is at or before the window start";
  j["total_volume"] = "sum over assets and minutes of volume times minute price";
  j["mean_f"] = config.mean_f_significant_only ? "significant edges only"
                                               : "all evaluated ordered pairs";
  j["window_correlation"] =
      "Pearson over ordered node pairs present in both windows, at least 10 shared pairs";
  j["average_network"] = "edge mean over windows where both endpoints are present";
  j["age"] = "number of windows in which the asset is present";
  j["oinfo_lag"] = config.oinfo_lag;
  j["indicator_multiplets"] = "largest stored multiplet of each target and kind";
  j["membership_counts"] = "one count per stored multiplet size";
  j["class_fractions"] = "mean class share over the best multiplets of each kind and size";
  return j;
}

}  // namespace

fs::path panels_dir(const RunConfig& config) {
  return config.input_kind == InputKind::panels ? config.input_dir : config.out_dir / "panels";
}

fs::path windows_dir(const RunConfig& config) { return config.out_dir / "windows"; }

// ---------------------------------------------------------------------------
// Ingest

IngestSummary run_ingest(const RunConfig& config, Logger& log) {
  if (config.input_kind != InputKind::trades) {
    throw ConfigError("ingest needs trade input (input.kind = trades)");
  }
  const std::string suffix = config.fiat + ".csv";
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(config.input_dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > suffix.size() && name.ends_with(suffix)) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw Error("no *" + suffix + " trade files in " + config.input_dir.string());
  }

  IngestSummary summary;
  Diagnostics& diag = summary.diagnostics;
  const AssetRegistry registry = load_registry(config);

  struct Tape {
    std::string ticker;
    std::vector<TradeRecord> trades;
  };
  std::vector<Tape> tapes;
  for (const auto& path : files) {
    const std::string name = path.filename().string();
    Tape tape{name.substr(0, name.size() - suffix.size()), {}};
    auto in = open_file(path);
    ParseResult parsed = parse_trades(in);
    for (auto& d : parsed.diagnostics) {
      diag.push_back({d.code, tape.ticker + ": " + d.message});
    }
    if (parsed.trades.empty()) {
      emit(&diag, "asset_empty", tape.ticker + ": no valid trades");
      continue;
    }
    tape.trades = std::move(parsed.trades);
    log.info("parsed", {{"ticker", tape.ticker},
                        {"trades", std::to_string(tape.trades.size())},
                        {"rejected", std::to_string(parsed.rejected)}});
    tapes.push_back(std::move(tape));
  }
  if (tapes.empty()) throw Error("no valid trades in " + config.input_dir.string());

  std::int64_t first_minute = std::numeric_limits<std::int64_t>::max();
  std::int64_t last_minute = std::numeric_limits<std::int64_t>::min();
  for (const auto& t : tapes) {
    first_minute = std::min(first_minute, minute_of(t.trades.front().timestamp));
    last_minute = std::max(last_minute, minute_of(t.trades.back().timestamp));
  }

  WindowCalendar cal;
  try {
    if (config.calendar_start) {
      const std::int64_t start = unix_seconds(*parse_yyyymmdd(*config.calendar_start));
      const std::int64_t data_end = (last_minute + 1) * kSecondsPerMinute;
      if (data_end <= start) throw ConfigError("calendar start is after the last trade");
      const std::int64_t span = kMinutesPerWindow * kSecondsPerMinute;
      const int count = config.window_count.value_or(
          static_cast<int>((data_end - start + span - 1) / span));
      cal = make_calendar(start, count, data_end);
    } else {
      cal = calendar_from_data(first_minute, last_minute);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("calendar: ") + e.what());
  }

  const MinuteRange span{first_minute, cal.end / kSecondsPerMinute};
  std::vector<AssetSeries> series;
  std::vector<double> volume(static_cast<std::size_t>(cal.window_count), 0.0);
  for (const auto& t : tapes) {
    const auto bars = aggregate_minutes(t.trades, span, &diag);
    if (bars.size() < 2) {
      emit(&diag, "asset_too_short", t.ticker + ": fewer than two minute bars in the calendar");
      continue;
    }
    series.push_back(make_asset_series(t.ticker, t.trades.front().timestamp, bars));
    const auto v = window_dollar_volume(bars, cal);
    for (std::size_t k = 0; k < v.size(); ++k) volume[k] += v[k];
  }

  const auto panels = slice_windows(series, cal, registry.empty() ? nullptr : &registry, &diag);
  const fs::path dir = panels_dir(config);
  std::vector<WindowRecord> table;
  for (const auto& panel : panels) {
    const int k = panel.window_id;
    WindowInfo info{k, format_date(cal.window_start(k)), volume[static_cast<std::size_t>(k)],
                    window_file(dir, "panel", k, ".csv")};
    write_file(info.panel, [&](std::ostream& out) { write_panel(out, panel); });
    table.push_back({k, info.start_date, cal.window_start(k),
                     static_cast<int>(cal.window(k).size()), info.total_volume});
    summary.windows.push_back(std::move(info));
  }
  write_file(dir / "windows.csv", [&](std::ostream& out) { write_window_table(out, table); });
  log.info("ingested", {{"assets", std::to_string(series.size())},
                        {"windows", std::to_string(cal.window_count)},
                        {"start", format_date(cal.start)},
                        {"diagnostics", std::to_string(diag.size())}});
  return summary;
}

std::vector<WindowInfo> discover_windows(const RunConfig& config) {
  const fs::path dir = panels_dir(config);
  if (!fs::is_directory(dir)) throw Error("panel directory not found: " + dir.string());
  std::vector<WindowInfo> windows;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (!entry.is_regular_file() || !name.starts_with("panel_") || !name.ends_with(".csv")) {
      continue;
    }
    const std::string_view digits(name.data() + 6, name.size() - 10);
    int id = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) continue;
    WindowInfo w;
    w.id = id;
    w.panel = entry.path();
    windows.push_back(std::move(w));
  }
  std::sort(windows.begin(), windows.end(),
            [](const WindowInfo& a, const WindowInfo& b) { return a.id < b.id; });
  if (fs::is_regular_file(dir / "windows.csv")) {
    auto in = open_file(dir / "windows.csv");
    std::map<int, WindowRecord> table;
    for (auto& r : read_window_table(in)) table.emplace(r.window_id, std::move(r));
    for (auto& w : windows) {
      if (auto it = table.find(w.id); it != table.end()) {
        w.start_date = it->second.start_date;
        w.total_volume = it->second.total_volume;
      }
    }
  }
  return windows;
}

std::vector<std::string> for_each_window(const RunConfig& config, std::size_t count,
                                         const std::function<void(std::size_t)>& task) {
  std::vector<std::string> errors(count);
  std::vector<char> started(count, 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  auto worker = [&] {
    for (;;) {
      if (config.strict && stop.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      started[i] = 1;
      try {
        task(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        if (errors[i].empty()) errors[i] = "unknown error";
        stop.store(true);
      }
    }
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), count);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(worker);
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (!started[i]) errors[i] = "not run";
  }
  return errors;
}

void run_gc_window(const RunConfig& config, const WindowInfo& window, Logger& log) {
  Diagnostics diag;
  gc_stage(config, load_panel(window), &diag);
  log.info("gc_done", {{"window", std::to_string(window.id)},
                       {"diagnostics", std::to_string(diag.size())}});
}

void run_oinfo_window(const RunConfig& config, const WindowInfo& window, Logger& log) {
  Diagnostics diag;
  oinfo_stage(config, load_panel(window), &diag);
  log.info("oinfo_done", {{"window", std::to_string(window.id)},
                          {"diagnostics", std::to_string(diag.size())}});
}

// ---------------------------------------------------------------------------
// Cross-window outputs

void write_network_stats(const RunConfig& config, const std::vector<WindowInfo>& windows,
                         Logger& log) {
  const auto networks = load_networks(config, windows, log);
  if (!networks.empty()) {
    const AdjacencyMatrix avg = average_network(networks);
    write_file(config.out_dir / "avg_network.csv",
               [&](std::ostream& out) { write_dense_matrix(out, avg); });
    write_file(config.out_dir / "avg_strengths.csv",
               [&](std::ostream& out) { write_strengths(out, avg); });

    const StrengthHistory history = strength_history(networks);
    std::optional<AgeStrengthCorrelation> corr;
    try {
      corr = age_strength_correlation(history.age, history.mean_k_in, history.mean_k_out);
    } catch (const std::exception& e) {
      log.warn("age_strength_undefined", {{"reason", e.what()}});
    }
    write_file(config.out_dir / "age_strength.csv",
               [&](std::ostream& out) { write_age_strength(out, history); });
    write_file(config.out_dir / "age_strength_corr.csv",
               [&](std::ostream& out) { write_age_strength_corr(out, corr); });
  } else {
    log.warn("no_networks");
  }

  const auto multiplets = load_multiplets(config, windows, log);
  const AssetRegistry registry = load_registry(config);
  Diagnostics diag;
  const auto membership = membership_counts(multiplets, registry, &diag);
  const auto fractions = class_fractions(multiplets, registry, nullptr);
  write_file(config.out_dir / "membership.csv",
             [&](std::ostream& out) { write_membership(out, membership); });
  write_file(config.out_dir / "class_fractions.csv",
             [&](std::ostream& out) { write_class_fractions(out, fractions); });
  if (!diag.empty()) {
    log.warn("unregistered_assets", {{"count", std::to_string(diag.size())}});
  }
}

void write_window_correlation(const RunConfig& config, const std::vector<WindowInfo>& windows,
                              Logger& log) {
  const auto networks = load_networks(config, windows, log);
  const WindowCorrelation corr = window_correlation(networks, config.alpha);
  std::ostringstream rho;
  std::ostringstream p;
  write_window_corr(rho, p, corr);
  write_file(config.out_dir / "window_corr.csv", [&](std::ostream& out) { out << rho.str(); });
  write_file(config.out_dir / "window_corr_p.csv", [&](std::ostream& out) { out << p.str(); });
}

void write_window_indicators(const RunConfig& config, const std::vector<WindowInfo>& windows,
                             Logger& log) {
  const fs::path dir = windows_dir(config);
  std::vector<WindowSummary> rows;
  for (const auto& w : windows) {
    WindowSummary s;
    s.window_id = w.id;
    s.start_date = w.start_date;
    s.total_volume = w.total_volume;
    const auto gc_path = window_file(dir, "gc", w.id, ".json");
    if (fs::exists(gc_path)) {
      const json gc = read_json(gc_path);
      s.mean_f = optional_from(gc, config.mean_f_significant_only ? "mean_f_significant"
                                                                  : "mean_f_all");
    } else {
      log.warn("gc_summary_missing", {{"window", std::to_string(w.id)}});
    }
    const auto oi_path = window_file(dir, "oinfo", w.id, ".json");
    if (fs::exists(oi_path)) {
      const json oi = read_json(oi_path);
      s.mean_redundancy = optional_from(oi, "mean_redundancy");
      s.mean_synergy = optional_from(oi, "mean_synergy");
    } else {
      log.warn("oinfo_summary_missing", {{"window", std::to_string(w.id)}});
    }
    rows.push_back(std::move(s));
  }
  const auto table = window_indicators(rows, 10);
  write_file(config.out_dir / "indicators.csv",
             [&](std::ostream& out) { write_indicators(out, table); });
}

// ---------------------------------------------------------------------------
// Full run

PipelineReport run_pipeline(const RunConfig& config, Logger& log) {
  config.validate();
  fs::create_directories(config.out_dir);
  const fs::path manifest_path = config.out_dir / "manifest.json";
  const std::string hash = config.analysis_hash();

  json previous;
  if (fs::exists(manifest_path)) {
    try {
      previous = read_json(manifest_path);
    } catch (const Error& e) {
      log.warn("manifest_unreadable", {{"reason", e.what()}});
    }
  }
  const bool resumable = previous.is_object() && previous.value("config_hash", "") == hash;
  if (previous.is_object() && !resumable) log.info("config_changed", {{"hash", hash}});

  PipelineReport report;
  json ingest = json::object();
  std::vector<WindowInfo> windows;
  if (config.input_kind == InputKind::trades) {
    bool reuse = resumable && previous.contains("ingest") &&
                 previous["ingest"].value("status", "") == "ok" &&
                 fs::exists(panels_dir(config) / "windows.csv");
    if (reuse) {
      windows = discover_windows(config);
      reuse = static_cast<int>(windows.size()) == previous["ingest"].value("windows", -1);
    }
    if (reuse) {
      ingest = previous["ingest"];
      log.info("ingest_resumed", {{"windows", std::to_string(windows.size())}});
    } else {
      const IngestSummary s = run_ingest(config, log);
      ingest["status"] = "ok";
      ingest["windows"] = s.windows.size();
      ingest["diagnostics"] = to_json(s.diagnostics);
      windows = discover_windows(config);
    }
  } else {
    windows = discover_windows(config);
    ingest["status"] = "external panels";
    ingest["windows"] = windows.size();
  }
  report.windows = static_cast<int>(windows.size());

  std::map<int, json> done;
  if (resumable && previous.contains("windows")) {
    for (const auto& entry : previous["windows"]) {
      if (entry.value("status", "") != "ok") continue;
      const int id = entry.value("window", -1);
      const auto outputs = window_outputs(config, id);
      if (std::all_of(outputs.begin(), outputs.end(),
                      [](const fs::path& p) { return fs::exists(p); })) {
        done.emplace(id, entry);
      }
    }
  }

  std::vector<json> entries(windows.size());
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (auto it = done.find(windows[i].id); it != done.end()) {
      entries[i] = it->second;
      ++report.resumed;
    } else {
      todo.push_back(i);
    }
  }

  const auto errors = for_each_window(config, todo.size(), [&](std::size_t k) {
    const WindowInfo& w = windows[todo[k]];
    const auto t0 = std::chrono::steady_clock::now();
    Diagnostics diag;
    const ReturnPanel panel = load_panel(w);
    gc_stage(config, panel, &diag);
    oinfo_stage(config, panel, &diag);
    json entry;
    entry["window"] = w.id;
    entry["start_date"] = w.start_date;
    entry["status"] = "ok";
    entry["rows"] = panel.rows();
    entry["diagnostics"] = to_json(diag);
    entries[todo[k]] = std::move(entry);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log.info("window_done", {{"window", std::to_string(w.id)},
                             {"seconds", format_double(std::round(secs * 1000) / 1000)},
                             {"diagnostics", std::to_string(diag.size())}});
  });

  for (std::size_t k = 0; k < todo.size(); ++k) {
    if (errors[k].empty()) {
      ++report.analysed;
      continue;
    }
    const WindowInfo& w = windows[todo[k]];
    ++report.failed;
    json entry;
    entry["window"] = w.id;
    entry["start_date"] = w.start_date;
    entry["status"] = errors[k] == "not run" ? "not run" : "failed";
    entry["diagnostics"] = json::array({{{"code", "window_failed"}, {"message", errors[k]}}});
    entries[todo[k]] = std::move(entry);
    log.error("window_failed", {{"window", std::to_string(w.id)}, {"reason", errors[k]}});
  }

  const bool abort = config.strict && report.failed > 0;
  if (!abort) {
    write_network_stats(config, windows, log);
    write_window_correlation(config, windows, log);
    write_window_indicators(config, windows, log);
  }

  json manifest;
  manifest["version"] = kVersion;
  manifest["config_hash"] = hash;
  manifest["config"] = config.to_ini();
  manifest["rng"] = kRngAlgorithm;
  manifest["interpretations"] = interpretations(config);
  manifest["ingest"] = ingest;
  manifest["windows"] = entries;
  manifest["failed"] = report.failed;
  write_file(manifest_path, [&](std::ostream& out) { out << manifest.dump(2) << '\n'; });

  report.exit_code = report.failed > 0 ? ExitCode::partial_failure : ExitCode::ok;
  log.info("run_done", {{"windows", std::to_string(report.windows)},
                        {"analysed", std::to_string(report.analysed)},
                        {"resumed", std::to_string(report.resumed)},
                        {"failed", std::to_string(report.failed)}});
  return report;
}

}  // namespace infoflow
