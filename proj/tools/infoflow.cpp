// infoflow: command-line driver for the information-flow pipeline.
//
//   infoflow run --config run.ini
//   infoflow ingest --in trades/ --out out/ --fiat EUR
//   infoflow gc-network --in panels/ --kind panels --out out/ --jobs 4
//   infoflow synth --model var --windows 4 --out synth/

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "infoflow/config.hpp"
#include "infoflow/io.hpp"
#include "infoflow/pipeline.hpp"
#include "infoflow/rng.hpp"
#include "infoflow/synth.hpp"

namespace {

using namespace infoflow;
using json = nlohmann::ordered_json;

struct Overrides {
  std::string config;
  std::optional<std::string> in, kind, fiat, registry, start, windows, alpha, pmax, lag, nmax,
      ridge, jobs, seed, out;
  bool strict = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "INI run configuration");
  cmd->add_option("--in,--input", o.in, "input directory (trade files or panels)");
  cmd->add_option("--kind", o.kind, "input kind: trades or panels");
  cmd->add_option("--fiat", o.fiat, "quote currency of the trade files");
  cmd->add_option("--registry", o.registry, "asset metadata CSV");
  cmd->add_option("--start", o.start, "calendar start, YYYYMMDD (a Monday)");
  cmd->add_option("--windows", o.windows, "number of calendar windows");
  cmd->add_option("--alpha", o.alpha, "Granger significance level");
  cmd->add_option("--pmax", o.pmax, "largest autoregressive order tried by BIC");
  cmd->add_option("--lag", o.lag, "embedding lag of the dynamic O-information");
  cmd->add_option("--nmax", o.nmax, "largest multiplet size");
  cmd->add_option("--ridge", o.ridge, "ridge factor for ill-conditioned covariances");
  cmd->add_option("--jobs", o.jobs, "worker threads");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_flag("--strict", o.strict, "stop at the first failed window");
  cmd->add_option("--out", o.out, "output directory");
}

RunConfig resolve(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  const std::pair<const char*, const std::optional<std::string>*> keys[] = {
      {"input.dir", &o.in},          {"input.kind", &o.kind},     {"input.fiat", &o.fiat},
      {"input.registry", &o.registry}, {"calendar.start", &o.start},
      {"calendar.windows", &o.windows}, {"granger.alpha", &o.alpha}, {"granger.pmax", &o.pmax},
      {"oinfo.lag", &o.lag},         {"oinfo.nmax", &o.nmax},     {"estimators.ridge", &o.ridge},
      {"run.jobs", &o.jobs},         {"run.seed", &o.seed},       {"run.out", &o.out}};
  for (const auto& [key, value] : keys) {
    if (*value) c.set(key, **value);
  }
  if (o.strict) c.strict = true;
  return c;
}

int exit_code(ExitCode code) { return static_cast<int>(code); }

int per_window(const RunConfig& config, Logger& log, const char* stage,
               void (*fn)(const RunConfig&, const WindowInfo&, Logger&)) {
  const auto windows = discover_windows(config);
  const auto errors = for_each_window(config, windows.size(),
                                      [&](std::size_t i) { fn(config, windows[i], log); });
  int failed = 0;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (errors[i].empty()) continue;
    ++failed;
    log.error("window_failed", {{"stage", stage},
                                {"window", std::to_string(windows[i].id)},
                                {"reason", errors[i]}});
  }
  return failed ? exit_code(ExitCode::partial_failure) : exit_code(ExitCode::ok);
}

// --- synth ------------------------------------------------------------------

struct SynthOptions {
  std::string model = "var";  // var | redundant | synergistic
  std::string format = "panels";
  int vars = 10;
  int windows = 4;
  Index length = 10080;
  std::vector<std::string> couplings;
  std::string fiat = "USD";
  std::string start = "20200106";
  double gap = 0.0;
  std::uint64_t seed = 1;
  std::string out;
};

Coupling parse_coupling(const std::string& text) {
  // source:target:lag:coefficient
  std::vector<std::string> f;
  std::size_t pos = 0;
  for (;;) {
    auto colon = text.find(':', pos);
    f.push_back(text.substr(pos, colon - pos));
    if (colon == std::string::npos) break;
    pos = colon + 1;
  }
  if (f.size() != 4) throw ConfigError("coupling must be source:target:lag:coefficient");
  try {
    return {std::stoi(f[0]), std::stoi(f[1]), std::stoi(f[2]), std::stod(f[3])};
  } catch (const std::exception&) {
    throw ConfigError("bad coupling '" + text + "'");
  }
}

CouplingSpec default_spec(int n, std::uint64_t seed) {
  CouplingSpec spec;
  spec.n_vars = n;
  spec.seed = seed;
  spec.noise_variances = Eigen::VectorXd::Ones(n);
  for (int i = 0; i < n; ++i) {
    spec.couplings.push_back({i, i, 1, 0.2});
    if (i + 1 < n) spec.couplings.push_back({i, i + 1, 1, 0.3});
  }
  return spec;
}

json spec_json(const CouplingSpec& spec) {
  json j;
  j["n_vars"] = spec.n_vars;
  j["labels"] = spec.resolved_labels();
  j["noise_variances"] = std::vector<double>(spec.noise_variances.data(),
                                             spec.noise_variances.data() + spec.n_vars);
  json cs = json::array();
  for (const auto& c : spec.couplings) {
    cs.push_back({{"source", c.source}, {"target", c.target}, {"lag", c.lag},
                  {"coefficient", c.coefficient}});
  }
  j["couplings"] = cs;
  j["spectral_radius"] = spectral_radius(spec);
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

int run_synth(const SynthOptions& o, Logger& log) {
  if (o.out.empty()) throw ConfigError("synth: --out is required");
  if (o.windows < 1) throw ConfigError("synth: --windows must be >= 1");
  const bool tape = o.format == "tape";
  if (!tape && o.format != "panels") throw ConfigError("synth: --format must be panels or tape");

  // A tape gets one extra day before the first Monday so the fitted calendar
  // starts there with a full first window.
  const auto start_day = parse_yyyymmdd(o.start);
  if (!start_day) throw ConfigError("synth: --start must be YYYYMMDD");
  const std::int64_t start =
      std::chrono::duration_cast<std::chrono::seconds>(start_day->time_since_epoch()).count();
  if (tape && !is_monday_midnight(start)) throw ConfigError("synth: --start must be a Monday");
  const Index lead = tape ? 1440 : 0;
  const Index window_rows = tape ? kMinutesPerWindow : o.length;
  const Index total = lead + window_rows * o.windows;

  json meta;
  meta["model"] = o.model;
  meta["format"] = o.format;
  meta["seed"] = o.seed;
  meta["rng"] = kRngAlgorithm;
  meta["windows"] = o.windows;
  meta["rows_per_window"] = window_rows;

  ReturnPanel panel;
  if (o.model == "var") {
    CouplingSpec spec = default_spec(o.vars, o.seed);
    if (!o.couplings.empty()) {
      spec.couplings.clear();
      for (const auto& c : o.couplings) spec.couplings.push_back(parse_coupling(c));
    }
    panel = gen_var(spec, std::max<Index>(total, 1000));
    meta["spec"] = spec_json(spec);
  } else {
    const auto kind = parse_multiplet_kind(o.model);
    if (!kind) throw ConfigError("synth: --model must be var, redundant or synergistic");
    if (o.vars < 3) throw ConfigError("synth: planted models need --vars >= 3");
    PlantedPanel planted = gen_planted_highorder(*kind, o.vars - 3,
                                                 std::max<Index>(total, 10000), o.seed);
    panel = std::move(planted.panel);
    meta["target"] = planted.target;
    meta["planted"] = planted.planted;
  }
  meta["labels"] = panel.labels;

  const fs::path out(o.out);
  if (tape) {
    TapeOptions topt;
    topt.start = start - lead * kSecondsPerMinute;
    topt.gap_probability = o.gap;
    topt.seed = o.seed;
    ReturnPanel head = panel;
    head.values = panel.values.topRows(total);
    AssetRegistry registry;
    const auto first_day = std::chrono::floor<std::chrono::days>(
        std::chrono::sys_seconds{std::chrono::seconds{topt.start}});
    for (const auto& t : gen_trade_tape(head, topt)) {
      std::string text;
      for (const auto& r : t.trades) {
        text += std::to_string(r.timestamp) + ',' + format_double(r.price) + ',' +
                format_double(r.volume) + '\n';
      }
      write_text(out / (t.ticker + o.fiat + ".csv"), text);
      registry.emplace(t.ticker, AssetMeta{t.ticker, AssetClass::coin, first_day});
    }
    std::ofstream reg(out / "assets.csv", std::ios::binary);
    write_registry(reg, registry);
    meta["fiat"] = o.fiat;
    meta["tape_start"] = topt.start;
    meta["first_window"] = format_date(start);
  } else {
    for (int k = 0; k < o.windows; ++k) {
      ReturnPanel w;
      w.window_id = k;
      w.labels = panel.labels;
      w.values = panel.values.middleRows(k * window_rows, window_rows);
      w.active.assign(panel.labels.size(), true);
      std::ostringstream text;
      write_panel(text, w);
      write_text(out / ("panel_" + std::to_string(k) + ".csv"), text.str());
    }
  }
  write_text(out / "synth.json", meta.dump(2) + "\n");
  log.info("synth_done", {{"model", o.model},
                          {"format", o.format},
                          {"windows", std::to_string(o.windows)},
                          {"out", out.string()}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed information-flow and higher-order dependency analysis of return series"};
  app.require_subcommand(1);

  Overrides o;
  struct Stage {
    const char* name;
    const char* help;
    CLI::App* cmd = nullptr;
  };
  Stage stages[] = {
      {"run", "full pipeline: ingest, networks, multiplets, cross-window statistics"},
      {"ingest", "trade files to weekly return panels"},
      {"gc-network", "per-window Granger causality networks"},
      {"oinfo-scan", "per-window redundant and synergistic multiplet search"},
      {"net-stats", "average network, age-strength, membership and class fractions"},
      {"window-corr", "cross-window correlation of adjacency matrices"},
      {"indicators", "per-window summary indicators with 10-window moving averages"},
  };
  for (auto& s : stages) {
    s.cmd = app.add_subcommand(s.name, s.help);
    add_common(s.cmd, o);
  }

  SynthOptions so;
  auto* synth = app.add_subcommand("synth", "synthetic panels or trade tapes with known structure");
  synth->add_option("--model", so.model, "var, redundant or synergistic")->capture_default_str();
  synth->add_option("--format", so.format, "panels or tape")->capture_default_str();
  synth->add_option("--vars", so.vars, "number of series")->capture_default_str();
  synth->add_option("--windows", so.windows, "number of windows")->capture_default_str();
  synth->add_option("--length", so.length, "rows per panel (panels format)")
      ->capture_default_str();
  synth->add_option("--coupling", so.couplings, "source:target:lag:coefficient (repeatable)");
  synth->add_option("--fiat", so.fiat, "quote currency suffix of tape files")
      ->capture_default_str();
  synth->add_option("--start", so.start, "first window Monday, YYYYMMDD")->capture_default_str();
  synth->add_option("--gap", so.gap, "probability of a minute without trades")
      ->capture_default_str();
  synth->add_option("--seed", so.seed, "random seed")->capture_default_str();
  synth->add_option("--out", so.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code(ExitCode::invalid_config);
  }

  Logger log(&std::cerr);
  try {
    if (synth->parsed()) return run_synth(so, log);

    RunConfig config = resolve(o);
    config.validate();
    const auto is = [&](const char* name) { return app.got_subcommand(name); };
    if (is("run")) return exit_code(run_pipeline(config, log).exit_code);
    if (is("ingest")) {
      const auto s = run_ingest(config, log);
      for (const auto& d : s.diagnostics) log.warn(d.code, {{"message", d.message}});
      return 0;
    }
    if (is("gc-network")) return per_window(config, log, "gc", run_gc_window);
    if (is("oinfo-scan")) return per_window(config, log, "oinfo", run_oinfo_window);
    const auto windows = discover_windows(config);
    if (is("net-stats")) write_network_stats(config, windows, log);
    if (is("window-corr")) write_window_correlation(config, windows, log);
    if (is("indicators")) write_window_indicators(config, windows, log);
    return 0;
  } catch (const ConfigError& e) {
    log.error("invalid_config", {{"reason", e.what()}});
    return exit_code(ExitCode::invalid_config);
  } catch (const std::exception& e) {
    log.error("failed", {{"reason", e.what()}});
    return exit_code(ExitCode::partial_failure);
  }
}
