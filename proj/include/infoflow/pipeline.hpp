#ifndef INFOFLOW_PIPELINE_HPP
#define INFOFLOW_PIPELINE_HPP

// Batch driver: trade files -> weekly panels -> per-window GC network and
// multiplet scan -> cross-window statistics. Each stage reads and writes the
// artifact files under the output directory, so stages can run on their own
// and an interrupted run resumes from the per-window manifest entries.
//
// Output layout:
//   panels/panel_<w>.csv, panels/windows.csv
//   windows/edges_<w>.csv, strengths_<w>.csv, matrix_<w>.csv, multiplets_<w>.csv,
//           gc_<w>.json, oinfo_<w>.json
//   window_corr.csv, window_corr_p.csv, indicators.csv, avg_network.csv,
//   avg_strengths.csv, membership.csv, class_fractions.csv, age_strength.csv,
//   age_strength_corr.csv, manifest.json

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "infoflow/config.hpp"

namespace infoflow {

inline constexpr const char* kVersion = "1.0.0";

namespace fs = std::filesystem;

enum class ExitCode : int { ok = 0, partial_failure = 1, invalid_config = 2 };

struct WindowInfo {
  int id = 0;
  std::string start_date = "NA";  // YYYY-MM-DD when a calendar is known
  std::optional<double> total_volume;
  fs::path panel;
};

struct IngestSummary {
  std::vector<WindowInfo> windows;
  Diagnostics diagnostics;
};

struct PipelineReport {
  int windows = 0;
  int analysed = 0;
  int resumed = 0;
  int failed = 0;
  ExitCode exit_code = ExitCode::ok;
};

fs::path panels_dir(const RunConfig& config);
fs::path windows_dir(const RunConfig& config);

// Trades -> panels (writes panels/). Only for InputKind::trades.
IngestSummary run_ingest(const RunConfig& config, Logger& log);

// Windows available for analysis: the ingest output for trade input, or the
// panel_<w>.csv files of the input directory for panel input. Start dates and
// volumes come from windows.csv next to the panels when it exists.
std::vector<WindowInfo> discover_windows(const RunConfig& config);

// Runs task(i) for every i < count on `config.jobs` workers. Returns one entry
// per item: empty on success, the error text on failure, "not run" when an
// earlier failure stopped a strict run.
std::vector<std::string> for_each_window(const RunConfig& config, std::size_t count,
                                         const std::function<void(std::size_t)>& task);

// Per-window stages. Each throws on failure of that window.
void run_gc_window(const RunConfig& config, const WindowInfo& window, Logger& log);
void run_oinfo_window(const RunConfig& config, const WindowInfo& window, Logger& log);

// Cross-window outputs assembled from the per-window files that exist.
void write_network_stats(const RunConfig& config, const std::vector<WindowInfo>& windows,
                         Logger& log);
void write_window_correlation(const RunConfig& config, const std::vector<WindowInfo>& windows,
                              Logger& log);
void write_window_indicators(const RunConfig& config, const std::vector<WindowInfo>& windows,
                             Logger& log);

PipelineReport run_pipeline(const RunConfig& config, Logger& log);

}  // namespace infoflow

#endif  // INFOFLOW_PIPELINE_HPP
