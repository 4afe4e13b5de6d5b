#ifndef INFOFLOW_INGEST_HPP
#define INFOFLOW_INGEST_HPP

#include <Eigen/Dense>

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infoflow/error.hpp"

namespace infoflow {

using Index = Eigen::Index;

inline constexpr std::int64_t kMinutesPerWindow = 10080;
inline constexpr std::int64_t kSecondsPerMinute = 60;

struct TradeRecord {
  std::int64_t timestamp = 0;  // Unix seconds, UTC
  double price = 0;
  double volume = 0;
};

struct ParseResult {
  std::vector<TradeRecord> trades;
  std::size_t rejected = 0;
  bool resorted = false;
  Diagnostics diagnostics;
};

// Reads `timestamp,price,volume` lines (no header). Malformed lines are
// rejected and reported with their line number; the output is in timestamp
// order (stable, so same-second trades keep their file order).
ParseResult parse_trades(std::istream& in);
ParseResult parse_trades(std::string_view text);

struct MinuteBar {
  std::int64_t minute_index = 0;  // minutes since epoch
  double price = 0;
  double volume = 0;
  bool synthetic = false;  // gap filled with the previous price
};

// Half-open range of minute indices [begin, end).
struct MinuteRange {
  std::int64_t begin = 0;
  std::int64_t end = 0;
  std::int64_t size() const { return end - begin; }
  bool contains(std::int64_t m) const { return m >= begin && m < end; }
};

inline std::int64_t minute_of(std::int64_t timestamp) {
  // floor division, timestamps before 1970 included
  return timestamp >= 0 ? timestamp / kSecondsPerMinute
                        : -((-timestamp + kSecondsPerMinute - 1) / kSecondsPerMinute);
}

// Volume-weighted minute bars with forward fill. Bars start at the first
// traded minute (or `span.begin` if trading started earlier, carrying the last
// pre-span price) and run to `span.end`. Trades at or after `span.end` are
// ignored.
std::vector<MinuteBar> aggregate_minutes(std::span<const TradeRecord> trades, MinuteRange span,
                                         Diagnostics* diagnostics = nullptr);

// r_t = ln p_t - ln p_{t-1}; throws Error("series too short") below two bars.
std::vector<double> log_returns(std::span<const MinuteBar> bars);

// Weekly calendar: window k covers minutes [start + k*10080, start + (k+1)*10080)
// except the last one, which stops at `end`.
struct WindowCalendar {
  std::int64_t start = 0;  // Unix seconds of the first Monday 00:00:00 UTC
  int window_count = 0;
  std::int64_t minutes_per_window = kMinutesPerWindow;
  std::int64_t end = 0;  // Unix seconds one past the last covered instant

  MinuteRange window(int k) const;
  std::int64_t window_start(int k) const { return window(k).begin * kSecondsPerMinute; }
  std::int64_t total_minutes() const { return (end - start) / kSecondsPerMinute; }
};

bool is_monday_midnight(std::int64_t timestamp);

// Explicit calendar; the final window is truncated at `data_end` (exclusive,
// Unix seconds) when the data stop early.
WindowCalendar make_calendar(std::int64_t start, int window_count,
                             std::optional<std::int64_t> data_end = std::nullopt);

// Calendar fitted to a continuous tape: starts on the first Monday 00:00 that
// has at least one bar before it (so window 0 holds full-length returns) and
// runs to `last_minute` inclusive.
WindowCalendar calendar_from_data(std::int64_t first_minute, std::int64_t last_minute);

enum class AssetClass { coin, token, stablecoin, fiat, unknown };

std::string_view to_string(AssetClass c);
std::optional<AssetClass> parse_asset_class(std::string_view s);

struct AssetMeta {
  std::string ticker;
  AssetClass asset_class = AssetClass::unknown;
  std::chrono::sys_days first_day{};
};

using AssetRegistry = std::map<std::string, AssetMeta, std::less<>>;

// CSV `ticker,class,first_day` with header, first_day as YYYYMMDD.
AssetRegistry read_registry(std::istream& in);
void write_registry(std::ostream& out, const AssetRegistry& registry);

std::optional<std::chrono::sys_days> parse_yyyymmdd(std::string_view s);
std::string format_yyyymmdd(std::chrono::sys_days day);
std::string format_date(std::int64_t timestamp);  // YYYY-MM-DD

// Continuous return series of one asset. returns[i] is the return at minute
// first_return_minute + i.
struct AssetSeries {
  std::string ticker;
  std::int64_t first_trade = 0;  // Unix seconds
  std::int64_t first_return_minute = 0;
  std::vector<double> returns;

  std::int64_t end_minute() const {
    return first_return_minute + static_cast<std::int64_t>(returns.size());
  }
};

AssetSeries make_asset_series(std::string ticker, std::int64_t first_trade,
                              std::span<const MinuteBar> bars);

struct ReturnPanel {
  int window_id = 0;
  std::int64_t start = 0;  // Unix seconds of the first row
  std::vector<std::string> labels;
  Eigen::MatrixXd values;  // T x n; inactive columns hold NaN
  std::vector<bool> active;
  std::vector<std::int64_t> first_trade;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }
  std::vector<Index> active_columns() const;
  // Panel restricted to active columns.
  ReturnPanel active_only() const;
};

// Cuts the continuous series into calendar windows. A column is active in a
// window iff the asset's first trade is at or before the window start.
std::vector<ReturnPanel> slice_windows(std::span<const AssetSeries> series,
                                       const WindowCalendar& calendar,
                                       const AssetRegistry* registry = nullptr,
                                       Diagnostics* diagnostics = nullptr);

// Sum of volume * price of the bars falling in each calendar window.
std::vector<double> window_dollar_volume(std::span<const MinuteBar> bars,
                                         const WindowCalendar& calendar);

}  // namespace infoflow

#endif  // INFOFLOW_INGEST_HPP
