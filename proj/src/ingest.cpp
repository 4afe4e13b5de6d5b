#include "infoflow/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

namespace infoflow {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::optional<std::string> parse_trade_line(std::string_view line, TradeRecord& out) {
  std::string_view fields[3];
  std::size_t count = 0;
  while (true) {
    auto comma = line.find(',');
    if (count == 3) return "expected 3 fields";
    fields[count++] = line.substr(0, comma);
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  if (count != 3) return "expected 3 fields";
  if (!parse_number(fields[0], out.timestamp)) return "non-numeric timestamp";
  if (!parse_number(fields[1], out.price) || !std::isfinite(out.price)) {
    return "non-numeric price";
  }
  if (!parse_number(fields[2], out.volume) || !std::isfinite(out.volume)) {
    return "non-numeric volume";
  }
  if (out.price <= 0) return "price must be positive";
  if (out.volume < 0) return "volume must be nonnegative";
  return std::nullopt;
}

struct MinuteAggregate {
  double price;
  double volume;
};

// Consumes all trades of the minute starting at trades[i].
MinuteAggregate aggregate_one(std::span<const TradeRecord> trades, std::size_t& i,
                              Diagnostics* diagnostics) {
  const std::int64_t minute = minute_of(trades[i].timestamp);
  double pv = 0;
  double v = 0;
  double plain = 0;
  std::size_t n = 0;
  for (; i < trades.size() && minute_of(trades[i].timestamp) == minute; ++i) {
    pv += trades[i].price * trades[i].volume;
    v += trades[i].volume;
    plain += trades[i].price;
    ++n;
  }
  if (v > 0) return {pv / v, v};
  emit(diagnostics, "zero_volume_minute",
       "minute " + std::to_string(minute) + " has trades but no volume; unweighted mean used");
  return {plain / static_cast<double>(n), 0.0};
}

}  // namespace

ParseResult parse_trades(std::istream& in) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  std::size_t non_blank = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++non_blank;
    TradeRecord rec;
    if (auto err = parse_trade_line(line, rec)) {
      ++result.rejected;
      emit(&result.diagnostics, "rejected_line",
           "line " + std::to_string(line_no) + ": " + *err);
      continue;
    }
    result.trades.push_back(rec);
  }
  if (non_blank == 0) emit(&result.diagnostics, "empty_input", "no trade records in input");

  auto by_time = [](const TradeRecord& a, const TradeRecord& b) {
    return a.timestamp < b.timestamp;
  };
  if (!std::is_sorted(result.trades.begin(), result.trades.end(), by_time)) {
    std::stable_sort(result.trades.begin(), result.trades.end(), by_time);
    result.resorted = true;
    emit(&result.diagnostics, "resorted", "records were not in timestamp order; sorted");
  }
  return result;
}

ParseResult parse_trades(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_trades(in);
}

std::vector<MinuteBar> aggregate_minutes(std::span<const TradeRecord> trades, MinuteRange span,
                                         Diagnostics* diagnostics) {
  std::vector<MinuteBar> bars;
  std::size_t i = 0;
  std::optional<double> carry;
  while (i < trades.size() && minute_of(trades[i].timestamp) < span.begin) {
    carry = aggregate_one(trades, i, diagnostics).price;
  }

  std::int64_t first = span.begin;
  if (!carry) {
    if (i == trades.size()) return bars;
    first = minute_of(trades[i].timestamp);
  }
  if (first >= span.end) return bars;

  bars.reserve(static_cast<std::size_t>(span.end - first));
  for (std::int64_t m = first; m < span.end; ++m) {
    if (i < trades.size() && minute_of(trades[i].timestamp) == m) {
      auto agg = aggregate_one(trades, i, diagnostics);
      bars.push_back({m, agg.price, agg.volume, false});
      carry = agg.price;
    } else {
      bars.push_back({m, *carry, 0.0, true});
    }
  }
  return bars;
}

std::vector<double> log_returns(std::span<const MinuteBar> bars) {
  if (bars.size() < 2) throw Error("series too short");
  std::vector<double> out;
  out.reserve(bars.size() - 1);
  double prev = std::log(bars.front().price);
  if (!(bars.front().price > 0)) throw std::invalid_argument("log_returns: non-positive price");
  for (std::size_t t = 1; t < bars.size(); ++t) {
    if (!(bars[t].price > 0)) throw std::invalid_argument("log_returns: non-positive price");
    const double cur = std::log(bars[t].price);
    out.push_back(cur - prev);
    prev = cur;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Calendar

MinuteRange WindowCalendar::window(int k) const {
  if (k < 0 || k >= window_count) throw std::out_of_range("window index out of range");
  const std::int64_t base = start / kSecondsPerMinute + k * minutes_per_window;
  return {base, std::min(base + minutes_per_window, end / kSecondsPerMinute)};
}

bool is_monday_midnight(std::int64_t timestamp) {
  using namespace std::chrono;
  const sys_seconds t{seconds{timestamp}};
  const auto day = floor<days>(t);
  return day == t && weekday{day} == Monday;
}

WindowCalendar make_calendar(std::int64_t start, int window_count,
                             std::optional<std::int64_t> data_end) {
  if (!is_monday_midnight(start)) {
    throw std::invalid_argument("calendar start must be a Monday 00:00:00 UTC");
  }
  if (window_count < 1) throw std::invalid_argument("calendar needs at least one window");
  WindowCalendar cal;
  cal.start = start;
  cal.window_count = window_count;
  const std::int64_t nominal_end =
      start + window_count * kMinutesPerWindow * kSecondsPerMinute;
  cal.end = data_end ? std::min(nominal_end, *data_end) : nominal_end;
  const std::int64_t last_start =
      start + (window_count - 1) * kMinutesPerWindow * kSecondsPerMinute;
  if (cal.end <= last_start) {
    throw std::invalid_argument("data end leaves the final calendar window empty");
  }
  return cal;
}

WindowCalendar calendar_from_data(std::int64_t first_minute, std::int64_t last_minute) {
  using namespace std::chrono;
  if (last_minute < first_minute) throw std::invalid_argument("empty minute range");
  auto day = floor<days>(sys_seconds{seconds{first_minute * kSecondsPerMinute}}) + days{1};
  while (weekday{day} != Monday) day += days{1};
  const std::int64_t start_minute = duration_cast<minutes>(day.time_since_epoch()).count();
  if (start_minute > last_minute) {
    throw std::invalid_argument("tape does not reach a Monday after its first bar");
  }
  const std::int64_t covered = last_minute + 1 - start_minute;
  const int count = static_cast<int>((covered + kMinutesPerWindow - 1) / kMinutesPerWindow);
  return make_calendar(start_minute * kSecondsPerMinute, count,
                       (last_minute + 1) * kSecondsPerMinute);
}

// ---------------------------------------------------------------------------
// Registry and dates

std::string_view to_string(AssetClass c) {
  switch (c) {
    case AssetClass::coin: return "coin";
    case AssetClass::token: return "token";
    case AssetClass::stablecoin: return "stablecoin";
    case AssetClass::fiat: return "fiat";
    case AssetClass::unknown: break;
  }
  return "unknown";
}

std::optional<AssetClass> parse_asset_class(std::string_view s) {
  std::string lower(trim(s));
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "coin") return AssetClass::coin;
  if (lower == "token") return AssetClass::token;
  if (lower == "stablecoin") return AssetClass::stablecoin;
  if (lower == "fiat") return AssetClass::fiat;
  return std::nullopt;
}

std::optional<std::chrono::sys_days> parse_yyyymmdd(std::string_view s) {
  using namespace std::chrono;
  s = trim(s);
  if (s.size() != 8) return std::nullopt;
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  if (!parse_number(s.substr(0, 4), y) || !parse_number(s.substr(4, 2), m) ||
      !parse_number(s.substr(6, 2), d)) {
    return std::nullopt;
  }
  const year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd};
}

std::string format_yyyymmdd(std::chrono::sys_days day) {
  using namespace std::chrono;
  const year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d%02u%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string format_date(std::int64_t timestamp) {
  using namespace std::chrono;
  const year_month_day ymd{floor<days>(sys_seconds{seconds{timestamp}})};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

AssetRegistry read_registry(std::istream& in) {
  AssetRegistry registry;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (row != "ticker,class,first_day") {
        throw Error("registry header must be 'ticker,class,first_day'");
      }
      continue;
    }
    std::vector<std::string_view> fields;
    for (std::size_t pos = 0;;) {
      auto comma = row.find(',', pos);
      fields.push_back(trim(row.substr(pos, comma - pos)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    const std::string where = "registry line " + std::to_string(line_no);
    if (fields.size() != 3 || fields[0].empty()) throw Error(where + ": expected 3 fields");
    auto cls = parse_asset_class(fields[1]);
    if (!cls) throw Error(where + ": unknown class '" + std::string(fields[1]) + "'");
    auto day = parse_yyyymmdd(fields[2]);
    if (!day) throw Error(where + ": bad date '" + std::string(fields[2]) + "'");
    AssetMeta meta{std::string(fields[0]), *cls, *day};
    if (!registry.emplace(meta.ticker, meta).second) {
      throw Error(where + ": duplicate ticker '" + meta.ticker + "'");
    }
  }
  return registry;
}

void write_registry(std::ostream& out, const AssetRegistry& registry) {
  out << "ticker,class,first_day\n";
  for (const auto& [ticker, meta] : registry) {
    out << ticker << ',' << to_string(meta.asset_class) << ',' << format_yyyymmdd(meta.first_day)
        << '\n';
  }
}

// ---------------------------------------------------------------------------
// Panels

AssetSeries make_asset_series(std::string ticker, std::int64_t first_trade,
                              std::span<const MinuteBar> bars) {
  AssetSeries s;
  s.ticker = std::move(ticker);
  s.first_trade = first_trade;
  s.returns = log_returns(bars);
  s.first_return_minute = bars.front().minute_index + 1;
  return s;
}

std::vector<Index> ReturnPanel::active_columns() const {
  std::vector<Index> cols;
  for (std::size_t j = 0; j < active.size(); ++j) {
    if (active[j]) cols.push_back(static_cast<Index>(j));
  }
  return cols;
}

ReturnPanel ReturnPanel::active_only() const {
  const auto cols = active_columns();
  ReturnPanel out;
  out.window_id = window_id;
  out.start = start;
  out.values.resize(values.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    out.labels.push_back(labels[cols[k]]);
    out.values.col(static_cast<Index>(k)) = values.col(cols[k]);
    out.first_trade.push_back(first_trade.empty() ? 0 : first_trade[cols[k]]);
  }
  out.active.assign(cols.size(), true);
  return out;
}

std::vector<ReturnPanel> slice_windows(std::span<const AssetSeries> series,
                                       const WindowCalendar& calendar,
                                       const AssetRegistry* registry, Diagnostics* diagnostics) {
  // Assets that are active in at least one window, in ticker order.
  std::vector<const AssetSeries*> assets;
  for (const auto& s : series) {
    const bool ever_active = s.first_trade <= calendar.window_start(calendar.window_count - 1);
    if (!ever_active) {
      emit(diagnostics, "asset_excluded",
           "asset '" + s.ticker + "' is not active in any calendar window");
      continue;
    }
    if (registry != nullptr && registry->find(s.ticker) == registry->end()) {
      emit(diagnostics, "unregistered_asset", "asset '" + s.ticker + "' missing from registry");
    }
    assets.push_back(&s);
  }
  std::sort(assets.begin(), assets.end(),
            [](const AssetSeries* a, const AssetSeries* b) { return a->ticker < b->ticker; });

  std::vector<ReturnPanel> panels;
  panels.reserve(static_cast<std::size_t>(calendar.window_count));
  for (int k = 0; k < calendar.window_count; ++k) {
    const MinuteRange range = calendar.window(k);
    const std::int64_t window_start = range.begin * kSecondsPerMinute;

    ReturnPanel panel;
    panel.window_id = k;
    std::int64_t row_begin = range.begin;
    std::int64_t row_end = range.end;
    for (const auto* a : assets) {
      const bool active = a->first_trade <= window_start && a->end_minute() > range.begin;
      panel.labels.push_back(a->ticker);
      panel.first_trade.push_back(a->first_trade);
      panel.active.push_back(active);
      if (active) {
        row_begin = std::max(row_begin, a->first_return_minute);
        row_end = std::min(row_end, a->end_minute());
      }
    }
    if (row_begin > range.begin) {
      emit(diagnostics, "short_window",
           "window " + std::to_string(k) + ": no price before window start for some asset; " +
               std::to_string(row_begin - range.begin) + " leading row(s) dropped");
    }
    const Index rows = std::max<std::int64_t>(0, row_end - row_begin);
    panel.start = row_begin * kSecondsPerMinute;
    panel.values = Eigen::MatrixXd::Constant(rows, static_cast<Index>(assets.size()),
                                             std::numeric_limits<double>::quiet_NaN());
    for (std::size_t j = 0; j < assets.size(); ++j) {
      if (!panel.active[j]) continue;
      const auto offset = row_begin - assets[j]->first_return_minute;
      for (Index t = 0; t < rows; ++t) {
        panel.values(t, static_cast<Index>(j)) = assets[j]->returns[offset + t];
      }
    }
    panels.push_back(std::move(panel));
  }
  return panels;
}

std::vector<double> window_dollar_volume(std::span<const MinuteBar> bars,
                                         const WindowCalendar& calendar) {
  std::vector<double> totals(static_cast<std::size_t>(calendar.window_count), 0.0);
  const std::int64_t first = calendar.start / kSecondsPerMinute;
  const std::int64_t last = calendar.end / kSecondsPerMinute;
  for (const auto& bar : bars) {
    if (bar.minute_index < first || bar.minute_index >= last) continue;
    const auto k = (bar.minute_index - first) / calendar.minutes_per_window;
    totals[static_cast<std::size_t>(k)] += bar.volume * bar.price;
  }
  return totals;
}

}  // namespace infoflow
