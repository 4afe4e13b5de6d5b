#ifndef INFOFLOW_CONFIG_HPP
#define INFOFLOW_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "infoflow/error.hpp"

namespace infoflow {

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class InputKind { trades, panels };

// Effective run configuration. File form is INI:
//
//   [input]      dir, kind (trades|panels), fiat, registry
//   [calendar]   start (auto|YYYYMMDD), windows
//   [granger]    alpha, pmax, mean_f (all|significant)
//   [oinfo]      lag, nmax
//   [estimators] ridge, ridge_condition
//   [run]        out, jobs, seed, strict
struct RunConfig {
  std::filesystem::path input_dir;
  InputKind input_kind = InputKind::trades;
  std::string fiat = "USD";
  std::filesystem::path registry;  // empty: <input_dir>/assets.csv when present
  std::optional<std::string> calendar_start;  // YYYYMMDD; nullopt = fitted to the data
  std::optional<int> window_count;
  double alpha = 0.01;
  int p_max = 20;
  bool mean_f_significant_only = false;
  int oinfo_lag = 1;
  int n_max = 5;
  double ridge = 1e-8;
  double ridge_condition = 1e10;
  std::filesystem::path out_dir;
  int jobs = 1;
  std::uint64_t seed = 1;
  bool strict = false;

  // Throws ConfigError.
  void validate() const;
  // Sets one `section.key` from text; throws ConfigError on unknown keys or bad values.
  void set(std::string_view key, const std::string& value);
  // Canonical INI text of every field.
  std::string to_ini() const;
  // Hash of the fields that affect analysis results (not out, jobs or strict).
  std::string analysis_hash() const;
};

RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(std::istream& in);

// Structured line-per-event logging: `level=info event=name key=value ...`.
class Logger {
 public:
  explicit Logger(std::ostream* sink) : sink_(sink) {}

  void log(std::string_view level, std::string_view event,
           std::initializer_list<std::pair<std::string_view, std::string>> fields = {});
  void info(std::string_view event,
            std::initializer_list<std::pair<std::string_view, std::string>> fields = {}) {
    log("info", event, fields);
  }
  void warn(std::string_view event,
            std::initializer_list<std::pair<std::string_view, std::string>> fields = {}) {
    log("warn", event, fields);
  }
  void error(std::string_view event,
             std::initializer_list<std::pair<std::string_view, std::string>> fields = {}) {
    log("error", event, fields);
  }

 private:
  std::ostream* sink_;
  std::mutex mutex_;
};

}  // namespace infoflow

#endif  // INFOFLOW_CONFIG_HPP
