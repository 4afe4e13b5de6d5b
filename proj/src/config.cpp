#include "infoflow/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "infoflow/ingest.hpp"
#include "infoflow/io.hpp"

namespace infoflow {

namespace {

template <typename T>
T parse_as(std::string_view key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("config: bad value for " + std::string(key) + ": '" + value + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: bad boolean for " + std::string(key) + ": '" + value + "'");
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void RunConfig::validate() const {
  if (!(alpha > 0 && alpha < 1)) throw ConfigError("config: alpha must be in (0, 1)");
  if (n_max < 2 || n_max > 8) throw ConfigError("config: nmax must be in [2, 8]");
  if (p_max < 1) throw ConfigError("config: pmax must be >= 1");
  if (oinfo_lag < 1) throw ConfigError("config: lag must be >= 1");
  if (jobs < 1) throw ConfigError("config: jobs must be >= 1");
  if (!(ridge >= 0)) throw ConfigError("config: ridge must be nonnegative");
  if (!(ridge_condition > 1)) throw ConfigError("config: ridge_condition must exceed 1");
  if (input_dir.empty()) throw ConfigError("config: input directory is required");
  if (!std::filesystem::is_directory(input_dir)) {
    throw ConfigError("config: input directory not found: " + input_dir.string());
  }
  if (out_dir.empty()) throw ConfigError("config: output directory is required");
  if (!registry.empty() && !std::filesystem::is_regular_file(registry)) {
    throw ConfigError("config: registry not found: " + registry.string());
  }
  if (calendar_start && !parse_yyyymmdd(*calendar_start)) {
    throw ConfigError("config: calendar start must be YYYYMMDD");
  }
  if (window_count && *window_count < 1) throw ConfigError("config: windows must be >= 1");
  if (window_count && !calendar_start) {
    throw ConfigError("config: calendar windows requires an explicit start");
  }
}

void RunConfig::set(std::string_view key, const std::string& value) {
  if (key == "input.dir") {
    input_dir = value;
  } else if (key == "input.kind") {
    if (value == "trades") input_kind = InputKind::trades;
    else if (value == "panels") input_kind = InputKind::panels;
    else throw ConfigError("config: input.kind must be trades or panels");
  } else if (key == "input.fiat") {
    fiat = value;
  } else if (key == "input.registry") {
    registry = value;
  } else if (key == "calendar.start") {
    if (value == "auto" || value.empty()) calendar_start.reset();
    else calendar_start = value;
  } else if (key == "calendar.windows") {
    if (value == "auto" || value.empty()) window_count.reset();
    else window_count = parse_as<int>(key, value);
  } else if (key == "granger.alpha") {
    alpha = parse_as<double>(key, value);
  } else if (key == "granger.pmax") {
    p_max = parse_as<int>(key, value);
  } else if (key == "granger.mean_f") {
    if (value == "all") mean_f_significant_only = false;
    else if (value == "significant") mean_f_significant_only = true;
    else throw ConfigError("config: granger.mean_f must be all or significant");
  } else if (key == "oinfo.lag") {
    oinfo_lag = parse_as<int>(key, value);
  } else if (key == "oinfo.nmax") {
    n_max = parse_as<int>(key, value);
  } else if (key == "estimators.ridge") {
    ridge = parse_as<double>(key, value);
  } else if (key == "estimators.ridge_condition") {
    ridge_condition = parse_as<double>(key, value);
  } else if (key == "run.out") {
    out_dir = value;
  } else if (key == "run.jobs") {
    jobs = parse_as<int>(key, value);
  } else if (key == "run.seed") {
    seed = parse_as<std::uint64_t>(key, value);
  } else if (key == "run.strict") {
    strict = parse_bool(key, value);
  } else {
    throw ConfigError("config: unknown key '" + std::string(key) + "'");
  }
}

namespace {

std::string analysis_ini(const RunConfig& c) {
  std::ostringstream out;
  out << "[input]\n"
      << "dir = " << c.input_dir.string() << '\n'
      << "kind = " << (c.input_kind == InputKind::trades ? "trades" : "panels") << '\n'
      << "fiat = " << c.fiat << '\n'
      << "registry = " << c.registry.string() << '\n'
      << "[calendar]\n"
      << "start = " << c.calendar_start.value_or("auto") << '\n'
      << "windows = " << (c.window_count ? std::to_string(*c.window_count) : "auto") << '\n'
      << "[granger]\n"
      << "alpha = " << format_double(c.alpha) << '\n'
      << "pmax = " << c.p_max << '\n'
      << "mean_f = " << (c.mean_f_significant_only ? "significant" : "all") << '\n'
      << "[oinfo]\n"
      << "lag = " << c.oinfo_lag << '\n'
      << "nmax = " << c.n_max << '\n'
      << "[estimators]\n"
      << "ridge = " << format_double(c.ridge) << '\n'
      << "ridge_condition = " << format_double(c.ridge_condition) << '\n';
  return out.str();
}

}  // namespace

std::string RunConfig::to_ini() const {
  std::ostringstream out;
  out << analysis_ini(*this) << "[run]\n"
      << "out = " << out_dir.string() << '\n'
      << "jobs = " << jobs << '\n'
      << "seed = " << seed << '\n'
      << "strict = " << (strict ? "true" : "false") << '\n';
  return out.str();
}

std::string RunConfig::analysis_hash() const {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(analysis_ini(*this) + std::to_string(seed))));
  return buf;
}

RunConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig config;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      if (!body.data().empty()) {
        throw ConfigError("config: key '" + section + "' outside a section");
      }
      continue;
    }
    for (const auto& [key, value] : body) {
      config.set(section + "." + key, value.get_value<std::string>());
    }
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  return parse_config(in);
}

void Logger::log(std::string_view level, std::string_view event,
                 std::initializer_list<std::pair<std::string_view, std::string>> fields) {
  if (sink_ == nullptr) return;
  std::ostringstream line;
  line << "level=" << level << " event=" << event;
  for (const auto& [key, value] : fields) {
    line << ' ' << key << '=';
    if (value.find_first_of(" \t\"=") != std::string::npos || value.empty()) {
      line << '"';
      for (char c : value) {
        if (c == '"' || c == '\\') line << '\\';
        line << c;
      }
      line << '"';
    } else {
      line << value;
    }
  }
  line << '\n';
  std::lock_guard lock(mutex_);
  *sink_ << line.str() << std::flush;
}

}  // namespace infoflow
