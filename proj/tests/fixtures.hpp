#ifndef INFOFLOW_TESTS_FIXTURES_HPP
#define INFOFLOW_TESTS_FIXTURES_HPP

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "infoflow/io.hpp"
#include "infoflow/synth.hpp"

namespace fixture {

namespace fs = std::filesystem;

inline fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("infoflow_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

inline std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Chain X0 -> X1 -> ... with mild self-dependence.
inline infoflow::CouplingSpec chain(int n, std::uint64_t seed) {
  infoflow::CouplingSpec spec;
  spec.n_vars = n;
  spec.noise_variances = Eigen::VectorXd::Ones(n);
  spec.seed = seed;
  for (int i = 0; i < n; ++i) {
    spec.couplings.push_back({i, i, 1, 0.2});
    if (i + 1 < n) spec.couplings.push_back({i, i + 1, 1, 0.3});
  }
  return spec;
}

// panel_<k>.csv files cut from one long realisation.
inline void write_panel_dir(const fs::path& dir, const infoflow::CouplingSpec& spec, int windows,
                            infoflow::Index rows) {
  const auto panel = infoflow::gen_var(spec, std::max<infoflow::Index>(rows * windows, 1000));
  for (int k = 0; k < windows; ++k) {
    infoflow::ReturnPanel w;
    w.window_id = k;
    w.labels = panel.labels;
    w.values = panel.values.middleRows(k * rows, rows);
    w.active.assign(panel.labels.size(), true);
    std::ofstream out(dir / ("panel_" + std::to_string(k) + ".csv"), std::ios::binary);
    infoflow::write_panel(out, w);
  }
}

// <ticker>USD.csv trade files and assets.csv, one day of lead-in before
// `monday` followed by `windows` full weeks.
inline void write_tape_dir(const fs::path& dir, const infoflow::CouplingSpec& spec, int windows,
                           std::int64_t monday) {
  using namespace infoflow;
  const Index lead = 1440;
  const Index total = lead + kMinutesPerWindow * windows;
  const auto panel = gen_var(spec, total);
  TapeOptions opts;
  opts.start = monday - lead * kSecondsPerMinute;
  opts.seed = spec.seed;
  AssetRegistry registry;
  const auto day = std::chrono::floor<std::chrono::days>(
      std::chrono::sys_seconds{std::chrono::seconds{opts.start}});
  for (const auto& t : gen_trade_tape(panel, opts)) {
    std::ofstream out(dir / (t.ticker + "USD.csv"), std::ios::binary);
    for (const auto& r : t.trades) {
      out << r.timestamp << ',' << format_double(r.price) << ',' << format_double(r.volume)
          << '\n';
    }
    registry.emplace(t.ticker, AssetMeta{t.ticker, AssetClass::coin, day});
  }
  std::ofstream reg(dir / "assets.csv", std::ios::binary);
  write_registry(reg, registry);
}

}  // namespace fixture

#endif  // INFOFLOW_TESTS_FIXTURES_HPP
