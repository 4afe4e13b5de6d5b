#include "infoflow/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

namespace infoflow {

std::string format_double(double value) {
  if (std::isnan(value)) return "NA";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_optional(const std::optional<double>& value) {
  return value ? format_double(*value) : "NA";
}

std::vector<std::string> split_csv(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> out;
  for (std::size_t pos = 0;;) {
    auto comma = line.find(',', pos);
    out.emplace_back(line.substr(pos, comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

double parse_double(std::string_view field, const std::string& where) {
  if (field == "NA") return std::nan("");
  double v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(where + ": not a number '" + std::string(field) + "'");
  }
  return v;
}

namespace {

int parse_int(std::string_view field, const std::string& where) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(where + ": not an integer '" + std::string(field) + "'");
  }
  return v;
}

bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

}  // namespace

void write_panel(std::ostream& out, const ReturnPanel& panel) {
  const auto cols = panel.active_columns();
  for (std::size_t k = 0; k < cols.size(); ++k) {
    out << (k ? "," : "") << panel.labels[static_cast<std::size_t>(cols[k])];
  }
  out << '\n';
  for (Index t = 0; t < panel.rows(); ++t) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      out << (k ? "," : "") << format_double(panel.values(t, cols[k]));
    }
    out << '\n';
  }
}

ReturnPanel read_panel(std::istream& in, int window_id) {
  const std::string where = "panel " + std::to_string(window_id);
  std::string line;
  if (!next_line(in, line)) throw Error(where + ": empty file");
  ReturnPanel panel;
  panel.window_id = window_id;
  panel.labels = split_csv(line);
  for (const auto& l : panel.labels) {
    if (l.empty()) throw Error(where + ": empty ticker in header");
  }
  const std::size_t n = panel.labels.size();
  std::vector<double> flat;
  std::size_t rows = 0;
  while (next_line(in, line)) {
    const auto fields = split_csv(line);
    const std::string at = where + " row " + std::to_string(rows + 1);
    if (fields.size() != n) throw Error(at + ": expected " + std::to_string(n) + " fields");
    for (const auto& f : fields) {
      const double v = parse_double(f, at);
      if (!std::isfinite(v)) throw Error(at + ": non-finite value");
      flat.push_back(v);
    }
    ++rows;
  }
  panel.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                Eigen::RowMajor>>(
      flat.data(), static_cast<Index>(rows), static_cast<Index>(n));
  panel.active.assign(n, true);
  panel.first_trade.assign(n, 0);
  return panel;
}

void write_edges(std::ostream& out, int window_id, std::span<const GcEdge> edges) {
  out << "window,source,target,f_value,p_value,order_p,order_q\n";
  for (const auto& e : edges) {
    if (!e.significant || !(e.f_value > 0)) continue;
    out << window_id << ',' << e.source << ',' << e.target << ',' << format_double(e.f_value)
        << ',' << format_double(e.p_value) << ',' << e.order_p << ',' << e.order_q << '\n';
  }
}

std::vector<GcEdge> read_edges(std::istream& in) {
  std::string line;
  std::vector<GcEdge> edges;
  if (!next_line(in, line)) throw Error("edge list: empty file");
  std::size_t row = 0;
  while (next_line(in, line)) {
    const std::string where = "edge list row " + std::to_string(++row);
    const auto f = split_csv(line);
    if (f.size() != 7) throw Error(where + ": expected 7 fields");
    GcEdge e;
    e.source = f[1];
    e.target = f[2];
    e.f_value = parse_double(f[3], where);
    e.p_value = parse_double(f[4], where);
    e.order_p = parse_int(f[5], where);
    e.order_q = parse_int(f[6], where);
    e.significant = true;
    edges.push_back(std::move(e));
  }
  return edges;
}

void write_dense_matrix(std::ostream& out, const AdjacencyMatrix& a) {
  out << "ticker";
  for (const auto& l : a.labels) out << ',' << l;
  out << '\n';
  for (Index i = 0; i < a.size(); ++i) {
    out << a.labels[static_cast<std::size_t>(i)];
    for (Index j = 0; j < a.size(); ++j) out << ',' << format_double(a.weights(i, j));
    out << '\n';
  }
}

void write_strengths(std::ostream& out, const AdjacencyMatrix& a) {
  const Strengths s = strengths(a);
  out << "ticker,k_in,k_out\n";
  for (Index i = 0; i < a.size(); ++i) {
    out << a.labels[static_cast<std::size_t>(i)] << ',' << format_double(s.k_in(i)) << ','
        << format_double(s.k_out(i)) << '\n';
  }
}

std::vector<std::string> read_strength_labels(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw Error("strengths: empty file");
  std::vector<std::string> labels;
  while (next_line(in, line)) {
    const auto f = split_csv(line);
    if (f.size() != 3) throw Error("strengths: expected 3 fields");
    labels.push_back(f[0]);
  }
  return labels;
}

AdjacencyMatrix adjacency_from_edges(int window_id, std::vector<std::string> labels,
                                     std::span<const GcEdge> edges, double alpha) {
  AdjacencyMatrix a;
  a.window_id = window_id;
  a.alpha = alpha;
  a.labels = std::move(labels);
  std::map<std::string, Index, std::less<>> index;
  for (std::size_t i = 0; i < a.labels.size(); ++i) index.emplace(a.labels[i], static_cast<Index>(i));
  const auto n = static_cast<Index>(a.labels.size());
  a.weights = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : edges) {
    auto s = index.find(e.source);
    auto t = index.find(e.target);
    if (s == index.end() || t == index.end()) {
      throw Error("edge " + e.source + "->" + e.target + " refers to an unknown node");
    }
    if (s->second != t->second) a.weights(s->second, t->second) = e.f_value;
  }
  return a;
}

void write_multiplets(std::ostream& out, std::span<const MultipletResult> results) {
  out << "window,target,kind,size,value,members\n";
  for (const auto& r : results) {
    out << r.window_id << ',' << r.target << ',' << to_string(r.kind) << ',' << r.size << ','
        << format_double(r.value) << ',';
    for (std::size_t k = 0; k < r.members.size(); ++k) out << (k ? "|" : "") << r.members[k];
    out << '\n';
  }
}

std::vector<MultipletResult> read_multiplets(std::istream& in, int lag) {
  std::string line;
  std::vector<MultipletResult> out;
  if (!next_line(in, line)) throw Error("multiplets: empty file");
  std::size_t row = 0;
  while (next_line(in, line)) {
    const std::string where = "multiplets row " + std::to_string(++row);
    const auto f = split_csv(line);
    if (f.size() != 6) throw Error(where + ": expected 6 fields");
    MultipletResult r;
    r.window_id = parse_int(f[0], where);
    r.target = f[1];
    auto kind = parse_multiplet_kind(f[2]);
    if (!kind) throw Error(where + ": unknown kind '" + f[2] + "'");
    r.kind = *kind;
    r.size = parse_int(f[3], where);
    r.value = parse_double(f[4], where);
    r.lag_p = lag;
    std::string_view members = f[5];
    for (std::size_t pos = 0;;) {
      auto bar = members.find('|', pos);
      r.members.emplace_back(members.substr(pos, bar - pos));
      if (bar == std::string_view::npos) break;
      pos = bar + 1;
    }
    if (static_cast<int>(r.members.size()) != r.size) throw Error(where + ": size mismatch");
    out.push_back(std::move(r));
  }
  return out;
}

void write_window_corr(std::ostream& rho_out, std::ostream& p_out, const WindowCorrelation& c) {
  for (std::ostream* out : {&rho_out, &p_out}) {
    *out << "window";
    for (int id : c.window_ids) *out << ',' << id;
    *out << '\n';
  }
  for (Index h = 0; h < c.rho.rows(); ++h) {
    rho_out << c.window_ids[static_cast<std::size_t>(h)];
    p_out << c.window_ids[static_cast<std::size_t>(h)];
    for (Index k = 0; k < c.rho.cols(); ++k) {
      rho_out << ',' << format_double(c.rho(h, k));
      p_out << ',' << format_double(c.p_value(h, k));
    }
    rho_out << '\n';
    p_out << '\n';
  }
}

void write_indicators(std::ostream& out, std::span<const IndicatorRow> rows) {
  out << "window,start_date,total_volume,mean_f,mean_redundancy,mean_synergy,"
         "ma10_total_volume,ma10_mean_f,ma10_mean_redundancy,ma10_mean_synergy\n";
  for (const auto& r : rows) {
    const auto& c = r.current;
    const auto& m = r.moving_average;
    out << c.window_id << ',' << c.start_date << ',' << format_optional(c.total_volume) << ','
        << format_optional(c.mean_f) << ',' << format_optional(c.mean_redundancy) << ','
        << format_optional(c.mean_synergy) << ',' << format_optional(m.total_volume) << ','
        << format_optional(m.mean_f) << ',' << format_optional(m.mean_redundancy) << ','
        << format_optional(m.mean_synergy) << '\n';
  }
}

void write_membership(std::ostream& out, std::span<const MembershipRow> rows) {
  out << "ticker,class,redundant,synergistic,total\n";
  for (const auto& r : rows) {
    out << r.ticker << ',' << to_string(r.asset_class) << ',' << r.redundant << ','
        << r.synergistic << ',' << r.total() << '\n';
  }
}

void write_class_fractions(std::ostream& out, std::span<const ClassFractionRow> rows) {
  out << "kind,size,multiplets,coin,token,stablecoin,fiat,unknown\n";
  for (const auto& r : rows) {
    out << to_string(r.kind) << ',' << r.size << ',' << r.multiplets;
    for (auto c : {AssetClass::coin, AssetClass::token, AssetClass::stablecoin, AssetClass::fiat,
                   AssetClass::unknown}) {
      auto it = r.fraction.find(c);
      out << ',' << format_double(it == r.fraction.end() ? 0.0 : it->second);
    }
    out << '\n';
  }
}

void write_age_strength(std::ostream& out, const StrengthHistory& history) {
  out << "ticker,age,mean_k_in,mean_k_out\n";
  for (std::size_t i = 0; i < history.labels.size(); ++i) {
    const auto k = static_cast<Index>(i);
    out << history.labels[i] << ',' << format_double(history.age(k)) << ','
        << format_double(history.mean_k_in(k)) << ',' << format_double(history.mean_k_out(k))
        << '\n';
  }
}

void write_age_strength_corr(std::ostream& out,
                             const std::optional<AgeStrengthCorrelation>& correlation) {
  out << "strength,rho,p_value,significance\n";
  const RankCorrelation undefined{};
  for (const auto& [name, c] : {std::pair{"in", correlation ? correlation->in : undefined},
                                std::pair{"out", correlation ? correlation->out : undefined}}) {
    const bool ok = correlation && c.defined;
    out << name << ',' << (ok ? format_double(c.rho) : "NA") << ','
        << (ok ? format_double(c.p_value) : "NA") << ',' << (ok ? c.stars() : "") << '\n';
  }
}

void write_window_table(std::ostream& out, std::span<const WindowRecord> rows) {
  out << "window,start_date,start,minutes,total_volume\n";
  for (const auto& r : rows) {
    out << r.window_id << ',' << r.start_date << ',' << r.start << ',' << r.minutes << ','
        << format_optional(r.total_volume) << '\n';
  }
}

std::vector<WindowRecord> read_window_table(std::istream& in) {
  std::string line;
  std::vector<WindowRecord> rows;
  if (!next_line(in, line)) throw Error("window table: empty file");
  std::size_t row = 0;
  while (next_line(in, line)) {
    const std::string where = "window table row " + std::to_string(++row);
    const auto f = split_csv(line);
    if (f.size() != 5) throw Error(where + ": expected 5 fields");
    WindowRecord r;
    r.window_id = parse_int(f[0], where);
    r.start_date = f[1];
    std::int64_t start = 0;
    auto [ptr, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), start);
    if (ec != std::errc() || ptr != f[2].data() + f[2].size()) {
      throw Error(where + ": bad start '" + f[2] + "'");
    }
    r.start = start;
    r.minutes = parse_int(f[3], where);
    const double v = parse_double(f[4], where);
    if (!std::isnan(v)) r.total_volume = v;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace infoflow
