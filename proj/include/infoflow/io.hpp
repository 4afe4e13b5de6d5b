#ifndef INFOFLOW_IO_HPP
#define INFOFLOW_IO_HPP

// Text formats of every artifact the tools read or write. Reals are written
// in shortest round-trip form; absent values as "NA".

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infoflow/granger.hpp"
#include "infoflow/ingest.hpp"
#include "infoflow/network.hpp"
#include "infoflow/oinfo.hpp"

namespace infoflow {

std::string format_double(double value);
std::string format_optional(const std::optional<double>& value);
std::vector<std::string> split_csv(std::string_view line);
double parse_double(std::string_view field, const std::string& where);

// panel_<w>.csv: ticker header, one row per minute. Only active columns are
// written; everything read back is active.
void write_panel(std::ostream& out, const ReturnPanel& panel);
ReturnPanel read_panel(std::istream& in, int window_id);

// window,source,target,f_value,p_value,order_p,order_q for significant edges.
void write_edges(std::ostream& out, int window_id, std::span<const GcEdge> edges);
std::vector<GcEdge> read_edges(std::istream& in);

// Dense weights with a ticker header row and a leading ticker column.
void write_dense_matrix(std::ostream& out, const AdjacencyMatrix& a);

// ticker,k_in,k_out
void write_strengths(std::ostream& out, const AdjacencyMatrix& a);
std::vector<std::string> read_strength_labels(std::istream& in);

// Rebuilds a window network from its node list and significant edges.
AdjacencyMatrix adjacency_from_edges(int window_id, std::vector<std::string> labels,
                                     std::span<const GcEdge> edges, double alpha);

// window,target,kind,size,value,member1|member2|...
void write_multiplets(std::ostream& out, std::span<const MultipletResult> results);
std::vector<MultipletResult> read_multiplets(std::istream& in, int lag);

void write_window_corr(std::ostream& rho_out, std::ostream& p_out, const WindowCorrelation& c);
void write_indicators(std::ostream& out, std::span<const IndicatorRow> rows);
void write_membership(std::ostream& out, std::span<const MembershipRow> rows);
void write_class_fractions(std::ostream& out, std::span<const ClassFractionRow> rows);
void write_age_strength(std::ostream& out, const StrengthHistory& history);
// strength,rho,p_value,significance for in- and out-strength.
void write_age_strength_corr(std::ostream& out,
                             const std::optional<AgeStrengthCorrelation>& correlation);

// Calendar of an ingest run, with the dollar volume traded in each window.
struct WindowRecord {
  int window_id = 0;
  std::string start_date;
  std::int64_t start = 0;
  int minutes = 0;
  std::optional<double> total_volume;
};

void write_window_table(std::ostream& out, std::span<const WindowRecord> rows);
std::vector<WindowRecord> read_window_table(std::istream& in);

}  // namespace infoflow

#endif  // INFOFLOW_IO_HPP
