#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "bdikit/bdi.hpp"
#include "bdikit/configuration.hpp"

namespace bdikit::io {

/// '#'-prefixed key=value lines written before the column row.
using Header = std::vector<std::pair<std::string, std::string>>;

/// Shortest-safe text for a double: 17 significant digits.
std::string format_double(double v);
std::string format_list(const std::vector<double>& v, char sep = ' ');
std::vector<double> parse_list(const std::string& s, char sep = ' ');

struct CsvTable {
  Header header;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Value of a header key; throws if missing.
  const std::string& meta(const std::string& key) const;
  std::size_t column(const std::string& name) const;
};

void write_csv(std::ostream& os, const CsvTable& table);
CsvTable read_csv(std::istream& is);
void write_csv_file(const std::string& path, const CsvTable& table);
CsvTable read_csv_file(const std::string& path);

/// JSON mirror: {"header": {...}, "columns": [...], "rows": [[...], ...]}.
std::string to_json(const CsvTable& table);

/// One row per record: time,kind,count,positions,ids (lists space-separated).
CsvTable trajectory_table(const Trajectory& trajectory, Header header = {});
Trajectory trajectory_from_table(const CsvTable& table);

/// One row per event: time,kind,k,parent_id,site,child_ids,child_offsets.
CsvTable event_table(const std::vector<EventLogEntry>& events, Header header = {});
std::vector<EventLogEntry> events_from_table(const CsvTable& table);

/// One row per observation: index,time,count,positions (no ids).
CsvTable observation_table(const std::vector<Configuration>& observations, double delta, Header header = {});
std::vector<Configuration> observations_from_table(const CsvTable& table);

}  // namespace bdikit::io
