#include "bdikit/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "bdikit/errors.hpp"

namespace bdikit::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_list(const std::vector<double>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += format_double(v[i]);
  }
  return out;
}

std::vector<double> parse_list(const std::string& s, char sep) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = s.find(sep, pos);
    if (end == std::string::npos) end = s.size();
    if (end > pos) {
      double v = 0.0;
      const auto res = std::from_chars(s.data() + pos, s.data() + end, v);
      if (res.ec != std::errc() || res.ptr != s.data() + end) {
        throw PreconditionError("cannot parse number '" + s.substr(pos, end - pos) + "'");
      }
      out.push_back(v);
    }
    pos = end + 1;
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::uint64_t> parse_ids(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::istringstream is(s);
  std::uint64_t v = 0;
  while (is >> v) out.push_back(v);
  return out;
}

std::string format_ids(const std::vector<std::uint64_t>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(ids[i]);
  }
  return out;
}

double to_double(const std::string& s) {
  const auto v = parse_list(s);
  if (v.size() != 1) throw PreconditionError("expected one number, got '" + s + "'");
  return v[0];
}

Header with_dim(Header h, int dim) {
  if (std::none_of(h.begin(), h.end(), [](const auto& kv) { return kv.first == "dim"; })) {
    h.emplace_back("dim", std::to_string(dim));
  }
  return h;
}

}  // namespace

const std::string& CsvTable::meta(const std::string& key) const {
  for (const auto& [k, v] : header) {
    if (k == key) return v;
  }
  throw PreconditionError("header key '" + key + "' is missing");
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw PreconditionError("column '" + name + "' is missing");
  return static_cast<std::size_t>(it - columns.begin());
}

void write_csv(std::ostream& os, const CsvTable& t) {
  for (const auto& [k, v] : t.header) os << "# " << k << '=' << v << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  bool have_columns = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body.erase(0, 1);
      const auto eq = body.find('=');
      if (eq != std::string::npos) t.header.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    auto fields = split_csv_line(line);
    if (!have_columns) {
      t.columns = std::move(fields);
      have_columns = true;
    } else {
      if (fields.size() != t.columns.size()) throw PreconditionError("CSV row has the wrong number of fields");
      t.rows.push_back(std::move(fields));
    }
  }
  return t;
}

void write_csv_file(const std::string& path, const CsvTable& table) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_csv(os, table);
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path + "'");
  return read_csv(is);
}

std::string to_json(const CsvTable& t) {
  nlohmann::ordered_json j;
  j["header"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.header) j["header"][k] = v;
  j["columns"] = t.columns;
  j["rows"] = t.rows;
  return j.dump(1);
}

CsvTable trajectory_table(const Trajectory& traj, Header header) {
  header = with_dim(std::move(header), traj.dim);
  header.emplace_back("dt", format_double(traj.dt));
  header.emplace_back("horizon", format_double(traj.horizon));
  CsvTable t{std::move(header), {"time", "kind", "grid_index", "count", "positions", "ids"}, {}};
  for (const auto& r : traj.records) {
    t.rows.push_back({format_double(r.time), r.kind == TrajectoryRecord::Kind::grid ? "grid" : "event",
                      std::to_string(r.grid_index), std::to_string(r.config.size()),
                      format_list(r.config.positions), format_ids(r.config.ids)});
  }
  return t;
}

Trajectory trajectory_from_table(const CsvTable& t) {
  Trajectory traj;
  traj.dim = std::stoi(t.meta("dim"));
  traj.dt = to_double(t.meta("dt"));
  traj.horizon = to_double(t.meta("horizon"));
  const auto c_time = t.column("time"), c_kind = t.column("kind"), c_idx = t.column("grid_index"),
             c_count = t.column("count"), c_pos = t.column("positions"), c_ids = t.column("ids");
  for (const auto& row : t.rows) {
    TrajectoryRecord r;
    r.time = to_double(row[c_time]);
    r.kind = row[c_kind] == "grid" ? TrajectoryRecord::Kind::grid : TrajectoryRecord::Kind::event;
    r.grid_index = static_cast<std::size_t>(std::stoull(row[c_idx]));
    r.config.dim = traj.dim;
    r.config.positions = parse_list(row[c_pos]);
    r.config.ids = parse_ids(row[c_ids]);
    if (r.config.size() != std::stoull(row[c_count])) throw PreconditionError("trajectory row count mismatch");
    traj.records.push_back(std::move(r));
  }
  return traj;
}

CsvTable event_table(const std::vector<EventLogEntry>& events, Header header) {
  CsvTable t{std::move(header), {"time", "kind", "k", "parent_id", "site", "child_ids", "child_offsets"}, {}};
  for (const auto& e : events) {
    t.rows.push_back({format_double(e.time), to_string(e.kind), std::to_string(e.k), std::to_string(e.parent_id),
                      format_list(e.site), format_ids(e.child_ids), format_list(e.child_offsets)});
  }
  return t;
}

std::vector<EventLogEntry> events_from_table(const CsvTable& t) {
  std::vector<EventLogEntry> out;
  const auto c_time = t.column("time"), c_kind = t.column("kind"), c_k = t.column("k"),
             c_parent = t.column("parent_id"), c_site = t.column("site"), c_ids = t.column("child_ids"),
             c_off = t.column("child_offsets");
  for (const auto& row : t.rows) {
    EventLogEntry e;
    e.time = to_double(row[c_time]);
    const auto& kind = row[c_kind];
    if (kind == "death") {
      e.kind = EventLogEntry::Kind::death;
    } else if (kind == "branch") {
      e.kind = EventLogEntry::Kind::branch;
    } else if (kind == "immigration") {
      e.kind = EventLogEntry::Kind::immigration;
    } else {
      throw PreconditionError("unknown event kind '" + kind + "'");
    }
    e.k = std::stoi(row[c_k]);
    e.parent_id = std::stoull(row[c_parent]);
    e.site = parse_list(row[c_site]);
    e.child_ids = parse_ids(row[c_ids]);
    e.child_offsets = parse_list(row[c_off]);
    out.push_back(std::move(e));
  }
  return out;
}

CsvTable observation_table(const std::vector<Configuration>& obs, double delta, Header header) {
  header = with_dim(std::move(header), obs.empty() ? 1 : obs.front().dim);
  header.emplace_back("delta", format_double(delta));
  CsvTable t{std::move(header), {"index", "time", "count", "positions"}, {}};
  for (std::size_t i = 0; i < obs.size(); ++i) {
    t.rows.push_back({std::to_string(i), format_double(static_cast<double>(i) * delta), std::to_string(obs[i].size()),
                      format_list(obs[i].positions)});
  }
  return t;
}

std::vector<Configuration> observations_from_table(const CsvTable& t) {
  const int dim = std::stoi(t.meta("dim"));
  const auto c_count = t.column("count"), c_pos = t.column("positions");
  std::vector<Configuration> out;
  for (const auto& row : t.rows) {
    Configuration c(dim);
    c.positions = parse_list(row[c_pos]);
    if (c.size() != std::stoull(row[c_count])) throw PreconditionError("observation row count mismatch");
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace bdikit::io
