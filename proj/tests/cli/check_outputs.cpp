// Checks on files written by the bdi tool.
//   check_outputs roundtrip DIR            every *.csv re-serializes byte-identically; typed readers accept them
//   check_outputs decreasing FILE COLUMN   column strictly decreases row by row
//   check_outputs constant FILE COLUMN V   column equals V on every row

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "bdikit/io.hpp"

namespace fs = std::filesystem;
using namespace bdikit;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int roundtrip(const fs::path& dir) {
  int checked = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".csv") continue;
    const auto table = io::read_csv_file(entry.path().string());
    std::ostringstream os;
    io::write_csv(os, table);
    if (os.str() != slurp(entry.path())) {
      std::cerr << entry.path() << " does not re-serialize identically\n";
      return 1;
    }
    const auto stem = entry.path().stem().string();
    if (stem == "trajectory") {
      const auto traj = io::trajectory_from_table(table);
      if (io::trajectory_table(traj, table.header).rows != table.rows) return 1;
    } else if (stem == "events") {
      if (io::event_table(io::events_from_table(table)).rows != table.rows) return 1;
    } else if (stem == "observations") {
      const auto obs = io::observations_from_table(table);
      if (io::observation_table(obs, std::stod(table.meta("delta"))).rows != table.rows) return 1;
    }
    ++checked;
  }
  std::cout << checked << " tables round-trip\n";
  return checked > 0 ? 0 : 1;
}

int decreasing(const std::string& file, const std::string& column) {
  const auto t = io::read_csv_file(file);
  const auto c = t.column(column);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    if (!(std::stod(t.rows[i][c]) < std::stod(t.rows[i - 1][c]))) {
      std::cerr << column << " does not decrease at row " << i << '\n';
      return 1;
    }
  }
  return t.rows.size() >= 2 ? 0 : 1;
}

int constant(const std::string& file, const std::string& column, const std::string& value) {
  const auto t = io::read_csv_file(file);
  const auto c = t.column(column);
  for (const auto& row : t.rows) {
    if (row[c] != value) return 1;
  }
  return t.rows.empty() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    const std::string mode = argc > 1 ? argv[1] : "";
    if (mode == "roundtrip" && argc == 3) return roundtrip(argv[2]);
    if (mode == "decreasing" && argc == 4) return decreasing(argv[2], argv[3]);
    if (mode == "constant" && argc == 5) return constant(argv[2], argv[3], argv[4]);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  std::cerr << "usage: check_outputs roundtrip DIR | decreasing FILE COLUMN | constant FILE COLUMN VALUE\n";
  return 2;
}
