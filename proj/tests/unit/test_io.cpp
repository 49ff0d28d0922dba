#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "bdikit/bdi.hpp"
#include "bdikit/errors.hpp"
#include "bdikit/io.hpp"
#include "bdikit/observe.hpp"
#include "support/fixtures.hpp"

using namespace bdikit;

namespace {

io::CsvTable round_trip(const io::CsvTable& t) {
  std::stringstream ss;
  io::write_csv(ss, t);
  return io::read_csv(ss);
}

}  // namespace

TEST_CASE("number formatting round-trips exactly") {
  Rng rng = make_rng(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = (uniform01(rng) - 0.5) * std::pow(10.0, static_cast<int>(uniform01(rng) * 40) - 20);
    CHECK(io::parse_list(io::format_double(v)).at(0) == v);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::parse_list("1 2  3") == std::vector<double>{1, 2, 3});
  CHECK(io::parse_list("").empty());
  CHECK(io::parse_list("0.5,0.25", ',') == std::vector<double>{0.5, 0.25});
  CHECK_THROWS_AS(io::parse_list("1 x"), PreconditionError);
}

TEST_CASE("trajectory and event tables") {
  const auto s = fixture::spec("gaussian-binary", {{"immigration_rate", "3"}});
  Rng rng = make_rng(2, 0);
  const auto traj = simulate(s, Configuration(1), 5.0, 0.1, rng);
  REQUIRE(!traj.events.empty());

  const auto tt = round_trip(io::trajectory_table(traj, {{"seed", "7"}}));
  CHECK(tt.meta("seed") == "7");
  CHECK(tt.columns == std::vector<std::string>{"time", "kind", "grid_index", "count", "positions", "ids"});
  const auto back = io::trajectory_from_table(tt);
  CHECK(back.dim == traj.dim);
  CHECK(back.dt == traj.dt);
  CHECK(back.horizon == traj.horizon);
  REQUIRE(back.records.size() == traj.records.size());
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    CHECK(back.records[i].time == traj.records[i].time);
    CHECK(back.records[i].kind == traj.records[i].kind);
    CHECK(back.records[i].grid_index == traj.records[i].grid_index);
    CHECK(back.records[i].config == traj.records[i].config);
  }

  const auto ev = io::events_from_table(round_trip(io::event_table(traj.events)));
  REQUIRE(ev.size() == traj.events.size());
  for (std::size_t i = 0; i < ev.size(); ++i) {
    CHECK(ev[i].time == traj.events[i].time);
    CHECK(ev[i].kind == traj.events[i].kind);
    CHECK(ev[i].k == traj.events[i].k);
    CHECK(ev[i].parent_id == traj.events[i].parent_id);
    CHECK(ev[i].site == traj.events[i].site);
    CHECK(ev[i].child_ids == traj.events[i].child_ids);
    CHECK(ev[i].child_offsets == traj.events[i].child_offsets);
  }
}

TEST_CASE("observation table and JSON mirror") {
  const auto s = fixture::spec("binary-c2");
  Rng rng = make_rng(3, 0);
  const auto obs = observe(simulate(s, Configuration(1), 4.0, 0.01, rng), 0.5);
  const auto t = io::observation_table(obs.observations, 0.5, {{"preset", "binary-c2"}});
  CHECK(t.meta("delta") == "0.5");
  CHECK(t.meta("dim") == "1");
  const auto back = io::observations_from_table(round_trip(t));
  CHECK(back == obs.observations);

  const auto j = nlohmann::json::parse(io::to_json(t));
  CHECK(j["header"]["preset"] == "binary-c2");
  CHECK(j["columns"].size() == 4);
  CHECK(j["rows"].size() == obs.observations.size());

  CHECK_THROWS_AS(t.meta("nope"), PreconditionError);
  CHECK_THROWS_AS(t.column("nope"), PreconditionError);
  std::stringstream bad("a,b\n1\n");
  CHECK_THROWS_AS(io::read_csv(bad), PreconditionError);
}
