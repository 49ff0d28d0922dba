#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "bdikit/bdi.hpp"
#include "bdikit/errors.hpp"
#include "bdikit/stats.hpp"
#include "bdikit/verify.hpp"
#include "support/fixtures.hpp"

using namespace bdikit;

namespace {

Configuration one_particle(double x) {
  Configuration c(1);
  c.push_back(std::vector<double>{x});
  return c;
}

}  // namespace

TEST_CASE("simulate: no immigration from the void configuration") {
  const auto s = fixture::spec("pure-death-bm", {{"immigration_rate", "0"}});
  Rng rng = make_rng(1, 0);
  const auto t = simulate(s, Configuration(1), 5.0, 0.1, rng);
  CHECK(t.events.empty());
  CHECK(t.records.size() == 51);
  for (const auto& r : t.records) CHECK(r.config.empty());
}

TEST_CASE("simulate: frozen pure death has exponential extinction time") {
  const auto s = fixture::spec("pure-death-bm", {{"sigma", "0"}, {"immigration_rate", "0"}});
  Rng rng = make_rng(1, 1);
  std::vector<double> times;
  for (int i = 0; i < 10000; ++i) {
    const auto t = simulate(s, one_particle(0.0), 40.0, 1.0, rng);
    REQUIRE(t.events.size() == 1);
    CHECK(t.events[0].kind == EventLogEntry::Kind::death);
    times.push_back(t.events[0].time);
  }
  const auto est = stats::mean_estimate(times);
  CHECK(std::abs(est.estimate - 1.0) <= 3 * est.std_error);
}

TEST_CASE("simulate: M/M/infinity time-average") {
  const auto s = fixture::spec("mm-infinity");
  Rng rng = make_rng(1, 2);
  const auto stats = run_regenerative(s, 2000, 0.05, count_power_functionals(1), rng);
  const auto m = functional_mean(stats, "ell^1");
  CHECK(std::abs(m.estimate - 2.0) <= 3 * m.std_error);
}

TEST_CASE("simulate_branching_only") {
  SUBCASE("p1 == 1 with local scatter keeps one particle") {
    const auto s = fixture::spec("pure-death-bm", {{"offspring", "0,1"}, {"immigration_rate", "5"}});
    Rng rng = make_rng(2, 0);
    const auto t = simulate_branching_only(s, one_particle(0.0), 10.0, 0.05, rng);
    CHECK(!t.events.empty());
    for (const auto& r : t.records) CHECK(r.config.size() == 1);
    for (const auto& e : t.events) CHECK(e.kind == EventLogEntry::Kind::branch);
  }
  SUBCASE("pure death goes extinct") {
    const auto s = fixture::spec("pure-death-bm");
    Rng rng = make_rng(2, 1);
    int survivors = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      survivors += simulate_branching_only(s, one_particle(0.0), 10.0, 0.5, rng).records.back().config.empty() ? 0 : 1;
    }
    CHECK(1.0 - static_cast<double>(survivors) / n >= 0.9999);
  }
  SUBCASE("subcritical binary mean count matches the many-to-one value") {
    const auto s = fixture::spec("binary-subcritical");
    Rng rng = make_rng(2, 2);
    std::vector<double> counts;
    for (int i = 0; i < 20000; ++i) {
      counts.push_back(static_cast<double>(simulate_branching_only(s, one_particle(0.0), 1.0, 0.1, rng)
                                               .records.back()
                                               .config.size()));
    }
    const auto est = stats::mean_estimate(counts);
    CHECK(std::abs(est.estimate - std::exp(-0.5)) <= 3 * est.std_error);
  }
}

TEST_CASE("lineage consistency and population balance") {
  const auto s = fixture::spec("gaussian-binary", {{"immigration_rate", "2"}});
  Rng rng = make_rng(3, 0);
  Configuration init(1);
  init.push_back(std::vector<double>{0.0}, 0);
  init.push_back(std::vector<double>{1.0}, 1);
  const auto t = simulate(s, init, 50.0, 0.05, rng);
  REQUIRE(t.events.size() > 50);

  std::set<std::uint64_t> alive{0, 1};
  std::set<std::uint64_t> dead;
  std::size_t e = 0;
  std::size_t prev_len = 2;
  double prev_time = -1.0;
  for (const auto& r : t.records) {
    if (r.kind == TrajectoryRecord::Kind::event) {
      const auto& ev = t.events[e++];
      CHECK(ev.time > prev_time);
      prev_time = ev.time;
      if (ev.kind == EventLogEntry::Kind::immigration) {
        CHECK(r.config.size() == prev_len + 1);
        CHECK(!alive.count(ev.parent_id));
        CHECK(!dead.count(ev.parent_id));
        alive.insert(ev.parent_id);
      } else {
        CHECK(ev.child_ids.size() == static_cast<std::size_t>(ev.k));
        CHECK(ev.child_offsets.size() == static_cast<std::size_t>(ev.k));
        CHECK(r.config.size() + 1 == prev_len + static_cast<std::size_t>(ev.k));
        CHECK(alive.erase(ev.parent_id) == 1);
        dead.insert(ev.parent_id);
        for (auto id : ev.child_ids) {
          CHECK(!dead.count(id));
          alive.insert(id);
        }
      }
    }
    const std::set<std::uint64_t> ids(r.config.ids.begin(), r.config.ids.end());
    CHECK(ids.size() == r.config.size());
    CHECK(ids == alive);
    prev_len = r.config.size();
  }
  CHECK(e == t.events.size());
}

TEST_CASE("explosion guard") {
  const auto s = fixture::spec("pure-death-bm", {{"offspring", "0,0,1"}});
  Rng rng = make_rng(4, 0);
  SimulationOptions opt;
  opt.max_population = 500;
  CHECK_THROWS_AS(simulate(s, one_particle(0.0), 100.0, 0.1, rng, opt), ExplosionError);
  opt.max_population = 1000000;
  opt.max_events = 200;
  CHECK_THROWS_AS(simulate(s, one_particle(0.0), 100.0, 0.1, rng, opt), ExplosionError);
}

TEST_CASE("run_regenerative: pure death with c = 2") {
  const auto s = fixture::spec("mm-infinity");
  Rng rng = make_rng(5, 0);
  auto fs = count_power_functionals(2);
  fs.push_back({"zero", [](const Configuration&) { return 0.0; }});
  for (int k = 0; k <= 5; ++k) {
    fs.push_back({"count=" + std::to_string(k),
                  [k](const Configuration& x) { return x.size() == static_cast<std::size_t>(k) ? 1.0 : 0.0; }});
  }
  const auto st = run_regenerative(s, 4000, 0.05, fs, rng);
  CHECK(st.cycle_count == 4000);
  CHECK(st.abandoned_cycles == 0);
  CHECK(st.time_at_void <= st.total_time);
  CHECK(st.integrals[st.index_of("zero")] == 0.0);

  const auto [m1, m2] = verify::mm_infinity_moments(2.0, 1.0);
  const auto mom = particle_count_moments(st, 2);
  CHECK(std::abs(mom[0].estimate - m1) <= 3 * mom[0].std_error);
  CHECK(std::abs(mom[1].estimate - m2) <= 3 * mom[1].std_error);
  CHECK_THROWS_AS(particle_count_moments(st, 3), PreconditionError);

  // regenerative ratio identity: mu(void) = E(void time per cycle) / E(R_1) with E(void time) = 1/c
  const auto v = void_fraction(st);
  const auto cycle = stats::mean_estimate(st.cycle_lengths);
  const double from_cycles = 0.5 / cycle.estimate;
  const double se = std::hypot(v.std_error, from_cycles * cycle.std_error / cycle.estimate);
  CHECK(std::abs(v.estimate - from_cycles) <= 3 * se);
  CHECK(std::abs(v.estimate - std::exp(-2.0)) <= 3 * v.std_error);

  // stationary law of the count is Poisson(2)
  for (int k = 0; k <= 5; ++k) {
    const auto pk = functional_mean(st, "count=" + std::to_string(k));
    const double poisson = std::exp(-2.0) * std::pow(2.0, k) / std::tgamma(k + 1.0);
    CHECK_MESSAGE(std::abs(pk.estimate - poisson) <= 3 * pk.std_error, "k=" << k);
  }

  // excursions are i.i.d.
  const double r = stats::lag1_autocorrelation(st.cycle_integrals[st.index_of("ell^1")]);
  CHECK(std::abs(r) < 3.0 / std::sqrt(4000.0));
}

TEST_CASE("run_regenerative: tiny immigration rate") {
  const auto s = fixture::spec("mm-infinity", {{"immigration_rate", "0.01"}});
  Rng rng = make_rng(5, 1);
  const auto st = run_regenerative(s, 3000, 0.1, count_power_functionals(1), rng);
  const auto m = particle_count_moments(st, 1)[0];
  CHECK(std::abs(m.estimate - 0.01) <= 3 * m.std_error);
}

TEST_CASE("run_regenerative: time cap abandons excursions") {
  const auto s = fixture::spec("mm-infinity", {{"immigration_rate", "20"}});
  Rng rng = make_rng(5, 2);
  RegenerativeOptions opt;
  opt.time_cap = 1.0;
  const auto st = run_regenerative(s, 20, 0.05, {}, rng, opt);
  CHECK(st.abandoned_cycles > 0);
  CHECK(st.cycle_count + st.abandoned_cycles == 20);
  CHECK_THROWS_AS(run_regenerative(s, 0, 0.05, {}, rng), PreconditionError);
}

TEST_CASE("occupation histogram") {
  const auto grid = HistogramGrid::uniform_1d(-2.0, 2.0, 40);
  SUBCASE("empty trajectory") {
    const auto s = fixture::spec("pure-death-bm", {{"immigration_rate", "0"}});
    Rng rng = make_rng(6, 0);
    const auto h = occupation_histogram(simulate(s, Configuration(1), 3.0, 0.1, rng), grid);
    for (double v : h.density()) CHECK(v == 0.0);
  }
  SUBCASE("mass conservation") {
    const auto s = fixture::spec("binary-subcritical", {{"immigration_rate", "3"}});
    Rng rng = make_rng(6, 1);
    const auto t = simulate(s, Configuration(1), 50.0, 0.05, rng);
    const auto h = occupation_histogram(t, grid);
    double mass = 0.0;
    for (double v : h.density()) mass += v * grid.bin_volume();
    double in_box = 0.0;
    for (std::size_t i = 0; i + 1 < t.records.size(); ++i) {
      const auto& c = t.records[i].config;
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (c.at(k)[0] >= -2.0 && c.at(k)[0] < 2.0) in_box += t.records[i + 1].time - t.records[i].time;
      }
    }
    CHECK(mass == doctest::Approx(in_box / 50.0).epsilon(1e-12));
  }
  SUBCASE("grid geometry") {
    HistogramGrid g{{0.0, 0.0}, {1.0, 2.0}, {2, 4}};
    CHECK(g.size() == 8);
    CHECK(g.bin_volume() == 0.25);
    CHECK(g.index_of(std::vector<double>{0.75, 1.25}) == 1 * 4 + 2);
    CHECK(g.index_of(std::vector<double>{1.0, 0.0}) == g.size());
    CHECK(g.center(6, 0) == 0.75);
    CHECK(g.center(6, 1) == 1.25);
  }
}
