#include <doctest.h>

#include <cmath>

#include "bdikit/bdi.hpp"
#include "bdikit/errors.hpp"
#include "bdikit/observe.hpp"
#include "bdikit/reconstruct.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace bdikit;

namespace {

Configuration cfg(std::vector<double> xs) { return make_configuration(std::move(xs)); }

Configuration cfg2(std::vector<double> xy) { return make_configuration(std::move(xy), 2); }

}  // namespace

TEST_CASE("configuration: canonical order and wellspread sets") {
  Configuration x(1);
  x.push_back(std::vector<double>{2.0}, 7);
  x.push_back(std::vector<double>{-1.0}, 3);
  x.push_back(std::vector<double>{2.0}, 1);
  const auto c = canonical(x, true);
  CHECK(c.positions == std::vector<double>{-1.0, 2.0, 2.0});
  CHECK(c.ids == std::vector<std::uint64_t>{3, 1, 7});
  CHECK(canonical(x, false).ids.empty());

  CHECK(is_wellspread(cfg({0.0, 1.0, 3.0}), 1.0));
  CHECK_FALSE(is_wellspread(cfg({0.0, 0.999, 3.0}), 1.0));
  CHECK(is_wellspread(cfg({5.0}), 100.0));
  CHECK(is_wellspread(Configuration(1), 1.0));
  CHECK_THROWS_AS(is_wellspread(cfg({0.0}), 0.0), PreconditionError);
  // every coordinate must be separated
  CHECK_FALSE(is_wellspread(cfg2({0.0, 0.0, 5.0, 0.5}), 1.0));
  CHECK(is_wellspread(cfg2({0.0, 0.0, 5.0, 1.5}), 1.0));

  CHECK(in_N_epsilon(cfg({0.0, 0.5}), 1.0));
  CHECK_FALSE(in_N_epsilon(cfg({0.0}), 1.0));
  CHECK_FALSE(in_N_epsilon(cfg({0.0, 0.5}), 0.0));

  Rng rng = make_rng(1, 0);
  for (int i = 0; i < 500; ++i) {
    const int d = 1 + static_cast<int>(uniform01(rng) * 2.0);
    const std::size_t n = 1 + static_cast<std::size_t>(uniform01(rng) * 6.0);
    std::vector<double> p(n * static_cast<std::size_t>(d));
    for (auto& v : p) v = 10.0 * uniform01(rng);
    const auto y = make_configuration(p, d);
    const double eps = 0.05 + 2.0 * uniform01(rng);
    CHECK(is_wellspread(y, eps) == oracle::wellspread(y, eps));
    CHECK(in_N_epsilon(y, eps) == (y.size() >= 2 && !oracle::wellspread(y, eps)));
  }
}

TEST_CASE("match_pair: worked examples") {
  const double delta = 0.01;
  const double lambda = 0.5;  // r = 0.1

  const auto swapped = match_pair(cfg({0.0, 1.0}), cfg({0.05, 0.98}), delta, lambda);
  REQUIRE(swapped.identified());
  CHECK(swapped.permutation == std::vector<std::size_t>{0, 1});

  const auto crossing = match_pair(cfg({0.0, 1.0}), cfg({0.98, 0.05}), delta, lambda);
  REQUIRE(crossing.identified());
  CHECK(crossing.permutation == std::vector<std::size_t>{1, 0});

  CHECK(match_pair(Configuration(1), Configuration(1), delta, lambda).reason == MatchResult::Reason::void_config);
  CHECK(match_pair(cfg({0.0}), cfg({0.0, 1.0}), delta, lambda).reason == MatchResult::Reason::length_mismatch);
  CHECK(match_pair(cfg({0.0, 0.3}), cfg({0.0, 0.3}), delta, lambda).reason ==
        MatchResult::Reason::x_not_wellspread);
  CHECK(match_pair(cfg({0.0, 1.0}), cfg({0.09, 0.2}), delta, lambda).reason ==
        MatchResult::Reason::y_not_wellspread);
  const auto far = match_pair(cfg({0.0, 1.0}), cfg({0.5, 1.0}), delta, lambda);
  CHECK(far.reason == MatchResult::Reason::no_valid_permutation);
  CHECK_FALSE(far.identified());

  // the bound is strict
  CHECK_FALSE(match_pair(cfg({0.0}), cfg({0.1}), delta, lambda).identified());
  CHECK(match_pair(cfg({0.0}), cfg({0.0999}), delta, lambda).identified());

  // two dimensions, one coordinate too far
  CHECK_FALSE(match_pair(cfg2({0.0, 0.0}), cfg2({0.01, 0.2}), delta, lambda).identified());
  CHECK(match_pair(cfg2({0.0, 0.0}), cfg2({0.01, -0.05}), delta, lambda).identified());
}

TEST_CASE("match_pair agrees with brute-force permutations") {
  Rng rng = make_rng(2, 0);
  const double delta = 0.04;
  const double lambda = 0.5;
  const double r = 0.2;
  int identified = 0;
  for (int i = 0; i < 3000; ++i) {
    const int d = uniform01(rng) < 0.5 ? 1 : 2;
    const std::size_t n = 1 + static_cast<std::size_t>(uniform01(rng) * 5.0);
    std::vector<double> p(n * static_cast<std::size_t>(d));
    for (auto& v : p) v = 6.0 * uniform01(rng);
    const auto x = make_configuration(p, d);
    std::vector<double> q = p;
    for (auto& v : q) v += 0.5 * (uniform01(rng) - 0.5);
    // shuffle y
    auto y = make_configuration(q, d);
    y = canonical(y, false);
    const auto m = match_pair(x, y, delta, lambda);
    const bool precheck = oracle::wellspread(x, 4 * r) && oracle::wellspread(y, 2 * r);
    const auto perms = oracle::matching_permutations(x, y, r);
    if (precheck && perms.size() == 1) {
      ++identified;
      REQUIRE(m.identified());
      CHECK(m.permutation == perms.front());
    } else {
      CHECK_FALSE(m.identified());
    }
    // under the wellspread conditions at most one permutation matches
    if (precheck) CHECK(perms.size() <= 1);
  }
  CHECK(identified > 100);
}

TEST_CASE("continuously identifiable pairs are identified correctly") {
  const auto s = fixture::spec("reconstruct-bm");
  Rng rng = make_rng(3, 0);
  const double delta = 0.01;
  const double lambda = 0.4;
  const auto traj = simulate(s, Configuration(1), 300.0, 0.001, rng);
  const auto obs = observe(traj, delta);
  REQUIRE(obs.observations.size() == 30001);
  REQUIRE(obs.truth.size() == 30000);
  const auto pairs = reconstruct_increments(obs.observations, delta, lambda);
  const auto st = classify_against_truth(pairs, obs.truth, delta, lambda);
  CHECK(st.n_pairs == 30000);
  CHECK(st.n_ci > 1000);
  CHECK(st.n_ci_not_identifiable == 0);
  CHECK(st.n_ci_wrong == 0);
  CHECK(st.n_identifiable >= st.n_ci);
  CHECK(st.n_identifiable_correct + st.n_identifiable_wrong == st.n_identifiable);
  CHECK(st.codes.size() == st.n_pairs);

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!pairs[i].match.identified() || !permutation_matches_truth(pairs[i].match, obs.truth[i])) continue;
    if (obs.truth[i].had_event) continue;
    // a correct match reproduces the true increments
    REQUIRE(pairs[i].increments.size() == obs.truth[i].increments.size());
    for (std::size_t k = 0; k < pairs[i].increments.size(); ++k) {
      CHECK(std::abs(pairs[i].increments[k] - obs.truth[i].increments[k]) < 1e-12);
    }
  }

  const auto p = st.proportion_estimate(is_ci);
  CHECK(p.estimate == doctest::Approx(st.proportion(st.n_ci)).epsilon(1e-12));
  CHECK(p.std_error > 0.0);
}

TEST_CASE("observe: stride, truth records and CI flag") {
  CHECK(observation_stride(0.01, 0.001) == 10);
  CHECK_THROWS_AS(observation_stride(0.01, 0.003), PreconditionError);

  Configuration a(1);
  a.push_back(std::vector<double>{1.0}, 4);
  a.push_back(std::vector<double>{0.0}, 2);
  Configuration b(1);
  b.push_back(std::vector<double>{0.02}, 2);
  b.push_back(std::vector<double>{1.05}, 4);
  const auto seg = make_segment(0, false, a, b);
  CHECK(seg.start_config.ids == std::vector<std::uint64_t>{2, 4});
  REQUIRE(seg.increments.size() == 2);
  CHECK(seg.increments[0] == doctest::Approx(0.02));
  CHECK(seg.increments[1] == doctest::Approx(0.05));
  CHECK(seg.ci_flag(0.01, 0.5));           // r = 0.1, gap 1 >= 0.4
  CHECK_FALSE(seg.ci_flag(0.0025, 0.5));   // r = 0.05, increment 0.05 not below r
  CHECK_FALSE(make_segment(0, true, a, b).ci_flag(0.01, 0.5));
  CHECK_FALSE(make_segment(0, false, Configuration(1), Configuration(1)).ci_flag(0.01, 0.5));

  const auto s = fixture::spec("binary-subcritical", {{"immigration_rate", "3"}});
  Rng rng = make_rng(4, 0);
  const auto traj = simulate(s, Configuration(1), 20.0, 0.01, rng);
  const auto obs = observe(traj, 0.1);
  REQUIRE(obs.observations.size() == 201);
  for (std::size_t i = 0; i < obs.truth.size(); ++i) {
    CHECK(obs.truth[i].start_config.positions == obs.observations[i].positions);
    CHECK(obs.truth[i].end_config.positions == obs.observations[i + 1].positions);
    CHECK(obs.observations[i].ids.empty());
    bool event = false;
    for (const auto& e : traj.events) event = event || (e.time > i * 0.1 && e.time <= (i + 1) * 0.1 + 1e-12);
    CHECK(obs.truth[i].had_event == event);
  }
}

TEST_CASE("wellspread measure estimates") {
  const auto s = fixture::spec("mm-infinity");
  Rng rng = make_rng(5, 0);
  const std::vector<double> eps{0.0, 0.01, 0.1, 1.0};
  const auto st = run_regenerative(s, 2000, 0.05, wellspread_functionals(eps), rng);
  const auto est = wellspread_measure_estimate(st, eps);
  REQUIRE(est.size() == 4);
  CHECK(est[0].mu.estimate == 0.0);
  for (std::size_t i = 1; i < est.size(); ++i) CHECK(est[i].mu.estimate >= est[i - 1].mu.estimate);
  CHECK(est[3].mu.estimate > 0.05);
  CHECK(n_epsilon_name(0.1) == "N(0.10000000000000001)");
}
