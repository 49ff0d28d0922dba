#include <doctest.h>

#include <cmath>

#include "bdikit/errors.hpp"
#include "bdikit/model.hpp"
#include "bdikit/presets.hpp"
#include "support/fixtures.hpp"

using namespace bdikit;
using namespace bdikit::model;

TEST_CASE("rho over the declared support") {
  const double y[1] = {0.3};
  CHECK(rho(fixture::spec("pure-death-bm"), y) == 0.0);
  CHECK(rho(fixture::spec("pure-death-bm", {{"offspring", "0.5,0,0.5"}}), y) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rho(fixture::spec("binary-subcritical"), y) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("moment_mq") {
  const double y[1] = {-1.0};
  CHECK(moment_mq(fixture::spec("pure-death-bm"), y, 3) == 0.0);
  CHECK(moment_mq(fixture::spec("pure-death-bm", {{"offspring", "0,0,1"}}), y, 3) == 8.0);
  CHECK(moment_mq(fixture::spec("binary-subcritical"), y, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(moment_mq(fixture::spec("binary-subcritical"), y, 0), PreconditionError);
}

TEST_CASE("rho and m_1 agree with the offspring vector at random points") {
  auto s = fixture::spec("binary-subcritical", {{"offspring_alt", "0.2,0.3,0.1,0.4"}, {"offspring_split", "0.1"}});
  Rng rng = make_rng(11, 0);
  for (int i = 0; i < 200; ++i) {
    const double y[1] = {-3.0 + 6.0 * uniform01(rng)};
    const auto p = offspring_at(s, y);
    double dot = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) dot += static_cast<double>(k) * p[k];
    CHECK(std::abs(rho(s, y) - dot) <= 1e-12);
    CHECK(std::abs(moment_mq(s, y, 1) - rho(s, y)) <= 1e-12);
  }
}

TEST_CASE("validate_spec on presets reports no violations") {
  for (const auto& name : preset_names()) {
    Rng rng = make_rng(3, 1);
    const auto report = validate_spec(make_preset(name), 1000, rng);
    CHECK_MESSAGE(report.ok(), name);
    CHECK(report.points_checked == 1000);
  }
}

TEST_CASE("validate_spec flags a vanishing kill rate at the origin") {
  auto s = fixture::spec("pure-death-bm");
  s.kill_rate = [](ConstPoint x) { return std::abs(x[0]) < 0.5 ? 0.0 : 1.0; };
  Rng rng = make_rng(3, 2);
  const auto report = validate_spec(s, 50, rng);
  REQUIRE_FALSE(report.ok());
  bool near_zero = false;
  for (const auto& v : report.violations) {
    if (v.kind == Violation::Kind::kill_rate_nonpositive && std::abs(v.point[0]) < 0.5) near_zero = true;
  }
  CHECK(near_zero);
}

TEST_CASE("validate_spec flags a normalization defect") {
  auto s = fixture::spec("pure-death-bm", {{"offspring", "0.5,0,0.4"}});
  Rng rng = make_rng(3, 3);
  const auto report = validate_spec(s, 10, rng);
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations.front().kind == Violation::Kind::normalization);
  CHECK(report.violations.front().value == doctest::Approx(0.9));
}

TEST_CASE("validate_spec rejects malformed specs") {
  Rng rng = make_rng(3, 4);
  auto s = fixture::spec("pure-death-bm");
  s.kill_rate_bound = 0.0;
  CHECK_THROWS_AS(validate_spec(s, 10, rng), ValidationError);
  auto t = fixture::spec("pure-death-bm");
  t.offspring = [](ConstPoint, MutPoint out) { out[0] = 1.5; };
  CHECK_THROWS_AS(validate_spec(t, 10, rng), ValidationError);
  CHECK_THROWS_AS(fixture::spec("pure-death-bm", {{"offspring", "1.5"}}), ValidationError);
  CHECK_THROWS_AS(fixture::spec("pure-death-bm", {{"kill_rate", "0"}}), ValidationError);
}

TEST_CASE("validate_spec is deterministic given the seed") {
  auto s = fixture::spec("binary-subcritical", {{"kill_rate_amplitude", "0.5"}});
  s.kill_rate_bound = 1.2;  // understated on purpose
  Rng a = make_rng(5, 0);
  Rng b = make_rng(5, 0);
  const auto ra = validate_spec(s, 300, a);
  const auto rb = validate_spec(s, 300, b);
  REQUIRE(ra.violations.size() == rb.violations.size());
  CHECK(!ra.ok());
  for (std::size_t i = 0; i < ra.violations.size(); ++i) {
    CHECK(ra.violations[i].point == rb.violations[i].point);
    CHECK(ra.violations[i].value == rb.violations[i].value);
  }
  CHECK(ra.min_net_death_rate == rb.min_net_death_rate);
}

TEST_CASE("scatter with k = 0 is empty and local scatter is zero") {
  auto s = fixture::spec("binary-subcritical");
  Rng rng = make_rng(1, 1);
  const double y[1] = {0.0};
  std::vector<double> none;
  s.scatter(y, 0, rng, none);
  std::vector<double> two(2, 9.0);
  s.scatter(y, 2, rng, two);
  CHECK(two == std::vector<double>{0.0, 0.0});
}

TEST_CASE("size-biased offspring law") {
  const std::vector<double> p{0.5, 0.2, 0.2, 0.1};  // rho = 0.9
  Rng rng = make_rng(8, 0);
  std::vector<double> counts(4, 0.0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) counts[static_cast<std::size_t>(sample_size_biased_count(p, rng))] += 1.0;
  CHECK(counts[0] == 0.0);
  for (int k = 1; k <= 3; ++k) {
    const double expect = k * p[static_cast<std::size_t>(k)] / 0.9;
    const double se = std::sqrt(expect * (1 - expect) / n);
    CHECK(std::abs(counts[static_cast<std::size_t>(k)] / n - expect) < 4 * se);
  }
}

TEST_CASE("presets: overrides, JSON and unknown names") {
  auto p = preset_params("binary-c2");
  CHECK(p.immigration_rate == 2.0);
  apply_override(p, "kill_rate", "2.5");
  CHECK(p.kill_rate == 2.5);
  CHECK_THROWS_AS(apply_override(p, "kill_rate", "fast"), PreconditionError);
  CHECK_THROWS_AS(apply_override(p, "no_such_key", "1"), PreconditionError);
  CHECK_THROWS_AS(preset_params("no-such-preset"), PreconditionError);
  const auto q = params_from_json_text(R"({"preset": "pure-death-bm", "immigration_rate": 3, "offspring": [0.5, 0.5]})");
  CHECK(q.immigration_rate == 3.0);
  CHECK(q.offspring == std::vector<double>{0.5, 0.5});
  CHECK(to_key_values(q).at("offspring") == "0.5,0.5");
  CHECK_THROWS_AS(params_from_json_text("{not json"), PreconditionError);
}

TEST_CASE("suggest_dt keeps the observation step a multiple of dt") {
  const auto s = fixture::spec("estimate-sine");
  const double dt = suggest_dt(s, 0.01);
  CHECK(dt == doctest::Approx(0.0005));
  const double ratio = 0.01 / dt;
  CHECK(std::abs(ratio - std::round(ratio)) < 1e-9);
  CHECK_THROWS_AS(suggest_dt(s, 0.0), PreconditionError);
}
