#include <doctest.h>

#include <cmath>
#include <limits>

#include "bdikit/errors.hpp"
#include "bdikit/verify.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace bdikit;
using namespace bdikit::verify;

TEST_CASE("oracle report") {
  CHECK(make_report("q", 1.0, 1.2, 0.1).pass);
  CHECK_FALSE(make_report("q", 1.0, 1.4, 0.1).pass);
  CHECK(make_report("q", 1.0, 1.4, 0.1).z_score == doctest::Approx(4.0));
  CHECK(make_report("q", 1.0, 1.0, 0.0).pass);
  CHECK(make_report("q", 1.0, 1.0 + 1e-13, 0.0).pass);
  const auto bad = make_report("q", 1.0, 1.001, 0.0);
  CHECK_FALSE(bad.pass);
  CHECK(bad.z_score == std::numeric_limits<double>::infinity());
}

TEST_CASE("closed forms") {
  const auto [m1, m2] = mm_infinity_moments(2.0, 1.0);
  CHECK(m1 == 2.0);
  CHECK(m2 == 6.0);
  CHECK_THROWS_AS(mm_infinity_moments(0.0, 1.0), PreconditionError);

  // the occupation density integrates to c / kappa
  const double mass = oracle::integrate([](double z) { return pure_death_occupation_density(1.0, 1.0, z); }, -40, 40);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pure_death_occupation_density(1.0, 1.0, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("moment formula") {
  CHECK(moment_formula(1.0, 1.0, 0.5, 1, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(moment_formula(1.0, 1.0, 0.5, 2, 1.0) == doctest::Approx(7.0).epsilon(1e-10));
  CHECK(moment_formula(2.0, 1.0, 0.0, 2, 0.0) == doctest::Approx(6.0).epsilon(1e-10));
  CHECK_THROWS_AS(moment_formula(1.0, 1.0, 1.0, 1, 1.0), PreconditionError);
  CHECK_THROWS_AS(moment_formula(1.0, 1.0, 0.5, 3, 1.0), PreconditionError);

  Rng rng = make_rng(1, 0);
  for (int i = 0; i < 20; ++i) {
    const double c = 0.1 + 4.9 * uniform01(rng);
    const double kappa = 0.1 + 4.9 * uniform01(rng);
    const double p0 = 0.3 + 0.6 * uniform01(rng);
    const double p2 = (1.0 - p0) * uniform01(rng);
    const double p1 = 1.0 - p0 - p2;
    const double rho = p1 + 2 * p2;
    const double m2 = p1 + 4 * p2;
    if (rho >= 1.0) continue;
    const double expect = oracle::second_moment_closed_form(c, kappa, rho, m2);
    CHECK(std::abs(moment_formula(c, kappa, rho, 2, m2) - expect) <= 1e-10 * std::max(1.0, expect));
    CHECK(std::abs(moment_formula(c, kappa, rho, 1, m2) - c / (kappa * (1 - rho))) <= 1e-12 * c / (kappa * (1 - rho)));
  }
}

TEST_CASE("expectation semigroup: direct simulation against Feynman-Kac") {
  const double y[1] = {0.0};
  SUBCASE("constant rates") {
    const auto s = fixture::spec("binary-subcritical");
    Rng rng = make_rng(2, 0);
    const auto reports = expectation_semigroup_compare(s, y, 1.0, 0.05, 20000, 2000, rng, true);
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].quantity == "direct_vs_feynman_kac");
    for (const auto& r : reports) CHECK_MESSAGE(r.pass, r.quantity << " z=" << r.z_score);
  }
  SUBCASE("position-dependent kill rate") {
    const auto s = fixture::spec("gaussian-binary", {{"kill_rate_amplitude", "0.5"}});
    Rng rng = make_rng(2, 1);
    const auto reports = expectation_semigroup_compare(s, y, 1.0, 0.02, 20000, 20000, rng, false);
    REQUIRE(reports.size() == 1);
    CHECK_MESSAGE(reports[0].pass, "z=" << reports[0].z_score);
  }
  SUBCASE("arguments") {
    const auto s = fixture::spec("binary-subcritical");
    Rng rng = make_rng(2, 2);
    CHECK_THROWS_AS(expectation_semigroup_compare(s, y, 1.0, 0.05, 1, 10, rng, true), PreconditionError);
    CHECK_THROWS_AS(expectation_semigroup_compare(s, y, 0.0, 0.05, 10, 10, rng, true), PreconditionError);
  }
}
