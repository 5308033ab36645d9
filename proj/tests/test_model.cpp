#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "holefield/errors.hpp"
#include "holefield/model.hpp"

using namespace holefield;

TEST_CASE("coverage argument") {
    NetworkParams p;
    p.gamma = 10.0;
    p.r0 = 0.1;
    p.alpha = 4.0;
    p.P = 1.0;
    CHECK(coverage_argument(p).s == doctest::Approx(1e-3).epsilon(1e-14));
    CHECK(coverage_argument(p).derived_from_coverage);

    p.P = 2.0;
    CHECK(coverage_argument(p).s == doctest::Approx(5e-4).epsilon(1e-14));

    NetworkParams unit;
    unit.gamma = 1.0;
    unit.r0 = 1.0;
    unit.alpha = 4.0;
    unit.P = 1.0;
    CHECK(coverage_argument(unit).s == 1.0);
}

TEST_CASE("coverage argument scales inversely with power") {
    NetworkParams p = preset(Scenario::HdLh).params;
    const double s = coverage_argument(p).s;
    for (double c : {0.1, 3.0, 10.0}) {
        NetworkParams q = p;
        q.P *= c;
        CHECK(coverage_argument(q).s == doctest::Approx(s / c).epsilon(1e-14));
    }
}

TEST_CASE("presets") {
    const auto hdlh = preset("HD-LH");
    CHECK(hdlh.params.lambda1 == 0.2);
    CHECK(hdlh.params.D == 1.5);
    const auto ldsh = preset("LD-SH");
    CHECK(ldsh.params.lambda1 == 0.05);
    CHECK(ldsh.params.D == 0.6);
    const auto hdsh = preset("HD-SH");
    CHECK(hdsh.params.lambda1 == 0.2);
    CHECK(hdsh.params.D == 0.6);
    const auto ldlh = preset("LD-LH");
    CHECK(ldlh.params.lambda1 == 0.05);
    CHECK(ldlh.params.D == 1.5);

    for (Scenario sc : kAllScenarios) {
        const NetworkParams& p = preset(sc).params;
        CHECK(p.lambda2 == 1.0);
        CHECK(p.alpha == 4.0);
        CHECK(p.P == 1.0);
        CHECK(p.r0 == 0.1);
        CHECK(p.gamma == doctest::Approx(db_to_linear(10.0)));
        CHECK_NOTHROW(validate(p));
        CHECK(warnings(p).empty());
        CHECK(preset(scenario_name(sc)).params == p);
    }

    CHECK(preset("hd_lh").scenario == Scenario::HdLh);
    CHECK_THROWS_AS(preset("MD-SH"), ConfigError);
    CHECK_THROWS_AS(preset(""), ConfigError);
}

TEST_CASE("sinc") {
    CHECK(sinc(0.5) == doctest::Approx(2.0 / kPi).epsilon(1e-15));
    CHECK(sinc(0.5) == doctest::Approx(0.63662).epsilon(1e-5));
    CHECK(sinc(0.0) == 1.0);
    CHECK(sinc(1e-12) == doctest::Approx(1.0));
    CHECK(sinc(2.0 / 3.0) == doctest::Approx(0.41350).epsilon(1e-5));
    CHECK(sinc(2.0 / 3.0) == doctest::Approx(std::sin(2.0 * kPi / 3.0) / (2.0 * kPi / 3.0)).epsilon(1e-15));
    // Continuous across the small-argument branch.
    CHECK(sinc(1.0001e-8) == doctest::Approx(sinc(0.9999e-8)).epsilon(1e-15));
}

TEST_CASE("dB conversion") {
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(db_to_linear(-10.0) == doctest::Approx(0.1).epsilon(1e-15));
    for (double db : {-10.0, -3.0, 0.0, 7.5, 20.0}) CHECK(linear_to_db(db_to_linear(db)) == doctest::Approx(db));
}

TEST_CASE("validation") {
    NetworkParams p;
    CHECK_NOTHROW(validate(p));

    auto broken = [](auto mutate) {
        NetworkParams q;
        mutate(q);
        return q;
    };
    CHECK_THROWS_AS(validate(broken([](NetworkParams& q) { q.alpha = 2.0; })), ConfigError);
    CHECK_THROWS_AS(validate(broken([](NetworkParams& q) { q.lambda2 = 0.0; })), ConfigError);
    CHECK_THROWS_AS(validate(broken([](NetworkParams& q) { q.lambda1 = -0.1; })), ConfigError);
    CHECK_THROWS_AS(validate(broken([](NetworkParams& q) { q.D = NAN; })), ConfigError);
    CHECK_THROWS_AS(validate(broken([](NetworkParams& q) { q.P = 0.0; })), ConfigError);
    CHECK_THROWS_AS(validate(broken([](NetworkParams& q) { q.r0 = INFINITY; })), ConfigError);
    CHECK_THROWS_AS(validate(broken([](NetworkParams& q) { q.gamma = 0.0; })), ConfigError);

    // lambda1 = 0 and D = 0 are degenerate but legal.
    CHECK_NOTHROW(validate(broken([](NetworkParams& q) { q.lambda1 = 0.0; q.D = 0.0; })));

    // Denser holes than baseline only warns.
    const NetworkParams dense = broken([](NetworkParams& q) { q.lambda1 = 2.0; });
    CHECK_NOTHROW(validate(dense));
    CHECK(warnings(dense).size() == 1);
}
