#include "doctest.h"

#include "nslit/units.hpp"

using namespace nslit;

TEST_CASE("parse_quantity") {
    CHECK(parse_quantity("20 um", Dimension::length) == 20e-6);
    CHECK(parse_quantity("20um", Dimension::length) == 20e-6);
    CHECK(parse_quantity("2 nm", Dimension::length) == 2e-9);
    CHECK(parse_quantity("20 \xc2\xb5m", Dimension::length) == 20e-6);
    CHECK(parse_quantity("18.5 \xc3\x85", Dimension::length) == doctest::Approx(1.85e-9).epsilon(1e-15));
    CHECK(parse_quantity("4976 1/m", Dimension::inverse_length) == 4976.0);
    CHECK(parse_quantity("-3.4 mm/s", Dimension::speed) == -3.4e-3);
    CHECK(parse_quantity("1 atm", Dimension::pressure) == 101325.0);
    CHECK(parse_quantity("1e-27 m^2", Dimension::area) == 1e-27);
    CHECK(parse_quantity("10 b", Dimension::area) == doctest::Approx(1e-27).epsilon(1e-15));

    CHECK_THROWS_AS(parse_quantity("20", Dimension::length), UnitError);
    CHECK_THROWS_AS(parse_quantity("20 m/s", Dimension::length), UnitError);
    CHECK_THROWS_AS(parse_quantity("20 furlong", Dimension::length), UnitError);
    CHECK_THROWS_AS(parse_quantity("um", Dimension::length), UnitError);
    CHECK_THROWS_AS(parse_quantity("", Dimension::length), UnitError);
}

TEST_CASE("parse_momentum") {
    const double m = 2.0;
    CHECK(parse_momentum("3 m/s", m) == 6.0);
    CHECK(parse_momentum("1e-30 kg*m/s", m) == 1e-30);
    CHECK_THROWS_AS(parse_momentum("3 m", m), UnitError);
}

TEST_CASE("format_quantity round trips exactly") {
    for (double v : {20e-6, 1.9999999999999998e-05, 2e-9, 0.1, 1.0 / 3.0, -7.25e-31}) {
        CHECK(parse_quantity(format_quantity(v, Dimension::length), Dimension::length) == v);
    }
    CHECK(format_quantity(5.0, Dimension::length) == "5 m");
}
