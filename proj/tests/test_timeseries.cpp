#include <doctest.h>

#include <cmath>
#include <vector>

#include "fluidiqr/errors.hpp"
#include "fluidiqr/timeseries.hpp"

using namespace fluidiqr;

TEST_CASE("hour timestamps parse and format as strict UTC") {
    CHECK(parse_hour_timestamp("1970-01-01T00:00:00Z") == 0);
    CHECK(parse_hour_timestamp("1970-01-02T01:00:00Z") == 86400 + 3600);
    CHECK(parse_hour_timestamp("2017-05-01T00:00:00Z") == 1493596800);

    CHECK(format_hour_timestamp(0) == "1970-01-01T00:00:00Z");
    CHECK(format_hour_timestamp(1493596800) == "2017-05-01T00:00:00Z");
    // negative epochs floor to the previous day
    CHECK(format_hour_timestamp(-3600) == "1969-12-31T23:00:00Z");

    for (std::int64_t t : {std::int64_t{0}, std::int64_t{1493596800}, std::int64_t{-86400},
                           std::int64_t{4102444800}}) {
        CHECK(parse_hour_timestamp(format_hour_timestamp(t)) == t);
    }
}

TEST_CASE("malformed or misaligned timestamps are rejected") {
    CHECK_THROWS_AS(parse_hour_timestamp(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_hour_timestamp("2017-05-01 00:00:00Z"), std::invalid_argument);
    CHECK_THROWS_AS(parse_hour_timestamp("2017-05-01T00:00:00"), std::invalid_argument);
    CHECK_THROWS_AS(parse_hour_timestamp("2017-05-01T00:30:00Z"), std::invalid_argument);
    CHECK_THROWS_AS(parse_hour_timestamp("2017-05-01T00:00:30Z"), std::invalid_argument);
    CHECK_THROWS_AS(parse_hour_timestamp("2017-02-30T00:00:00Z"), std::invalid_argument);
    CHECK_THROWS_AS(parse_hour_timestamp("2017-13-01T00:00:00Z"), std::invalid_argument);
    CHECK_THROWS_AS(format_hour_timestamp(1800), std::invalid_argument);
}

TEST_CASE("hour of week counts from Sunday midnight") {
    // 1970-01-01 was a Thursday
    CHECK(hour_of_week(0) == 4 * 24);
    CHECK(hour_of_week(3 * 86400) == 0);          // 1970-01-04, a Sunday
    CHECK(hour_of_week(3 * 86400 + 3600) == 1);
    CHECK(hour_of_week(parse_hour_timestamp("2017-05-01T00:00:00Z")) == 24);  // a Monday
    CHECK(hour_of_week(parse_hour_timestamp("2017-05-06T23:00:00Z")) == 167);  // Saturday night
    CHECK(hour_of_week(parse_hour_timestamp("2017-05-07T23:00:00Z")) == 23);   // back to Sunday
    CHECK(hour_of_week(-3600) == 3 * 24 + 23);    // Wednesday late evening
}

TEST_CASE("hourly series validates its invariants") {
    CHECK_THROWS_AS(HourlySeries(0, {}), EmptyInput);
    CHECK_THROWS_AS(HourlySeries(1800, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(HourlySeries(0, {1.0, std::nan("")}), std::invalid_argument);

    HourlySeries s(7200, {1.0, 2.0, 3.0});
    CHECK(s.size() == 3);
    CHECK(s.timestamp_at(0) == 7200);
    CHECK(s.timestamp_at(2) == 7200 + 2 * 3600);
}

TEST_CASE("quartiles interpolate between order statistics") {
    // eleven points: positions 3.5 and 8.5 of the sorted sample
    std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    Quartiles q = quartiles(v);
    CHECK(q.q1 == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(q.q3 == doctest::Approx(8.5).epsilon(1e-12));
    CHECK(q.iqr() == doctest::Approx(5.0).epsilon(1e-12));

    Quartiles q4 = quartiles({4, 2, 1, 3});  // order must not matter
    CHECK(q4.q1 == doctest::Approx(1.75).epsilon(1e-12));
    CHECK(q4.q3 == doctest::Approx(3.25).epsilon(1e-12));

    Quartiles q2 = quartiles({10, 20});
    CHECK(q2.q1 == doctest::Approx(12.5).epsilon(1e-12));
    CHECK(q2.q3 == doctest::Approx(17.5).epsilon(1e-12));

    CHECK_THROWS_AS(quartiles({1.0}), TooFewPoints);
    CHECK_THROWS_AS(quartiles({}), TooFewPoints);
}

TEST_CASE("quantile and median agree with hand-computed values") {
    std::vector<double> sorted{1, 2, 3, 4};
    CHECK(quantile_sorted(sorted, 0.0) == 1.0);
    CHECK(quantile_sorted(sorted, 1.0) == 4.0);
    CHECK(quantile_sorted(sorted, 0.5) == doctest::Approx(2.5));
    CHECK(quantile_sorted({42.0}, 0.3) == 42.0);
    CHECK_THROWS_AS(quantile_sorted({}, 0.5), TooFewPoints);

    CHECK(median({3, 1, 2}) == 2.0);
    CHECK(median({4, 1, 3, 2}) == doctest::Approx(2.5));
    CHECK_THROWS_AS(median({}), TooFewPoints);
}

TEST_CASE("asinh transform matches its closed form") {
    CHECK(asinh_transform(0.0) == 0.0);
    CHECK(asinh_transform(1.0) == doctest::Approx(0.881374).epsilon(1e-6));
    CHECK(asinh_transform(-1.0) == doctest::Approx(-0.881374).epsilon(1e-6));
    // log(x + sqrt(x^2 + 1)) for a couple of points
    for (double x : {0.5, 3.0, 250.0}) {
        CHECK(asinh_transform(x) ==
              doctest::Approx(std::log(x + std::sqrt(x * x + 1.0))).epsilon(1e-12));
    }
    auto v = asinh_transform(std::vector<double>{0.0, 1.0, -2.0});
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 0.0);
    CHECK(v[2] == doctest::Approx(-std::asinh(2.0)));
}

TEST_CASE("conversion rate defines zero sessions as zero") {
    CHECK(conversion_rate(5.0, 100.0) == doctest::Approx(0.05));
    CHECK(conversion_rate(3.0, 0.0) == 0.0);
    CHECK(conversion_rate(0.0, 0.0) == 0.0);
}

TEST_CASE("ecom series derives conversion and surfaces oddities as warnings") {
    EcomSeries e = make_ecom_series(0, {100, 0, 10}, {5, 2, 15},
                                    std::vector<double>{125, 50, 375});
    REQUIRE(e.size() == 3);
    CHECK(e.conversion[0] == doctest::Approx(0.05));
    CHECK(e.conversion[1] == 0.0);   // transactions without sessions
    CHECK(e.conversion[2] == 1.5);   // above 1 is kept, only warned about
    REQUIRE(e.warnings.size() == 2);
    CHECK(e.warnings[0].find("row 1") != std::string::npos);
    CHECK(e.warnings[1].find("row 2") != std::string::npos);

    CHECK_THROWS_AS(make_ecom_series(0, {}, {}), EmptyInput);
    CHECK_THROWS_AS(make_ecom_series(0, {1, 2}, {1}), LengthMismatch);
    CHECK_THROWS_AS(make_ecom_series(0, {1}, {1}, std::vector<double>{1, 2}), LengthMismatch);
    CHECK_THROWS_AS(make_ecom_series(0, {-1}, {0}), NegativeCount);
    CHECK_THROWS_AS(make_ecom_series(0, {1}, {-2}), NegativeCount);
    CHECK_THROWS_AS(make_ecom_series(0, {1}, {0}, std::vector<double>{-1}), NegativeCount);
}
