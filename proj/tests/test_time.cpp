#include <doctest.h>

#include "vitalband/time_util.hpp"

using namespace vitalband;

TEST_CASE("civil date round trips") {
    CHECK(days_from_civil(1970, 1, 1) == 0);
    CHECK(days_from_civil(2020, 3, 1) == 18322);
    const CivilDate d = civil_from_days(18322);
    CHECK(d.year == 2020);
    CHECK(d.month == 3);
    CHECK(d.day == 1);
    for (std::int64_t z : {-1000L, 0L, 12345L, 18322L, 30000L}) {
        const CivilDate c = civil_from_days(z);
        CHECK(days_from_civil(c.year, c.month, c.day) == z);
    }
}

TEST_CASE("timestamp parsing accepts epoch and ISO forms") {
    CHECK(parse_timestamp("1583020800") == 1583020800);
    CHECK(parse_timestamp("2020-03-01") == 1583020800);
    CHECK(parse_timestamp("2020-03-01T00:00:00") == 1583020800);
    CHECK(parse_timestamp("2020-03-01 00:00:00") == 1583020800);
    CHECK(parse_timestamp("2020-03-01T00:00:00Z") == 1583020800);
    CHECK(parse_timestamp("2020-03-01T01:00:00+01:00") == 1583020800);
    CHECK(parse_timestamp("2020-02-29T23:00:00-01:00") == 1583020800);
    CHECK(!parse_timestamp("not a time"));
    CHECK(!parse_timestamp("2020-13-01"));
    CHECK(!parse_timestamp(""));
}

TEST_CASE("utc offset forms") {
    CHECK(parse_utc_offset("Z") == 0);
    CHECK(parse_utc_offset("+01:00") == 3600);
    CHECK(parse_utc_offset("-05:30") == -(5 * 3600 + 30 * 60));
    CHECK(parse_utc_offset("+0200") == 7200);
    CHECK(parse_utc_offset("90") == 5400);
    CHECK(parse_utc_offset("-60") == -3600);
    CHECK(!parse_utc_offset("+25:00"));
    CHECK(!parse_utc_offset("abc"));
}

TEST_CASE("local hour bucketing follows the clock offset") {
    const std::int64_t t = 1583020800; // 2020-03-01T00:00:00Z
    CHECK(local_hour_index(t, 0) == t / 3600);
    CHECK(local_hour_index(t, 3600) == t / 3600 + 1);
    CHECK(local_hour_index(t - 1, 0) == t / 3600 - 1);
    CHECK(hour_of_day(local_hour_index(t, 0)) == 0);
    CHECK(hour_of_day(local_hour_index(t, 3600)) == 1);
    CHECK(format_iso8601(t) == "2020-03-01T00:00:00Z");
    CHECK(format_date(t) == "2020-03-01");
    CHECK(format_hhmm(7) == "07:00");
}

TEST_CASE("floor division for negative values") {
    CHECK(floor_div(-1, 3600) == -1);
    CHECK(floor_div(0, 3600) == 0);
    CHECK(floor_div(3599, 3600) == 0);
    CHECK(floor_mod(-1, 3600) == 3599);
}
