#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vitalband {

// Floor division/modulo that stay correct for negative timestamps.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
    std::int64_t q = a / b;
    std::int64_t r = a % b;
    return (r != 0 && (r < 0) != (b < 0)) ? q - 1 : q;
}

constexpr std::int64_t floor_mod(std::int64_t a, std::int64_t b) noexcept {
    return a - floor_div(a, b) * b;
}

struct CivilDate {
    int year = 1970;
    unsigned month = 1; // 1..12
    unsigned day = 1;   // 1..31
};

struct CivilTime {
    CivilDate date;
    unsigned hour = 0;
    unsigned minute = 0;
    unsigned second = 0;
};

std::int64_t days_from_civil(int year, unsigned month, unsigned day) noexcept;
CivilDate civil_from_days(std::int64_t days_since_epoch) noexcept;

CivilTime civil_from_epoch(std::int64_t epoch_seconds) noexcept;
std::int64_t epoch_from_civil(const CivilTime& ct) noexcept;

// Accepts plain epoch seconds, "YYYY-MM-DD", "YYYY-MM-DD HH:MM:SS" or
// "YYYY-MM-DDTHH:MM:SS", optionally suffixed with "Z" or "+HH:MM"/"-HH:MM".
std::optional<std::int64_t> parse_timestamp(std::string_view text);

// "Z", "+HH:MM", "-HH:MM", "+HHMM" or a signed integer number of minutes.
std::optional<std::int32_t> parse_utc_offset(std::string_view text);

std::string format_iso8601(std::int64_t epoch_seconds); // YYYY-MM-DDTHH:MM:SSZ
std::string format_date(std::int64_t epoch_seconds);    // YYYY-MM-DD
std::string format_hhmm(unsigned hour_of_day);          // "HH:00"

constexpr std::int64_t kSecondsPerHour = 3600;
constexpr std::int64_t kSecondsPerDay = 86400;

// Hour index since epoch after shifting into the patient's local clock.
constexpr std::int64_t local_hour_index(std::int64_t t, std::int32_t utc_offset_seconds) noexcept {
    return floor_div(t + utc_offset_seconds, kSecondsPerHour);
}

constexpr std::int64_t local_second_of_day(std::int64_t t, std::int32_t utc_offset_seconds) noexcept {
    return floor_mod(t + utc_offset_seconds, kSecondsPerDay);
}

// Calendar day index (since epoch) of a local hour index.
constexpr std::int64_t day_of_hour(std::int64_t hour_index) noexcept {
    return floor_div(hour_index, 24);
}

constexpr unsigned hour_of_day(std::int64_t hour_index) noexcept {
    return static_cast<unsigned>(floor_mod(hour_index, 24));
}

} // namespace vitalband
