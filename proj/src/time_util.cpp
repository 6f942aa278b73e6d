#include "vitalband/time_util.hpp"

#include <charconv>
#include <cstdio>

#include "vitalband/text.hpp"

namespace vitalband {

// Proleptic Gregorian day arithmetic (Howard Hinnant's algorithms).
std::int64_t days_from_civil(int y, unsigned m, unsigned d) noexcept {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) noexcept {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return {static_cast<int>(y + (m <= 2)), m, d};
}

CivilTime civil_from_epoch(std::int64_t secs) noexcept {
    const std::int64_t days = floor_div(secs, kSecondsPerDay);
    const std::int64_t sod = secs - days * kSecondsPerDay;
    CivilTime ct;
    ct.date = civil_from_days(days);
    ct.hour = static_cast<unsigned>(sod / 3600);
    ct.minute = static_cast<unsigned>((sod % 3600) / 60);
    ct.second = static_cast<unsigned>(sod % 60);
    return ct;
}

std::int64_t epoch_from_civil(const CivilTime& ct) noexcept {
    return days_from_civil(ct.date.year, ct.date.month, ct.date.day) * kSecondsPerDay +
           ct.hour * 3600 + ct.minute * 60 + ct.second;
}

namespace {

bool parse_uint_field(std::string_view s, std::size_t pos, std::size_t len, unsigned& out) {
    if (pos + len > s.size()) return false;
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, value);
    if (ec != std::errc() || ptr != s.data() + pos + len) return false;
    out = value;
    return true;
}

} // namespace

std::optional<std::int32_t> parse_utc_offset(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    if (text == "Z" || text == "z") return 0;
    if (text[0] == '+' || text[0] == '-') {
        const int sign = text[0] == '-' ? -1 : 1;
        std::string_view rest = text.substr(1);
        unsigned hh = 0, mm = 0;
        if (rest.size() == 5 && rest[2] == ':' && parse_uint_field(rest, 0, 2, hh) &&
            parse_uint_field(rest, 3, 2, mm)) {
            // +HH:MM
        } else if (rest.size() == 4 && parse_uint_field(rest, 0, 2, hh) &&
                   parse_uint_field(rest, 2, 2, mm)) {
            // +HHMM
        } else if (auto minutes = parse_int(text)) {
            if (*minutes < -14 * 60 || *minutes > 14 * 60) return std::nullopt;
            return static_cast<std::int32_t>(*minutes * 60);
        } else {
            return std::nullopt;
        }
        if (hh > 14 || mm > 59) return std::nullopt;
        return sign * static_cast<std::int32_t>(hh * 3600 + mm * 60);
    }
    if (auto minutes = parse_int(text)) {
        if (*minutes < -14 * 60 || *minutes > 14 * 60) return std::nullopt;
        return static_cast<std::int32_t>(*minutes * 60);
    }
    return std::nullopt;
}

std::optional<std::int64_t> parse_timestamp(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;

    // Fast path: plain epoch seconds.
    if (text.find_first_not_of("+-0123456789") == std::string_view::npos &&
        text.find('-', 1) == std::string_view::npos) {
        return parse_int(text);
    }

    // YYYY-MM-DD[ T]HH:MM:SS with optional offset suffix.
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    unsigned month = 0, day = 0;
    int year = 0;
    {
        int value = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + 4, value);
        if (ec != std::errc() || ptr != text.data() + 4) return std::nullopt;
        year = value;
    }
    if (!parse_uint_field(text, 5, 2, month) || !parse_uint_field(text, 8, 2, day))
        return std::nullopt;
    if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;

    CivilTime ct;
    ct.date = {year, month, day};
    std::string_view rest = text.substr(10);
    if (!rest.empty()) {
        if (rest[0] != 'T' && rest[0] != ' ') return std::nullopt;
        rest.remove_prefix(1);
        if (rest.size() < 8 || rest[2] != ':' || rest[5] != ':') return std::nullopt;
        unsigned hh = 0, mm = 0, ss = 0;
        if (!parse_uint_field(rest, 0, 2, hh) || !parse_uint_field(rest, 3, 2, mm) ||
            !parse_uint_field(rest, 6, 2, ss))
            return std::nullopt;
        if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
        ct.hour = hh;
        ct.minute = mm;
        ct.second = ss;
        rest.remove_prefix(8);
        if (!rest.empty()) {
            auto offset = parse_utc_offset(rest);
            if (!offset) return std::nullopt;
            return epoch_from_civil(ct) - *offset;
        }
    }
    return epoch_from_civil(ct);
}

std::string format_iso8601(std::int64_t epoch_seconds) {
    const CivilTime ct = civil_from_epoch(epoch_seconds);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02u:%02u:%02uZ", ct.date.year,
                  ct.date.month, ct.date.day, ct.hour, ct.minute, ct.second);
    return buf;
}

std::string format_date(std::int64_t epoch_seconds) {
    const CivilTime ct = civil_from_epoch(epoch_seconds);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", ct.date.year, ct.date.month, ct.date.day);
    return buf;
}

std::string format_hhmm(unsigned hour_of_day) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02u:00", hour_of_day);
    return buf;
}

} // namespace vitalband
