#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vitalband/types.hpp"

namespace vitalband {

enum class Direction : std::uint8_t { low_alarming, high_alarming, bidirectional };

std::string_view direction_name(Direction d);
std::optional<Direction> parse_direction(std::string_view s);
Direction default_direction(const SignalId& id);

// Hour-aligned means on a gap-free grid; a missing hour is an explicit
// nullopt, never a hole.
struct HourlySeries {
    SignalId signal;
    std::int64_t start_hour = 0; // local hour index of values.front()
    std::vector<std::optional<double>> values;
    std::vector<std::int64_t> counts; // contributing 1 Hz samples per hour

    // Set by compute_baseline_and_range.
    double baseline = 0;
    double vmin = 0;
    double vmax = 0;
    Direction direction = Direction::bidirectional;
    bool range_defined = false;

    std::size_t hours() const { return values.size(); }
    std::size_t present_count() const;
};

// All series share one time axis spanning the union of the record's signals.
// Core signals are always present (possibly all-missing bands).
struct HourlyGrid {
    std::int64_t start_hour = 0;
    std::size_t hours = 0;
    std::int32_t utc_offset_seconds = 0;
    std::map<SignalId, HourlySeries> series;

    bool empty() const { return hours == 0; }
};

struct RangeOverride {
    std::optional<double> vmin;
    std::optional<double> vmax;
    std::optional<double> baseline;
    std::optional<Direction> direction;
};

struct RangeConfig {
    std::map<SignalId, RangeOverride> overrides;

    const RangeOverride* find(const SignalId& id) const;
    void validate() const; // throws ConfigError when vmin >= vmax
};

// Buckets by local-time hour floor. Empty record -> empty grid.
HourlyGrid hourly_mean(const PatientRecord& record, std::int32_t utc_offset_seconds = 0);

// Baseline = mean of present hourly values, vmin/vmax their min/max; any of
// the three is replaced by an override. Returns false (range_defined stays
// false) for an all-missing series without complete overrides; the caller
// renders such a band as all-grey.
bool compute_baseline_and_range(HourlySeries& series, const RangeConfig& cfg,
                                std::vector<Diagnostic>* warnings = nullptr);

void annotate_grid(HourlyGrid& grid, const RangeConfig& cfg,
                   std::vector<Diagnostic>* warnings = nullptr);

// Trailing window including the current hour; mean over present values only,
// nullopt when the whole window is missing.
std::vector<std::optional<double>> moving_average(const HourlySeries& series,
                                                  int window_hours = 4);

struct DayCounts {
    double admitted = 0;
    double recorded = 0;              // HR-bearing seconds in the raw record / 86400
    double recorded_in_admission = 0; // same, after cropping
    double useful = 0;                // hours with any present core value / 24
};

DayCounts data_day_counts(const PatientRecord& raw, const PatientRecord& cropped,
                          const HourlyGrid& filtered);

// hour_start,signal,mean,count with literal NAN for missing hours.
std::string hourly_grid_csv(const HourlyGrid& grid);

} // namespace vitalband
