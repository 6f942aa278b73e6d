#include "vitalband/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vitalband/errors.hpp"
#include "vitalband/text.hpp"
#include "vitalband/time_util.hpp"

namespace vitalband {

std::string_view direction_name(Direction d) {
    switch (d) {
        case Direction::low_alarming: return "low_alarming";
        case Direction::high_alarming: return "high_alarming";
        case Direction::bidirectional: return "bidirectional";
    }
    return "bidirectional";
}

std::optional<Direction> parse_direction(std::string_view s) {
    if (iequals(s, "low_alarming")) return Direction::low_alarming;
    if (iequals(s, "high_alarming")) return Direction::high_alarming;
    if (iequals(s, "bidirectional")) return Direction::bidirectional;
    return std::nullopt;
}

Direction default_direction(const SignalId& id) {
    if (id.core()) {
        switch (*id.core()) {
            case SignalId::Core::HRV:
            case SignalId::Core::SPO2: return Direction::low_alarming;
            default: break;
        }
    }
    return Direction::bidirectional;
}

std::size_t HourlySeries::present_count() const {
    std::size_t n = 0;
    for (const auto& v : values)
        if (v) ++n;
    return n;
}

const RangeOverride* RangeConfig::find(const SignalId& id) const {
    auto it = overrides.find(id);
    return it == overrides.end() ? nullptr : &it->second;
}

void RangeConfig::validate() const {
    for (const auto& [id, ov] : overrides) {
        if (ov.vmin && ov.vmax && *ov.vmin >= *ov.vmax)
            throw ConfigError("range override for " + id.name() + ": vmin must be below vmax");
        if (ov.baseline) {
            if (ov.vmin && *ov.baseline < *ov.vmin)
                throw ConfigError("range override for " + id.name() + ": baseline below vmin");
            if (ov.vmax && *ov.baseline > *ov.vmax)
                throw ConfigError("range override for " + id.name() + ": baseline above vmax");
        }
    }
}

HourlyGrid hourly_mean(const PatientRecord& record, std::int32_t utc_offset_seconds) {
    HourlyGrid grid;
    grid.utc_offset_seconds = utc_offset_seconds;

    std::int64_t first_hour = std::numeric_limits<std::int64_t>::max();
    std::int64_t last_hour = std::numeric_limits<std::int64_t>::min();
    for (const auto& [id, samples] : record.series) {
        if (samples.empty()) continue;
        first_hour = std::min(first_hour, local_hour_index(samples.front().timestamp, utc_offset_seconds));
        last_hour = std::max(last_hour, local_hour_index(samples.back().timestamp, utc_offset_seconds));
    }
    if (first_hour > last_hour) {
        // Empty record: an empty grid still carries all-missing core bands.
        for (const SignalId& id : core_signals()) {
            HourlySeries series;
            series.signal = id;
            series.direction = default_direction(id);
            grid.series.emplace(id, std::move(series));
        }
        return grid;
    }

    grid.start_hour = first_hour;
    grid.hours = static_cast<std::size_t>(last_hour - first_hour + 1);

    auto make_series = [&](const SignalId& id) {
        HourlySeries series;
        series.signal = id;
        series.start_hour = grid.start_hour;
        series.values.assign(grid.hours, std::nullopt);
        series.counts.assign(grid.hours, 0);
        series.direction = default_direction(id);
        return series;
    };

    for (const SignalId& id : core_signals()) grid.series.emplace(id, make_series(id));

    for (const auto& [id, samples] : record.series) {
        auto it = grid.series.find(id);
        if (it == grid.series.end()) it = grid.series.emplace(id, make_series(id)).first;
        HourlySeries& series = it->second;
        std::vector<double> sums(grid.hours, 0.0);
        for (const Sample& s : samples) {
            const std::size_t idx = static_cast<std::size_t>(
                local_hour_index(s.timestamp, utc_offset_seconds) - grid.start_hour);
            sums[idx] += s.value;
            ++series.counts[idx];
        }
        for (std::size_t i = 0; i < grid.hours; ++i) {
            if (series.counts[i] > 0)
                series.values[i] = sums[i] / static_cast<double>(series.counts[i]);
        }
    }
    return grid;
}

bool compute_baseline_and_range(HourlySeries& series, const RangeConfig& cfg,
                                std::vector<Diagnostic>* warnings) {
    const RangeOverride* ov = cfg.find(series.signal);
    if (ov && ov->direction) series.direction = *ov->direction;

    double sum = 0;
    std::size_t n = 0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& v : series.values) {
        if (!v) continue;
        sum += *v;
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
        ++n;
    }

    const bool have_data = n > 0;
    const bool vmin_ok = (ov && ov->vmin) || have_data;
    const bool vmax_ok = (ov && ov->vmax) || have_data;
    const bool baseline_ok = (ov && ov->baseline) || have_data;
    if (!vmin_ok || !vmax_ok || !baseline_ok) {
        if (warnings)
            warnings->push_back(
                {0, series.signal.name() + ": undefined range (no values, no overrides)"});
        series.range_defined = false;
        return false;
    }

    series.vmin = (ov && ov->vmin) ? *ov->vmin : lo;
    series.vmax = (ov && ov->vmax) ? *ov->vmax : hi;
    series.baseline = (ov && ov->baseline) ? *ov->baseline : sum / static_cast<double>(n);
    // Manual vmin/vmax may sit inside the observed span; the baseline is
    // clamped so the diverging normalization stays well formed.
    series.baseline = std::clamp(series.baseline, series.vmin, series.vmax);
    series.range_defined = true;

    if (series.vmin == series.vmax && warnings)
        warnings->push_back({0, series.signal.name() + ": degenerate range (vmin == vmax), band "
                                                       "renders at the center color"});
    return true;
}

void annotate_grid(HourlyGrid& grid, const RangeConfig& cfg, std::vector<Diagnostic>* warnings) {
    for (auto& [id, series] : grid.series) compute_baseline_and_range(series, cfg, warnings);
}

std::vector<std::optional<double>> moving_average(const HourlySeries& series, int window_hours) {
    if (window_hours < 1) throw RangeError("moving average window must be >= 1 hour");
    std::vector<std::optional<double>> out(series.values.size());
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const std::size_t begin = i + 1 >= static_cast<std::size_t>(window_hours)
                                      ? i + 1 - static_cast<std::size_t>(window_hours)
                                      : 0;
        double sum = 0;
        int n = 0;
        for (std::size_t j = begin; j <= i; ++j) {
            if (series.values[j]) {
                sum += *series.values[j];
                ++n;
            }
        }
        if (n > 0) out[i] = sum / n;
    }
    return out;
}

namespace {

std::int64_t hr_second_count(const PatientRecord& record) {
    const std::vector<Sample>* hr = record.find(SignalId(SignalId::Core::HR));
    // One sample per (signal, second) by invariant, so size() is the count.
    return hr ? static_cast<std::int64_t>(hr->size()) : 0;
}

} // namespace

DayCounts data_day_counts(const PatientRecord& raw, const PatientRecord& cropped,
                          const HourlyGrid& filtered) {
    DayCounts days;
    days.admitted = raw.meta.admitted_days();
    days.recorded = static_cast<double>(hr_second_count(raw)) / 86400.0;
    days.recorded_in_admission = static_cast<double>(hr_second_count(cropped)) / 86400.0;

    std::int64_t useful_hours = 0;
    for (std::size_t i = 0; i < filtered.hours; ++i) {
        for (const SignalId& id : core_signals()) {
            auto it = filtered.series.find(id);
            if (it != filtered.series.end() && i < it->second.values.size() &&
                it->second.values[i]) {
                ++useful_hours;
                break;
            }
        }
    }
    days.useful = static_cast<double>(useful_hours) / 24.0;
    return days;
}

std::string hourly_grid_csv(const HourlyGrid& grid) {
    std::string out = "hour_start,signal,mean,count\n";
    for (const auto& [id, series] : grid.series) {
        for (std::size_t i = 0; i < series.values.size(); ++i) {
            const std::int64_t hour = grid.start_hour + static_cast<std::int64_t>(i);
            const std::int64_t utc = hour * kSecondsPerHour - grid.utc_offset_seconds;
            out += format_iso8601(utc);
            out += ',';
            out += id.name();
            out += ',';
            out += series.values[i] ? fmt_shortest(*series.values[i]) : "NAN";
            out += ',';
            out += std::to_string(series.counts[i]);
            out += '\n';
        }
    }
    return out;
}

} // namespace vitalband
