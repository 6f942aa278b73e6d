#include <doctest.h>

#include <algorithm>
#include <random>

#include "support/oracles.hpp"
#include "vitalband/aggregate.hpp"
#include "vitalband/errors.hpp"
#include "vitalband/ingest.hpp"
#include "vitalband/quality.hpp"
#include "vitalband/synth.hpp"

using namespace vitalband;

namespace {

HourlySeries series_of(std::vector<std::optional<double>> values) {
    HourlySeries s;
    s.signal = SignalId(SignalId::Core::HR);
    s.values = std::move(values);
    s.counts.assign(s.values.size(), 1);
    return s;
}

PatientRecord record_with(const SignalId& id, const std::vector<Sample>& samples) {
    PatientRecord record;
    record.meta.patient_id = "agg";
    record.meta.admission_start = 0;
    record.meta.admission_end = 1 << 30;
    record.series[id] = samples;
    return record;
}

} // namespace

TEST_CASE("an hour of constant samples averages to the constant") {
    std::vector<Sample> samples;
    for (int s = 0; s < 3600; ++s) samples.push_back({3600 * 10 + s, 72.0, kNoQuality});
    const HourlyGrid grid = hourly_mean(record_with(SignalId(SignalId::Core::HR), samples), 0);
    CHECK(grid.hours == 1);
    CHECK(grid.series.at(SignalId(SignalId::Core::HR)).values[0] == 72.0);
    CHECK(grid.series.at(SignalId(SignalId::Core::HR)).counts[0] == 3600);
}

TEST_CASE("two samples in one hour take their midpoint") {
    const HourlyGrid grid = hourly_mean(
        record_with(SignalId(SignalId::Core::HR), {{100, 60.0, kNoQuality}, {200, 80.0, kNoQuality}}),
        0);
    CHECK(grid.series.at(SignalId(SignalId::Core::HR)).values[0] == 70.0);
}

TEST_CASE("gap hours stay on the grid as missing") {
    const SignalId hr(SignalId::Core::HR);
    const HourlyGrid grid =
        hourly_mean(record_with(hr, {{0, 70.0, kNoQuality}, {2 * 3600, 71.0, kNoQuality}}), 0);
    REQUIRE(grid.hours == 3);
    CHECK(grid.series.at(hr).values[0].has_value());
    CHECK(!grid.series.at(hr).values[1].has_value());
    CHECK(grid.series.at(hr).values[2].has_value());
}

TEST_CASE("the grid spans the union of all signals") {
    const SignalId hr(SignalId::Core::HR);
    const SignalId rr(SignalId::Core::RR);
    PatientRecord record = record_with(hr, {{0, 70.0, kNoQuality}});
    record.series[rr] = {{5 * 3600, 18.0, kNoQuality}};
    const HourlyGrid grid = hourly_mean(record, 0);
    CHECK(grid.hours == 6);
    for (const SignalId& id : core_signals()) {
        CHECK(grid.series.at(id).values.size() == 6); // all bands share one axis
    }
}

TEST_CASE("empty record yields an empty grid with core bands") {
    const HourlyGrid grid = hourly_mean(PatientRecord{}, 0);
    CHECK(grid.empty());
    CHECK(grid.series.size() == core_signals().size());
}

TEST_CASE("baseline and range come from present hourly values") {
    HourlySeries s = series_of({60.0, 70.0, 80.0});
    REQUIRE(compute_baseline_and_range(s, RangeConfig{}));
    CHECK(s.baseline == 70.0);
    CHECK(s.vmin == 60.0);
    CHECK(s.vmax == 80.0);
    CHECK(s.range_defined);
}

TEST_CASE("a singleton series degenerates to a point range") {
    HourlySeries s = series_of({36.5});
    std::vector<Diagnostic> warnings;
    REQUIRE(compute_baseline_and_range(s, RangeConfig{}, &warnings));
    CHECK(s.baseline == 36.5);
    CHECK(s.vmin == 36.5);
    CHECK(s.vmax == 36.5);
    CHECK(warnings.size() == 1); // degenerate range warning
}

TEST_CASE("overrides replace computed values") {
    HourlySeries s = series_of({94.0, 95.0, 97.0});
    s.signal = SignalId(SignalId::Core::SPO2);
    RangeConfig cfg;
    cfg.overrides[s.signal] = {90.0, 100.0, 96.0, Direction::low_alarming};
    REQUIRE(compute_baseline_and_range(s, cfg));
    CHECK(s.vmin == 90.0);
    CHECK(s.vmax == 100.0);
    CHECK(s.baseline == 96.0);
    CHECK(s.direction == Direction::low_alarming);
}

TEST_CASE("an all-missing series without overrides has no range") {
    HourlySeries s = series_of({std::nullopt, std::nullopt});
    std::vector<Diagnostic> warnings;
    CHECK(!compute_baseline_and_range(s, RangeConfig{}, &warnings));
    CHECK(!s.range_defined);
    CHECK(warnings.size() == 1);

    // Full overrides make it renderable anyway.
    RangeConfig cfg;
    cfg.overrides[s.signal] = {60.0, 100.0, 70.0, std::nullopt};
    CHECK(compute_baseline_and_range(s, cfg));
}

TEST_CASE("bad range overrides are rejected") {
    RangeConfig cfg;
    cfg.overrides[SignalId(SignalId::Core::HR)] = {100.0, 90.0, std::nullopt, std::nullopt};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("moving average over a constant series is the constant") {
    const auto ma = moving_average(series_of({70.0, 70.0, 70.0, 70.0, 70.0}), 4);
    for (const auto& v : ma) CHECK(v == 70.0);
}

TEST_CASE("trailing four-hour window at the fourth hour") {
    const auto ma = moving_average(series_of({10.0, 20.0, 30.0, 40.0}), 4);
    CHECK(ma[3] == 25.0);
    CHECK(ma[0] == 10.0); // partial window at the start
    CHECK(ma[1] == 15.0);
}

TEST_CASE("missing hours are excluded from the window mean") {
    const auto ma = moving_average(series_of({10.0, std::nullopt, 30.0}), 4);
    CHECK(ma[2] == 20.0);
    const auto all_missing =
        moving_average(series_of({std::nullopt, std::nullopt, std::nullopt}), 4);
    for (const auto& v : all_missing) CHECK(!v.has_value());
    CHECK_THROWS_AS(moving_average(series_of({1.0}), 0), RangeError);
}

TEST_CASE("day counts for an empty patient are zero") {
    PatientRecord raw;
    raw.meta.admission_start = 0;
    raw.meta.admission_end = 86400;
    const DayCounts days = data_day_counts(raw, raw, hourly_mean(raw, 0));
    CHECK(days.admitted == 1.0);
    CHECK(days.recorded == 0.0);
    CHECK(days.useful == 0.0);
}

TEST_CASE("48 fully populated filtered hours are two useful days") {
    const SignalId hr(SignalId::Core::HR);
    std::vector<Sample> samples;
    for (int h = 0; h < 48; ++h) samples.push_back({h * 3600, 70.0, 90});
    PatientRecord record = record_with(hr, samples);
    const HourlyGrid grid = hourly_mean(record, 0);
    const DayCounts days = data_day_counts(record, record, grid);
    CHECK(days.useful == 2.0);
    CHECK(days.recorded == 48.0 / 86400.0);
}

TEST_CASE("charging gaps keep useful below recorded below admitted") {
    PatientProfile profile;
    profile.patient_id = "gap";
    profile.seed = 9;
    profile.duration_days = 5.2;
    profile.dropout_rate = 0.1;
    const SyntheticPatient patient = generate_patient(profile);
    const PatientRecord cropped = crop_to_admission(patient.record);
    const PatientRecord filtered = apply_cascade(patient.record, FilterConfig{});
    const HourlyGrid grid = hourly_mean(filtered, 0);
    const DayCounts days = data_day_counts(patient.record, cropped, grid);
    CHECK(days.useful < days.recorded);
    CHECK(days.recorded <= days.admitted);
    CHECK(days.useful > 0);
}

TEST_CASE("hourly means match the brute-force oracle") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Sample> samples;
        std::int64_t t = 1583000000 + static_cast<std::int64_t>(rng.next() % 86400);
        const std::size_t n = 1000 + rng.next() % 20000;
        for (std::size_t i = 0; i < n; ++i) {
            t += 1 + static_cast<std::int64_t>(rng.next() % 900);
            samples.push_back({t, rng.uniform(-10, 150), kNoQuality});
        }
        const std::int32_t tz = static_cast<std::int32_t>(rng.uniform_int(-12, 12)) * 3600;
        const PatientRecord record = record_with(SignalId(SignalId::Core::HR), samples);
        const HourlyGrid grid = hourly_mean(record, tz);
        const auto expected = oracle::hourly_mean_map(samples, tz);
        const HourlySeries& series = grid.series.at(SignalId(SignalId::Core::HR));

        std::size_t present = 0;
        for (std::size_t i = 0; i < grid.hours; ++i) {
            const std::int64_t hour = grid.start_hour + static_cast<std::int64_t>(i);
            const auto it = expected.find(hour);
            if (series.values[i]) {
                ++present;
                REQUIRE(it != expected.end());
                CHECK(oracle::close_rel(*series.values[i], it->second));
            } else {
                CHECK(it == expected.end());
            }
        }
        CHECK(present == expected.size());
    }
}

TEST_CASE("aggregation is invariant under input sample order") {
    SplitMix64 rng(67);
    std::vector<VitalSample> samples;
    for (int i = 0; i < 5000; ++i)
        samples.push_back({1583000000 + i * 3, SignalId(SignalId::Core::HRV),
                           rng.uniform(10, 60), kNoQuality});
    std::vector<VitalSample> shuffled = samples;
    std::mt19937 shuffle_rng(1234);
    std::shuffle(shuffled.begin(), shuffled.end(), shuffle_rng);

    PatientMeta meta{"perm", 0, 1 << 30, {}, Sex::unknown};
    const HourlyGrid a = hourly_mean(build_record(meta, samples).record, 0);
    const HourlyGrid b = hourly_mean(build_record(meta, shuffled).record, 0);
    const auto& va = a.series.at(SignalId(SignalId::Core::HRV)).values;
    const auto& vb = b.series.at(SignalId(SignalId::Core::HRV)).values;
    CHECK(va == vb);
}
