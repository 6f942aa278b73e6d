#include <doctest.h>

#include "support/oracles.hpp"
#include "vitalband/errors.hpp"
#include "vitalband/quality.hpp"
#include "vitalband/synth.hpp"

using namespace vitalband;

namespace {

PatientRecord one_signal_record(const SignalId& id, std::vector<Sample> samples,
                                std::int64_t start, std::int64_t end) {
    PatientRecord record;
    record.meta.patient_id = "t";
    record.meta.admission_start = start;
    record.meta.admission_end = end;
    record.series[id] = std::move(samples);
    return record;
}

bool contains_sample(const PatientRecord& record, const SignalId& id, std::int64_t t) {
    const auto* samples = record.find(id);
    if (!samples) return false;
    for (const Sample& s : *samples)
        if (s.timestamp == t) return true;
    return false;
}

} // namespace

TEST_CASE("admission crop keeps the closed interval") {
    const SignalId hr(SignalId::Core::HR);
    PatientRecord record = one_signal_record(
        hr, {{100, 70, 90}, {200, 71, 90}, {201, 72, 90}}, 100, 200);
    const PatientRecord cropped = crop_to_admission(record);
    CHECK(contains_sample(cropped, hr, 100)); // at admission start: retained
    CHECK(contains_sample(cropped, hr, 200)); // at admission end: retained
    CHECK(!contains_sample(cropped, hr, 201)); // one second past: dropped
}

TEST_CASE("recording past discharge shrinks to the admission window") {
    PatientProfile profile;
    profile.kind = ProfileKind::complication;
    profile.patient_id = "post";
    profile.seed = 5;
    profile.duration_days = 6;
    profile.aspiration_day = 3;
    profile.extra_recorded_days = 2.0;
    const SyntheticPatient patient = generate_patient(profile);

    const auto* hr_raw = patient.record.find(SignalId(SignalId::Core::HR));
    REQUIRE(hr_raw != nullptr);
    const double recorded_raw = static_cast<double>(hr_raw->size()) / 86400.0;
    CHECK(recorded_raw > patient.record.meta.admitted_days());

    const PatientRecord cropped = crop_to_admission(patient.record);
    const auto* hr_cropped = cropped.find(SignalId(SignalId::Core::HR));
    REQUIRE(hr_cropped != nullptr);
    CHECK(static_cast<double>(hr_cropped->size()) / 86400.0 <=
          patient.record.meta.admitted_days());
    for (const Sample& s : *hr_cropped) {
        CHECK(s.timestamp >= cropped.meta.admission_start);
        CHECK(s.timestamp <= cropped.meta.admission_end);
    }
}

TEST_CASE("HR-presence mask removes orphaned seconds") {
    const SignalId hr(SignalId::Core::HR);
    const SignalId rr(SignalId::Core::RR);
    const SignalId spo2(SignalId::Core::SPO2);
    PatientRecord record;
    record.meta.admission_start = 0;
    record.meta.admission_end = 100;
    record.series[hr] = {{10, 70, 90}};
    record.series[rr] = {{10, 18, 90}, {11, 18, 90}}; // no HR at t=11
    record.series[spo2] = {{10, 96, 90}};

    const PatientRecord masked = mask_by_heart_rate(record);
    CHECK(contains_sample(masked, rr, 10));
    CHECK(!contains_sample(masked, rr, 11));
    CHECK(contains_sample(masked, spo2, 10));
    CHECK(masked.find(hr)->size() == 1);
}

TEST_CASE("mask is the identity when HR covers every second") {
    const SignalId hr(SignalId::Core::HR);
    const SignalId temp(SignalId::Core::TEMP);
    PatientRecord record;
    record.meta.admission_end = 100;
    for (std::int64_t t = 0; t < 50; ++t) record.series[hr].push_back({t, 70, 90});
    for (std::int64_t t = 0; t < 50; ++t) record.series[temp].push_back({t, 36.8, kNoQuality});
    const PatientRecord masked = mask_by_heart_rate(record);
    CHECK(oracle::records_equal(masked, record));
}

TEST_CASE("quality threshold is a closed lower bound") {
    const SignalId hr(SignalId::Core::HR);
    const SignalId temp(SignalId::Core::TEMP);
    PatientRecord record;
    record.meta.admission_end = 100;
    record.series[hr] = {{1, 80, 49}, {2, 80, 50}};
    record.series[temp] = {{1, 36.8, kNoQuality}};
    const PatientRecord filtered = filter_by_quality(record, FilterConfig{});
    CHECK(!contains_sample(filtered, hr, 1)); // q=49: removed
    CHECK(contains_sample(filtered, hr, 2));  // q=50: retained
    CHECK(contains_sample(filtered, temp, 1)); // no quality channel: passes
}

TEST_CASE("threshold bounds are validated") {
    FilterConfig cfg;
    cfg.quality_threshold = 101;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.quality_threshold = -1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("quality summary means are per-signal arithmetic means") {
    const SignalId hr(SignalId::Core::HR);
    PatientRecord before = one_signal_record(hr, {{1, 70, 40}, {2, 70, 60}}, 0, 10);
    PatientRecord after = one_signal_record(hr, {{2, 70, 60}}, 0, 10);
    const QualitySummary summary = quality_summary(before, after);
    const auto rows = summary.rows();
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mean_before == 50.0);
    CHECK(rows[0].mean_after == 60.0);
    CHECK(rows[0].n_before == 2);
    CHECK(rows[0].n_after == 1);
}

TEST_CASE("all-perfect quality is unchanged by filtering") {
    const SignalId hr(SignalId::Core::HR);
    PatientRecord record = one_signal_record(hr, {{1, 70, 100}, {2, 70, 100}}, 0, 10);
    const PatientRecord filtered = apply_cascade(record, FilterConfig{});
    const QualitySummary summary = quality_summary(record, filtered);
    const auto rows = summary.rows();
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mean_before == 100.0);
    CHECK(rows[0].mean_after == 100.0);
}

TEST_CASE("signals without quality report n/a") {
    const SignalId temp(SignalId::Core::TEMP);
    PatientRecord record = one_signal_record(temp, {{1, 36.8, kNoQuality}}, 0, 10);
    const QualitySummary summary = quality_summary(record, record);
    const auto rows = summary.rows();
    REQUIRE(rows.size() == 1);
    CHECK(!rows[0].mean_before.has_value());
    CHECK(summary.to_csv().find("n/a") != std::string::npos);
}

TEST_CASE("after-filter means clear the threshold on a generated cohort") {
    for (const SyntheticPatient& patient : generate_cohort(10, CohortMix{}, 777)) {
        const PatientRecord filtered = apply_cascade(patient.record, FilterConfig{});
        for (const auto& row : quality_summary(patient.record, filtered).rows()) {
            if (row.mean_after) CHECK(*row.mean_after >= 50.0);
        }
    }
}

TEST_CASE("cascade is a monotone shrink and idempotent on random records") {
    SplitMix64 rng(987);
    const FilterConfig cfg;
    for (int trial = 0; trial < 50; ++trial) {
        const PatientRecord record = oracle::random_record(rng);
        const PatientRecord once = apply_cascade(record, cfg);

        // Every surviving sample exists in the input with identical fields.
        for (const auto& [id, samples] : once.series) {
            const auto* source = record.find(id);
            REQUIRE(source != nullptr);
            for (const Sample& s : samples) {
                bool found = false;
                for (const Sample& src : *source) {
                    if (src.timestamp == s.timestamp && src.value == s.value &&
                        src.quality == s.quality) {
                        found = true;
                        break;
                    }
                }
                CHECK(found);
            }
        }

        // Quantified mask postcondition over the final output.
        std::vector<std::int64_t> hr_seconds;
        if (const auto* hr = once.find(SignalId(SignalId::Core::HR)))
            for (const Sample& s : *hr) hr_seconds.push_back(s.timestamp);
        for (const auto& [id, samples] : once.series) {
            if (id == SignalId(SignalId::Core::HR)) continue;
            for (const Sample& s : samples) {
                CHECK(std::binary_search(hr_seconds.begin(), hr_seconds.end(), s.timestamp));
            }
        }

        // Threshold postcondition.
        for (const auto& [id, samples] : once.series)
            for (const Sample& s : samples)
                if (s.quality != kNoQuality) CHECK(s.quality >= cfg.quality_threshold);

        // Idempotence, exactly.
        CHECK(oracle::records_equal(apply_cascade(once, cfg), once));
    }
}
