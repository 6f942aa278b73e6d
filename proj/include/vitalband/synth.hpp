#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vitalband/types.hpp"

namespace vitalband {

// Pinned PRNG (SplitMix64, Steele et al. constants). The algorithm is part of
// the output contract: identical seeds must reproduce identical cohorts,
// byte for byte, across platforms and releases.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // [0,1) from the top 53 bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // Inclusive bounds.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

enum class ProfileKind : std::uint8_t { typical, complication, stress, zero_data };

std::string_view profile_kind_name(ProfileKind k);
std::optional<ProfileKind> parse_profile_kind(std::string_view s);

struct SignalLevel {
    double level = 0;
    double circadian_amplitude = 0; // 24 h sinusoid, nighttime trough at 04:00 local
    double noise_amplitude = 0;     // bounded uniform noise
    bool has_quality = true;
};

// HR 70 bpm (amplitude 8), HRV 30 ms, RR 16 br/min, SPO2 96%, Temp 36.8 C
// (no quality channel).
std::map<SignalId, SignalLevel> default_signal_levels();

struct PatientProfile {
    ProfileKind kind = ProfileKind::typical;
    std::string patient_id = "p001";
    std::uint64_t seed = 1;
    double duration_days = 7.0; // admission length
    std::int64_t admission_start = 1583052433; // 2020-03-01T08:47:13Z
    std::int32_t utc_offset_seconds = 0;

    // Daily device-off window; whole hours so the missing block lines up with
    // the hourly grid.
    int gap_start_hour = 8; // local clock
    int gap_duration_hours = 1;

    // Fraction of recorded hours placed in low-quality episodes (quality
    // drawn below the 50% threshold for all quality-bearing signals).
    double dropout_rate = 0.08;

    // stress kind only: day offset and local clock hour of the one-hour event.
    int stress_day = 5;
    int stress_hour = 14;
    double stress_hr_bump = 25.0; // bpm
    double stress_rr_bump = 8.0;  // br/min

    // complication kind only.
    int aspiration_day = 4;

    // Recording that continues past discharge (cropped away by the admission
    // filter but visible in raw recorded-day counts).
    double extra_recorded_days = 0.0;

    std::map<SignalId, SignalLevel> levels = default_signal_levels();

    void validate() const; // throws ConfigError for invalid schedules
};

// Everything the generator knows exactly, for oracle testing. Hourly means
// are accumulated sample-by-sample at generation time, independently of the
// aggregation pipeline.
struct GroundTruth {
    std::int64_t start_hour = 0; // local hour index
    std::size_t hours = 0;
    std::map<SignalId, std::vector<std::optional<double>>> hourly_means;
    std::vector<std::int64_t> gap_hours;     // absolute local hour indices
    std::vector<std::int64_t> dropout_hours; // hours with sub-threshold quality
    std::int64_t stress_hour = -1;           // absolute local hour index, -1 if none
    std::int64_t aspiration_hour = -1;

    bool is_clean_hour(std::int64_t hour) const; // neither gap nor dropout
};

std::string ground_truth_json(const GroundTruth& truth);

struct SyntheticPatient {
    PatientProfile profile;
    PatientRecord record;
    GroundTruth truth;
};

SyntheticPatient generate_patient(const PatientProfile& profile);

struct CohortMix {
    double typical = 0.55;
    double complication = 0.20;
    double stress = 0.15;
    double zero_data = 0.10;
};

// Deterministic cohort manifest: per-patient seeds split off the cohort seed,
// kind counts by floored proportions (every kind with positive weight gets at
// least one patient when n allows), durations drawn per patient.
std::vector<PatientProfile> cohort_profiles(int n, const CohortMix& mix, std::uint64_t seed,
                                            double max_duration_days = 14.0,
                                            std::int32_t utc_offset_seconds = 0);

std::vector<SyntheticPatient> generate_cohort(int n, const CohortMix& mix, std::uint64_t seed);

} // namespace vitalband
