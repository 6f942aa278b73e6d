#include "vitalband/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <nlohmann/json.hpp>

#include "vitalband/errors.hpp"
#include "vitalband/text.hpp"
#include "vitalband/time_util.hpp"

namespace vitalband {

std::string_view profile_kind_name(ProfileKind k) {
    switch (k) {
        case ProfileKind::typical: return "typical";
        case ProfileKind::complication: return "complication";
        case ProfileKind::stress: return "stress";
        case ProfileKind::zero_data: return "zero_data";
    }
    return "typical";
}

std::optional<ProfileKind> parse_profile_kind(std::string_view s) {
    for (ProfileKind k : {ProfileKind::typical, ProfileKind::complication, ProfileKind::stress,
                          ProfileKind::zero_data}) {
        if (iequals(s, profile_kind_name(k))) return k;
    }
    return std::nullopt;
}

std::map<SignalId, SignalLevel> default_signal_levels() {
    std::map<SignalId, SignalLevel> levels;
    levels[SignalId(SignalId::Core::HR)] = {70.0, 8.0, 2.0, true};
    levels[SignalId(SignalId::Core::HRV)] = {30.0, 4.0, 2.5, true};
    levels[SignalId(SignalId::Core::RR)] = {16.0, 2.0, 1.0, true};
    levels[SignalId(SignalId::Core::SPO2)] = {96.0, 1.0, 0.6, true};
    levels[SignalId(SignalId::Core::TEMP)] = {36.8, 0.3, 0.15, false};
    return levels;
}

void PatientProfile::validate() const {
    if (duration_days <= 0) throw ConfigError(patient_id + ": duration_days must be positive");
    if (gap_start_hour < 0 || gap_start_hour > 23)
        throw ConfigError(patient_id + ": gap_start_hour must be in [0,23]");
    if (gap_duration_hours < 0 || gap_duration_hours > 23)
        throw ConfigError(patient_id + ": gap_duration_hours must be in [0,23]");
    if (dropout_rate < 0 || dropout_rate >= 1)
        throw ConfigError(patient_id + ": dropout_rate must be in [0,1)");
    if (kind == ProfileKind::stress) {
        if (stress_day < 1 || static_cast<double>(stress_day) + 1 > duration_days)
            throw ConfigError(patient_id + ": stress event falls outside the admission window");
        if (stress_hour < 0 || stress_hour > 23)
            throw ConfigError(patient_id + ": stress_hour must be in [0,23]");
    }
    if (kind == ProfileKind::complication) {
        if (aspiration_day < 1 || static_cast<double>(aspiration_day) + 1 > duration_days)
            throw ConfigError(patient_id + ": aspiration event falls outside the admission window");
    }
    for (const SignalId& id : core_signals()) {
        if (!levels.count(id)) throw ConfigError(patient_id + ": missing level for " + id.name());
    }
}

bool GroundTruth::is_clean_hour(std::int64_t hour) const {
    return !std::binary_search(gap_hours.begin(), gap_hours.end(), hour) &&
           !std::binary_search(dropout_hours.begin(), dropout_hours.end(), hour);
}

namespace {

// Trapezoid in days: 0 before t0, rising to 1 at t1, holding to t2, back to 0
// at t3.
double trapezoid(double d, double t0, double t1, double t2, double t3) {
    if (d <= t0 || d >= t3) return 0;
    if (d < t1) return (d - t0) / (t1 - t0);
    if (d <= t2) return 1;
    return (t3 - d) / (t3 - t2);
}

double trend_value(const PatientProfile& p, SignalId::Core core, double d) {
    const double a = static_cast<double>(p.aspiration_day);
    switch (p.kind) {
        case ProfileKind::typical:
            switch (core) {
                case SignalId::Core::HR: return d < 7 ? -1.2 * d : -8.4 + 1.6 * (d - 7);
                case SignalId::Core::HRV: return d < 7 ? -1.1 * d : -7.7 + 1.4 * (d - 7);
                case SignalId::Core::RR: return std::max(0.0, 4.0 - 0.4 * d);
                case SignalId::Core::SPO2: return std::min(0.0, -2.0 + 0.25 * d);
                case SignalId::Core::TEMP: return std::max(0.0, 1.0 - 0.15 * d);
            }
            return 0;
        case ProfileKind::complication:
            switch (core) {
                case SignalId::Core::HR:
                    return -0.8 * std::min(d, a) + 22.0 * trapezoid(d, a, a + 0.4, a + 1.5, a + 4.5);
                case SignalId::Core::HRV:
                    return -1.0 * std::min(d, 7.0) - 8.0 * trapezoid(d, a, a + 0.4, a + 1.5, a + 4.5);
                case SignalId::Core::RR:
                    return std::max(0.0, 2.0 - 0.2 * d) +
                           7.0 * trapezoid(d, a, a + 0.3, a + 1.5, a + 4.0);
                case SignalId::Core::SPO2:
                    return std::min(0.0, -1.0 + 0.15 * d) -
                           3.0 * trapezoid(d, a, a + 0.5, a + 1.5, a + 4.0);
                case SignalId::Core::TEMP:
                    return std::max(0.0, 0.6 - 0.1 * d) +
                           0.9 * trapezoid(d, a + 0.2, a + 0.8, a + 2.0, a + 5.0);
            }
            return 0;
        case ProfileKind::stress:
            switch (core) {
                case SignalId::Core::HR: return 1.0 * d;
                case SignalId::Core::HRV: return std::min(0.0, -3.0 + 0.4 * d);
                case SignalId::Core::RR: return std::max(0.0, 1.5 - 0.15 * d);
                case SignalId::Core::SPO2: return std::min(0.0, -1.5 + 0.2 * d);
                case SignalId::Core::TEMP: return std::max(0.0, 0.8 - 0.12 * d);
            }
            return 0;
        case ProfileKind::zero_data: return 0;
    }
    return 0;
}

double event_bump(const PatientProfile& p, SignalId::Core core, std::int64_t hour,
                  std::int64_t stress_abs_hour) {
    if (p.kind != ProfileKind::stress || hour != stress_abs_hour) return 0;
    if (core == SignalId::Core::HR) return p.stress_hr_bump;
    if (core == SignalId::Core::RR) return p.stress_rr_bump;
    return 0;
}

} // namespace

SyntheticPatient generate_patient(const PatientProfile& profile) {
    profile.validate();

    SyntheticPatient out;
    out.profile = profile;
    out.record.meta.patient_id = profile.patient_id;
    out.record.meta.admission_start = profile.admission_start;
    out.record.meta.admission_end =
        profile.admission_start + static_cast<std::int64_t>(std::llround(profile.duration_days * 86400.0));

    if (profile.kind == ProfileKind::zero_data) return out;

    const std::int32_t tz = profile.utc_offset_seconds;
    // Recording is hour-aligned within the admission window, plus optional
    // whole post-discharge hours; hourly buckets are therefore either fully
    // covered or fully absent.
    const std::int64_t rec_start_hour =
        floor_div(out.record.meta.admission_start + tz + kSecondsPerHour - 1, kSecondsPerHour);
    const std::int64_t rec_end_admission =
        floor_div(out.record.meta.admission_end + tz, kSecondsPerHour);
    const std::int64_t extra_hours =
        static_cast<std::int64_t>(std::llround(profile.extra_recorded_days * 24.0));
    const std::int64_t rec_end_hour = rec_end_admission + extra_hours;
    if (rec_end_hour <= rec_start_hour) return out;

    const std::size_t hours = static_cast<std::size_t>(rec_end_hour - rec_start_hour);

    SplitMix64 root(profile.seed);
    SplitMix64 schedule(root.next());
    std::map<SignalId, std::uint64_t> signal_seeds;
    for (const SignalId& id : core_signals()) signal_seeds[id] = root.next();

    // Local calendar day of the admission start anchors event clock times.
    const std::int64_t day0 = floor_div(profile.admission_start + tz, kSecondsPerDay);
    std::int64_t stress_abs_hour = -1;
    if (profile.kind == ProfileKind::stress)
        stress_abs_hour = (day0 + profile.stress_day) * 24 + profile.stress_hour;
    std::int64_t aspiration_abs_hour = -1;
    if (profile.kind == ProfileKind::complication)
        aspiration_abs_hour = (day0 + profile.aspiration_day) * 24 + 12;

    // Daily charging gap, whole hours.
    std::vector<bool> is_gap(hours, false);
    for (std::int64_t day = day_of_hour(rec_start_hour); day <= day_of_hour(rec_end_hour); ++day) {
        for (int g = 0; g < profile.gap_duration_hours; ++g) {
            const std::int64_t h = day * 24 + profile.gap_start_hour + g;
            if (h >= rec_start_hour && h < rec_end_hour)
                is_gap[static_cast<std::size_t>(h - rec_start_hour)] = true;
        }
    }

    // Low-quality episodes: whole hours drawn without replacement from hours
    // that are neither gaps nor event hours.
    std::vector<std::int64_t> eligible;
    for (std::size_t i = 0; i < hours; ++i) {
        const std::int64_t h = rec_start_hour + static_cast<std::int64_t>(i);
        if (is_gap[i]) continue;
        if (stress_abs_hour >= 0 && std::llabs(h - stress_abs_hour) <= 2) continue;
        if (aspiration_abs_hour >= 0 && std::llabs(h - aspiration_abs_hour) <= 2) continue;
        eligible.push_back(h);
    }
    std::size_t dropout_count = static_cast<std::size_t>(
        std::llround(profile.dropout_rate * static_cast<double>(eligible.size())));
    dropout_count = std::min(dropout_count, eligible.size());
    for (std::size_t i = 0; i < dropout_count; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(schedule.next() % (eligible.size() - i));
        std::swap(eligible[i], eligible[j]);
    }
    std::vector<bool> is_dropout(hours, false);
    std::vector<std::int64_t> dropout_hours(eligible.begin(),
                                            eligible.begin() + static_cast<std::ptrdiff_t>(dropout_count));
    std::sort(dropout_hours.begin(), dropout_hours.end());
    for (std::int64_t h : dropout_hours)
        is_dropout[static_cast<std::size_t>(h - rec_start_hour)] = true;

    GroundTruth& truth = out.truth;
    truth.start_hour = rec_start_hour;
    truth.hours = hours;
    truth.dropout_hours = dropout_hours;
    truth.stress_hour = stress_abs_hour;
    truth.aspiration_hour = aspiration_abs_hour;
    for (std::size_t i = 0; i < hours; ++i) {
        if (is_gap[i]) truth.gap_hours.push_back(rec_start_hour + static_cast<std::int64_t>(i));
    }

    for (const SignalId& id : core_signals()) {
        const SignalLevel& lvl = profile.levels.at(id);
        const SignalId::Core core = *id.core();
        SplitMix64 rng(signal_seeds.at(id));

        // Circadian sinusoid with a 04:00 local trough, precomputed per
        // second of day.
        std::vector<double> circadian(86400);
        for (std::size_t s = 0; s < 86400; ++s) {
            circadian[s] = -lvl.circadian_amplitude *
                           std::cos(2.0 * std::numbers::pi *
                                    (static_cast<double>(s) - 4.0 * 3600.0) / 86400.0);
        }

        std::vector<Sample>& samples = out.record.series[id];
        samples.reserve((hours - truth.gap_hours.size()) * 3600);
        auto& means = truth.hourly_means[id];
        means.assign(hours, std::nullopt);

        for (std::size_t i = 0; i < hours; ++i) {
            if (is_gap[i]) continue;
            const std::int64_t hour = rec_start_hour + static_cast<std::int64_t>(i);
            const std::int64_t hour_utc = hour * kSecondsPerHour - tz;
            const double bump = event_bump(profile, core, hour, stress_abs_hour);
            double sum = 0;
            for (int s = 0; s < 3600; ++s) {
                const std::int64_t t = hour_utc + s;
                const std::int64_t sod = local_second_of_day(t, tz);
                const double d =
                    static_cast<double>(t - profile.admission_start) / 86400.0;
                const double value = lvl.level + circadian[static_cast<std::size_t>(sod)] +
                                     trend_value(profile, core, d) + bump +
                                     rng.uniform(-lvl.noise_amplitude, lvl.noise_amplitude);
                std::int16_t quality = kNoQuality;
                if (lvl.has_quality)
                    quality = static_cast<std::int16_t>(is_dropout[i] ? rng.uniform_int(0, 49)
                                                                      : rng.uniform_int(60, 100));
                samples.push_back(Sample{t, value, quality});
                sum += value;
            }
            means[i] = sum / 3600.0;
        }
    }
    return out;
}

std::vector<PatientProfile> cohort_profiles(int n, const CohortMix& mix, std::uint64_t seed,
                                            double max_duration_days,
                                            std::int32_t utc_offset_seconds) {
    if (n < 1) throw ConfigError("cohort size must be >= 1");
    if (max_duration_days < 2) throw ConfigError("max_duration_days must be >= 2");

    const double weights[] = {mix.typical, mix.complication, mix.stress, mix.zero_data};
    const ProfileKind kinds[] = {ProfileKind::typical, ProfileKind::complication,
                                 ProfileKind::stress, ProfileKind::zero_data};
    double total = 0;
    for (double w : weights) {
        if (w < 0) throw ConfigError("cohort mix proportions must be non-negative");
        total += w;
    }
    if (total <= 0) throw ConfigError("cohort mix proportions sum to zero");

    // Floored proportional counts; the remainder goes to the largest
    // fractional parts, and every positive-weight kind keeps at least one
    // patient when the cohort is big enough.
    int counts[4] = {0, 0, 0, 0};
    double fractional[4] = {0, 0, 0, 0};
    int assigned = 0;
    for (int k = 0; k < 4; ++k) {
        const double raw = n * weights[k] / total;
        counts[k] = static_cast<int>(raw);
        fractional[k] = raw - counts[k];
        assigned += counts[k];
    }
    for (int r = assigned; r < n; ++r) {
        int best = 0;
        for (int k = 1; k < 4; ++k)
            if (fractional[k] > fractional[best]) best = k;
        ++counts[best];
        fractional[best] = -1;
    }
    int positive_kinds = 0;
    for (double w : weights)
        if (w > 0) ++positive_kinds;
    if (n >= positive_kinds) {
        for (int k = 0; k < 4; ++k) {
            if (weights[k] > 0 && counts[k] == 0) {
                int largest = 0;
                for (int j = 1; j < 4; ++j)
                    if (counts[j] > counts[largest]) largest = j;
                --counts[largest];
                ++counts[k];
            }
        }
    }

    SplitMix64 root(seed);
    std::vector<std::uint64_t> patient_seeds(static_cast<std::size_t>(n));
    for (auto& s : patient_seeds) s = root.next();

    const std::int64_t base_start = 1583052433; // 2020-03-01T08:47:13Z
    std::vector<PatientProfile> profiles;
    profiles.reserve(static_cast<std::size_t>(n));
    int index = 0;
    for (int k = 0; k < 4; ++k) {
        for (int c = 0; c < counts[k]; ++c, ++index) {
            PatientProfile p;
            p.kind = kinds[k];
            char id[16];
            std::snprintf(id, sizeof(id), "p%03d", index + 1);
            p.patient_id = id;
            p.seed = patient_seeds[static_cast<std::size_t>(index)];
            p.utc_offset_seconds = utc_offset_seconds;
            p.admission_start = base_start + static_cast<std::int64_t>(index) * 29137 +
                                root.uniform_int(0, 7200);
            switch (p.kind) {
                case ProfileKind::typical:
                    p.duration_days = root.uniform(3.0, max_duration_days);
                    break;
                case ProfileKind::complication: {
                    p.duration_days = root.uniform(
                        std::min(7.0, std::max(2.0, max_duration_days - 1)), max_duration_days);
                    const int last_day =
                        std::max(1, std::min(static_cast<int>(p.duration_days - 1.0), 6));
                    p.aspiration_day = root.uniform_int(1, last_day);
                    p.extra_recorded_days = 2.0;
                    break;
                }
                case ProfileKind::stress: {
                    p.duration_days =
                        root.uniform(std::min(6.0, std::max(2.0, max_duration_days - 1)),
                                     std::min(12.0, max_duration_days));
                    const int last_day =
                        std::max(1, std::min(static_cast<int>(p.duration_days - 1.0), 9));
                    p.stress_day = root.uniform_int(1, last_day);
                    p.stress_hour = 14;
                    break;
                }
                case ProfileKind::zero_data:
                    p.duration_days = root.uniform(0.2, 3.0);
                    break;
            }
            profiles.push_back(std::move(p));
        }
    }
    return profiles;
}

std::vector<SyntheticPatient> generate_cohort(int n, const CohortMix& mix, std::uint64_t seed) {
    std::vector<SyntheticPatient> cohort;
    for (const PatientProfile& profile : cohort_profiles(n, mix, seed)) {
        cohort.push_back(generate_patient(profile));
    }
    return cohort;
}

std::string ground_truth_json(const GroundTruth& truth) {
    nlohmann::json j;
    j["start_hour"] = truth.start_hour;
    j["hours"] = truth.hours;
    j["gap_hours"] = truth.gap_hours;
    j["dropout_hours"] = truth.dropout_hours;
    j["stress_hour"] = truth.stress_hour;
    j["aspiration_hour"] = truth.aspiration_hour;
    nlohmann::json means = nlohmann::json::object();
    for (const auto& [id, values] : truth.hourly_means) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& v : values) {
            if (v) arr.push_back(*v);
            else arr.push_back(nullptr);
        }
        means[id.name()] = std::move(arr);
    }
    j["hourly_means"] = std::move(means);
    return j.dump();
}

} // namespace vitalband
