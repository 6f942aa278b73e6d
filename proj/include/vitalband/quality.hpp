#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vitalband/types.hpp"

namespace vitalband {

struct FilterConfig {
    int quality_threshold = 50; // percent, [0,100]
    bool require_hr_presence = true;
    bool crop_to_admission = true;

    void validate() const; // throws ConfigError
};

// Removes samples outside [admission_start, admission_end] (closed interval).
PatientRecord crop_to_admission(const PatientRecord& record);

// Removes every non-HR sample at seconds where no HR sample counts as
// present. With min_hr_quality set, HR samples whose quality is present and
// below it do not count as present (the cascade passes the filter threshold
// here so the mask agrees with the final surviving HR set).
PatientRecord mask_by_heart_rate(const PatientRecord& record,
                                 std::optional<int> min_hr_quality = std::nullopt);

// Removes samples whose quality is present and below the threshold.
// Samples without a quality channel always pass.
PatientRecord filter_by_quality(const PatientRecord& record, const FilterConfig& cfg);

// crop -> HR-presence mask -> quality threshold. Idempotent.
PatientRecord apply_cascade(const PatientRecord& record, const FilterConfig& cfg);

// Per-signal mean quality before/after the cascade, accumulated over one or
// more patients. Counts are total samples; means cover quality-bearing
// samples only and are absent for signals without a quality channel.
class QualitySummary {
public:
    void add_before(const PatientRecord& record);
    void add_after(const PatientRecord& record);
    void merge(const QualitySummary& other);

    struct Row {
        SignalId signal;
        std::optional<double> mean_before;
        std::optional<double> mean_after;
        std::int64_t n_before = 0;
        std::int64_t n_after = 0;
    };

    std::vector<Row> rows() const; // canonical signal order

    // signal,mean_q_before,mean_q_after,n_before,n_after ("n/a" for absent means)
    std::string to_csv() const;

private:
    struct Acc {
        double quality_sum_before = 0;
        std::int64_t quality_n_before = 0;
        double quality_sum_after = 0;
        std::int64_t quality_n_after = 0;
        std::int64_t n_before = 0;
        std::int64_t n_after = 0;
    };
    std::map<SignalId, Acc> acc_;

    void add(const PatientRecord& record, bool after);
};

QualitySummary quality_summary(const PatientRecord& before, const PatientRecord& after);

} // namespace vitalband
