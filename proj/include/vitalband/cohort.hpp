#pragma once

#include <array>
#include <string>
#include <vector>

#include "vitalband/aggregate.hpp"
#include "vitalband/quality.hpp"
#include "vitalband/render.hpp"

namespace vitalband {

// Bin edges in days for recorded-duration histogram: [0,2) [2,5) [5,10) [10,inf).
inline constexpr std::array<double, 3> kDurationBinEdges = {2.0, 5.0, 10.0};

struct CohortStats {
    struct Stat {
        double mean = 0;
        double stddev = 0; // sample (n-1); 0 for a single patient
        double min = 0;
        double max = 0;
    };
    Stat admitted;
    Stat recorded;
    Stat useful;
    std::array<int, 4> recorded_day_bins{};
    int zero_data_patients = 0; // recorded == 0
    int patients = 0;
};

// Throws RangeError on an empty cohort.
CohortStats cohort_stats(const std::vector<DayCounts>& patients);

// Long key,value CSV: metric,value rows.
std::string cohort_stats_csv(const CohortStats& stats);

struct PatientDays {
    std::string patient_id;
    DayCounts days;
};

std::string patient_days_csv(std::vector<PatientDays> patients);

// One group per patient (ordered by id): admitted (light grey), recorded
// (dark grey) and useful (blue) nested bars.
std::string render_cohort_days_chart(std::vector<PatientDays> patients,
                                     const ChartLayout& layout);

// Two panels of per-signal mean quality bars, before and after filtering,
// y axis 0..100 with the threshold gridline.
std::string render_quality_chart(const QualitySummary& summary, const ChartLayout& layout,
                                 int quality_threshold = 50);

} // namespace vitalband
