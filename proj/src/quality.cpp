#include "vitalband/quality.hpp"

#include <algorithm>

#include "vitalband/errors.hpp"
#include "vitalband/text.hpp"

namespace vitalband {

void FilterConfig::validate() const {
    if (quality_threshold < 0 || quality_threshold > 100)
        throw ConfigError("quality threshold must be in [0,100], got " +
                          std::to_string(quality_threshold));
}

PatientRecord crop_to_admission(const PatientRecord& record) {
    PatientRecord out;
    out.meta = record.meta;
    const std::int64_t lo = record.meta.admission_start;
    const std::int64_t hi = record.meta.admission_end;
    for (const auto& [id, samples] : record.series) {
        auto& kept = out.series[id];
        kept.reserve(samples.size());
        for (const Sample& s : samples) {
            if (s.timestamp >= lo && s.timestamp <= hi) kept.push_back(s);
        }
    }
    return out;
}

PatientRecord mask_by_heart_rate(const PatientRecord& record, std::optional<int> min_hr_quality) {
    const std::vector<Sample>* hr = record.find(SignalId(SignalId::Core::HR));

    // Seconds where HR counts as present, sorted (series timestamps are
    // strictly increasing by invariant).
    std::vector<std::int64_t> hr_present;
    if (hr) {
        hr_present.reserve(hr->size());
        for (const Sample& s : *hr) {
            if (min_hr_quality && s.quality != kNoQuality && s.quality < *min_hr_quality) continue;
            hr_present.push_back(s.timestamp);
        }
    }

    PatientRecord out;
    out.meta = record.meta;
    const SignalId hr_id(SignalId::Core::HR);
    for (const auto& [id, samples] : record.series) {
        auto& kept = out.series[id];
        if (id == hr_id) {
            kept = samples;
            continue;
        }
        kept.reserve(samples.size());
        auto it = hr_present.begin();
        for (const Sample& s : samples) {
            while (it != hr_present.end() && *it < s.timestamp) ++it;
            if (it != hr_present.end() && *it == s.timestamp) kept.push_back(s);
        }
    }
    return out;
}

PatientRecord filter_by_quality(const PatientRecord& record, const FilterConfig& cfg) {
    cfg.validate();
    PatientRecord out;
    out.meta = record.meta;
    for (const auto& [id, samples] : record.series) {
        auto& kept = out.series[id];
        kept.reserve(samples.size());
        for (const Sample& s : samples) {
            if (s.quality != kNoQuality && s.quality < cfg.quality_threshold) continue;
            kept.push_back(s);
        }
    }
    return out;
}

PatientRecord apply_cascade(const PatientRecord& record, const FilterConfig& cfg) {
    cfg.validate();
    PatientRecord current = cfg.crop_to_admission ? crop_to_admission(record) : record;
    if (cfg.require_hr_presence) {
        // The mask keys on HR samples that will survive the threshold stage;
        // otherwise a below-threshold HR second would leave orphaned non-HR
        // samples behind and the cascade would not be idempotent.
        current = mask_by_heart_rate(current, cfg.quality_threshold);
    }
    return filter_by_quality(current, cfg);
}

void QualitySummary::add(const PatientRecord& record, bool after) {
    for (const auto& [id, samples] : record.series) {
        Acc& acc = acc_[id];
        for (const Sample& s : samples) {
            if (after) {
                ++acc.n_after;
                if (s.quality != kNoQuality) {
                    acc.quality_sum_after += s.quality;
                    ++acc.quality_n_after;
                }
            } else {
                ++acc.n_before;
                if (s.quality != kNoQuality) {
                    acc.quality_sum_before += s.quality;
                    ++acc.quality_n_before;
                }
            }
        }
    }
}

void QualitySummary::add_before(const PatientRecord& record) { add(record, false); }
void QualitySummary::add_after(const PatientRecord& record) { add(record, true); }

void QualitySummary::merge(const QualitySummary& other) {
    for (const auto& [id, acc] : other.acc_) {
        Acc& mine = acc_[id];
        mine.quality_sum_before += acc.quality_sum_before;
        mine.quality_n_before += acc.quality_n_before;
        mine.quality_sum_after += acc.quality_sum_after;
        mine.quality_n_after += acc.quality_n_after;
        mine.n_before += acc.n_before;
        mine.n_after += acc.n_after;
    }
}

std::vector<QualitySummary::Row> QualitySummary::rows() const {
    std::vector<Row> out;
    out.reserve(acc_.size());
    for (const auto& [id, acc] : acc_) {
        Row row;
        row.signal = id;
        row.n_before = acc.n_before;
        row.n_after = acc.n_after;
        if (acc.quality_n_before > 0)
            row.mean_before = acc.quality_sum_before / static_cast<double>(acc.quality_n_before);
        if (acc.quality_n_after > 0)
            row.mean_after = acc.quality_sum_after / static_cast<double>(acc.quality_n_after);
        out.push_back(std::move(row));
    }
    return out;
}

std::string QualitySummary::to_csv() const {
    std::string out = "signal,mean_q_before,mean_q_after,n_before,n_after\n";
    for (const Row& row : rows()) {
        out += row.signal.name();
        out += ',';
        out += row.mean_before ? fmt2(*row.mean_before) : "n/a";
        out += ',';
        out += row.mean_after ? fmt2(*row.mean_after) : "n/a";
        out += ',';
        out += std::to_string(row.n_before);
        out += ',';
        out += std::to_string(row.n_after);
        out += '\n';
    }
    return out;
}

QualitySummary quality_summary(const PatientRecord& before, const PatientRecord& after) {
    QualitySummary summary;
    summary.add_before(before);
    summary.add_after(after);
    return summary;
}

} // namespace vitalband
