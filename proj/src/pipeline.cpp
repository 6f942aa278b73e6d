#include "vitalband/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "vitalband/errors.hpp"
#include "vitalband/log.hpp"
#include "vitalband/text.hpp"
#include "vitalband/time_util.hpp"

namespace vitalband {

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failure for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

ProcessedPatient process_record(const PatientRecord& raw, const PipelineConfig& cfg) {
    ProcessedPatient out;
    out.meta = raw.meta;
    out.quality.add_before(raw);

    PatientRecord cropped = cfg.filter.crop_to_admission ? crop_to_admission(raw) : raw;
    PatientRecord filtered = filter_by_quality(
        cfg.filter.require_hr_presence
            ? mask_by_heart_rate(cropped, cfg.filter.quality_threshold)
            : cropped,
        cfg.filter);

    out.quality.add_after(filtered);
    out.grid = hourly_mean(filtered, cfg.offset_for(raw.meta.patient_id));
    out.days = data_day_counts(raw, cropped, out.grid);
    cropped = PatientRecord{};
    annotate_grid(out.grid, cfg.ranges, &out.warnings);
    return out;
}

PatientArtifacts write_patient_artifacts(const ProcessedPatient& patient,
                                         const PipelineConfig& cfg, ChartSelection charts,
                                         const std::vector<Annotation>& annotations,
                                         const std::filesystem::path& out_dir,
                                         std::vector<Diagnostic>* warnings) {
    PatientArtifacts artifacts;
    const ScaleSet scales = cfg.scales();
    const std::string& id = patient.meta.patient_id;

    if (charts == ChartSelection::heatmap || charts == ChartSelection::both) {
        artifacts.heatmap_svg = out_dir / (id + "_heatmap.svg");
        write_text_file(artifacts.heatmap_svg,
                        render_heatmap(patient.grid, scales, cfg.layout, annotations, id, warnings));
    }
    if (charts == ChartSelection::bars || charts == ChartSelection::both) {
        artifacts.bars_svg = out_dir / (id + "_bars.svg");
        write_text_file(artifacts.bars_svg,
                        render_barchart(patient.grid, cfg.layout, annotations, id, warnings));
    }
    artifacts.hourly_csv = out_dir / (id + "_hourly.csv");
    write_text_file(artifacts.hourly_csv, hourly_grid_csv(patient.grid));
    return artifacts;
}

namespace {

int resolved_jobs(const PipelineConfig& cfg) {
    if (cfg.jobs > 0) return cfg.jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 4u));
}

std::vector<Annotation> event_annotations(const GroundTruth& truth) {
    std::vector<Annotation> annotations;
    if (truth.stress_hour >= 0)
        annotations.push_back({truth.stress_hour, "stress episode", true});
    if (truth.aspiration_hour >= 0)
        annotations.push_back({truth.aspiration_hour, "complication onset", true});
    return annotations;
}

} // namespace

PipelineResult write_cohort_artifacts(std::vector<CohortInput> patients,
                                      const PipelineConfig& cfg,
                                      const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::sort(patients.begin(), patients.end(),
              [](const CohortInput& a, const CohortInput& b) {
                  return a.patient_id < b.patient_id;
              });

    PipelineResult result;
    result.patients = static_cast<int>(patients.size());

    QualitySummary merged;
    std::vector<DayCounts> days;
    std::vector<PatientDays> patient_days;
    for (const CohortInput& p : patients) {
        merged.merge(p.quality);
        days.push_back(p.days);
        patient_days.push_back({p.patient_id, p.days});
    }

    write_text_file(out_dir / "quality_report.csv", merged.to_csv());
    write_text_file(out_dir / "patient_days.csv", patient_days_csv(patient_days));
    write_text_file(out_dir / "cohort_days.svg",
                    render_cohort_days_chart(patient_days, cfg.layout));
    write_text_file(out_dir / "cohort_quality.svg",
                    render_quality_chart(merged, cfg.layout, cfg.filter.quality_threshold));
    if (!days.empty()) {
        result.stats = cohort_stats(days);
        write_text_file(out_dir / "cohort_stats.csv", cohort_stats_csv(*result.stats));
    }
    return result;
}

PipelineResult run_pipeline(const PipelineConfig& cfg, const std::filesystem::path& out_dir,
                            ChartSelection charts) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);

    std::vector<PatientProfile> profiles =
        cohort_profiles(cfg.synth.patients, cfg.synth.mix, cfg.synth.seed,
                        cfg.synth.max_duration_days, cfg.utc_offset_seconds);
    for (PatientProfile& p : profiles) {
        p.levels = cfg.synth.levels;
        p.utc_offset_seconds = cfg.offset_for(p.patient_id);
    }

    struct Slot {
        CohortInput input;
        std::vector<Diagnostic> warnings;
        std::exception_ptr error;
    };
    std::vector<Slot> slots(profiles.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= profiles.size()) return;
            Slot& slot = slots[i];
            try {
                SyntheticPatient patient = generate_patient(profiles[i]);
                ProcessedPatient processed = process_record(patient.record, cfg);
                patient.record = PatientRecord{};
                std::vector<Diagnostic> warnings = std::move(processed.warnings);
                write_patient_artifacts(processed, cfg, charts,
                                        event_annotations(patient.truth), out_dir, &warnings);
                slot.input = {profiles[i].patient_id, processed.days, processed.quality};
                slot.warnings = std::move(warnings);
            } catch (...) {
                slot.error = std::current_exception();
            }
        }
    };

    const int jobs = std::min<int>(resolved_jobs(cfg), static_cast<int>(profiles.size()));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    for (Slot& slot : slots) {
        if (slot.error) std::rethrow_exception(slot.error);
    }

    // Reduce in patient order so cohort artifacts are byte-stable regardless
    // of worker scheduling.
    std::vector<CohortInput> inputs;
    nlohmann::json report_warnings = nlohmann::json::array();
    int warning_count = 0;
    for (Slot& slot : slots) {
        for (const Diagnostic& d : slot.warnings) {
            log_warn(slot.input.patient_id + ": " + d.message);
            report_warnings.push_back(slot.input.patient_id + ": " + d.message);
            ++warning_count;
        }
        inputs.push_back(std::move(slot.input));
    }

    PipelineResult result = write_cohort_artifacts(std::move(inputs), cfg, out_dir);
    result.warnings = warning_count;

    nlohmann::json report;
    report["patients"] = result.patients;
    report["warning_count"] = warning_count;
    report["warnings"] = std::move(report_warnings);
    if (result.stats) {
        report["zero_data_patients"] = result.stats->zero_data_patients;
        report["recorded_days_mean"] = result.stats->recorded.mean;
        report["useful_days_mean"] = result.stats->useful.mean;
    }
    write_text_file(out_dir / "report.json", report.dump(2) + "\n");
    log_info("pipeline finished: " + std::to_string(result.patients) + " patients, " +
             std::to_string(warning_count) + " warnings");
    return result;
}

} // namespace vitalband
