#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vitalband/cohort.hpp"
#include "vitalband/config.hpp"
#include "vitalband/synth.hpp"

namespace vitalband {

enum class ChartSelection : std::uint8_t { heatmap, bars, both };

// One patient taken through crop/mask/filter and hourly aggregation.
struct ProcessedPatient {
    PatientMeta meta;
    HourlyGrid grid; // annotated with baselines and ranges
    DayCounts days;
    QualitySummary quality; // this patient's before/after contribution
    std::vector<Diagnostic> warnings;
};

ProcessedPatient process_record(const PatientRecord& raw, const PipelineConfig& cfg);

// Writes <id>_heatmap.svg / <id>_bars.svg and <id>_hourly.csv into out_dir.
struct PatientArtifacts {
    std::filesystem::path heatmap_svg;
    std::filesystem::path bars_svg;
    std::filesystem::path hourly_csv;
};

PatientArtifacts write_patient_artifacts(const ProcessedPatient& patient,
                                         const PipelineConfig& cfg,
                                         ChartSelection charts,
                                         const std::vector<Annotation>& annotations,
                                         const std::filesystem::path& out_dir,
                                         std::vector<Diagnostic>* warnings = nullptr);

struct PipelineResult {
    int patients = 0;
    int warnings = 0;
    std::optional<CohortStats> stats; // absent for an empty cohort
};

// End-to-end run over the synthetic cohort described by cfg.synth: generate,
// filter, aggregate, render per patient (bounded worker pool), then cohort
// summaries. Outputs are byte-stable for a fixed config and seed.
PipelineResult run_pipeline(const PipelineConfig& cfg, const std::filesystem::path& out_dir,
                            ChartSelection charts = ChartSelection::both);

// Same cohort stage over already-processed patients (used when reading CSV
// inputs instead of generating them).
struct CohortInput {
    std::string patient_id;
    DayCounts days;
    QualitySummary quality;
};

PipelineResult write_cohort_artifacts(std::vector<CohortInput> patients,
                                      const PipelineConfig& cfg,
                                      const std::filesystem::path& out_dir);

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

} // namespace vitalband
