#pragma once

#include <filesystem>
#include <string>

#include "vitalband/aggregate.hpp"
#include "vitalband/colorscale.hpp"
#include "vitalband/quality.hpp"
#include "vitalband/render.hpp"
#include "vitalband/synth.hpp"

namespace vitalband {

struct SynthConfig {
    int patients = 84;
    std::uint64_t seed = 20200301;
    CohortMix mix;
    double max_duration_days = 14.0;
    std::map<SignalId, SignalLevel> levels = default_signal_levels();
};

// Everything the CLI and pipeline read; all design constants live here so a
// config file can override any of them.
struct PipelineConfig {
    std::int32_t utc_offset_seconds = 0;
    // Per-patient overrides of the global offset, keyed by patient id.
    std::map<std::string, std::int32_t> timezone_offsets;
    FilterConfig filter;
    RangeConfig ranges;
    Palette palette;
    ChartLayout layout; // carries the tick rule and date mode
    SynthConfig synth;
    // Per-signal scheme assignment; signals not listed use the defaults.
    struct ScaleSpec {
        SchemeName scheme = SchemeName::RYGB;
        ScaleMode mode = ScaleMode::continuous;
        int steps = 5;
        bool inverted = false;
        std::vector<std::pair<double, Color>> anchors; // empty = scheme anchors
    };
    std::map<SignalId, ScaleSpec> scale_specs;
    int jobs = 0; // 0 = number of hardware threads, clamped to [1,8]

    ScaleSet scales() const;
    std::int32_t offset_for(const std::string& patient_id) const;
    void validate() const; // throws ConfigError
};

// Missing file -> defaults when allow_missing, else IoError. Unknown keys are
// rejected so typos do not silently fall back to defaults.
PipelineConfig load_config(const std::filesystem::path& path, bool allow_missing = false);
PipelineConfig parse_config_json(const std::string& text);
std::string config_schema_json(); // defaults serialized, doubles as documentation

} // namespace vitalband
