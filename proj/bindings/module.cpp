#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "vitalband/config.hpp"
#include "vitalband/errors.hpp"
#include "vitalband/ingest.hpp"
#include "vitalband/pipeline.hpp"
#include "vitalband/text.hpp"

namespace py = pybind11;
using namespace vitalband;

namespace {

SignalId signal_from_name(const std::string& name) {
    auto id = SignalId::parse(name);
    if (!id) throw ConfigError("empty signal name");
    return *id;
}

ScaleKind kind_from_name(const std::string& kind) {
    if (iequals(kind, "sequential")) return ScaleKind::sequential;
    if (iequals(kind, "diverging")) return ScaleKind::diverging;
    throw ConfigError("scale kind must be 'sequential' or 'diverging'");
}

PatientProfile make_profile(const std::string& kind, const std::string& patient_id,
                            double duration_days, std::uint64_t seed, double dropout_rate,
                            std::int32_t utc_offset_seconds) {
    PatientProfile profile;
    auto parsed = parse_profile_kind(kind);
    if (!parsed) throw ConfigError("unknown profile kind '" + kind + "'");
    profile.kind = *parsed;
    profile.patient_id = patient_id;
    profile.duration_days = duration_days;
    profile.seed = seed;
    profile.dropout_rate = dropout_rate;
    profile.utc_offset_seconds = utc_offset_seconds;
    // Keep the default event schedule inside short admissions.
    const int last_day = std::max(1, static_cast<int>(duration_days - 1.0));
    profile.stress_day = std::min(profile.stress_day, last_day);
    profile.aspiration_day = std::min(profile.aspiration_day, last_day);
    return profile;
}

PipelineConfig config_from_json(const std::optional<std::string>& config_json) {
    return config_json ? parse_config_json(*config_json) : PipelineConfig{};
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Wearable vital-sign filtering, hourly aggregation and SVG chart rendering";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);

    py::class_<PatientRecord>(m, "PatientRecord")
        .def_property_readonly("patient_id",
                               [](const PatientRecord& r) { return r.meta.patient_id; })
        .def_property_readonly("admission_start",
                               [](const PatientRecord& r) { return r.meta.admission_start; })
        .def_property_readonly("admission_end",
                               [](const PatientRecord& r) { return r.meta.admission_end; })
        .def("sample_count", &PatientRecord::sample_count)
        .def("signals",
             [](const PatientRecord& r) {
                 std::vector<std::string> names;
                 for (const auto& [id, samples] : r.series) names.push_back(id.name());
                 return names;
             })
        .def("signal_sample_count",
             [](const PatientRecord& r, const std::string& signal) -> std::size_t {
                 const auto* samples = r.find(signal_from_name(signal));
                 return samples ? samples->size() : 0;
             })
        .def("to_csv", [](const PatientRecord& r) {
            return serialize_samples_csv(flatten_record(r));
        });

    py::class_<HourlyGrid>(m, "HourlyGrid")
        .def_property_readonly("start_hour", [](const HourlyGrid& g) { return g.start_hour; })
        .def_property_readonly("hours", [](const HourlyGrid& g) { return g.hours; })
        .def("signals",
             [](const HourlyGrid& g) {
                 std::vector<std::string> names;
                 for (const auto& [id, series] : g.series) names.push_back(id.name());
                 return names;
             })
        .def("values",
             [](const HourlyGrid& g, const std::string& signal) {
                 const auto it = g.series.find(signal_from_name(signal));
                 if (it == g.series.end()) throw ConfigError("no series for '" + signal + "'");
                 return it->second.values;
             })
        .def("counts",
             [](const HourlyGrid& g, const std::string& signal) {
                 const auto it = g.series.find(signal_from_name(signal));
                 if (it == g.series.end()) throw ConfigError("no series for '" + signal + "'");
                 return it->second.counts;
             })
        .def("baseline",
             [](const HourlyGrid& g, const std::string& signal) -> std::optional<double> {
                 const auto it = g.series.find(signal_from_name(signal));
                 if (it == g.series.end() || !it->second.range_defined) return std::nullopt;
                 return it->second.baseline;
             })
        .def("range",
             [](const HourlyGrid& g,
                const std::string& signal) -> std::optional<std::pair<double, double>> {
                 const auto it = g.series.find(signal_from_name(signal));
                 if (it == g.series.end() || !it->second.range_defined) return std::nullopt;
                 return std::make_pair(it->second.vmin, it->second.vmax);
             })
        .def("to_csv", &hourly_grid_csv);

    m.def("tick_stride_hours",
          [](double duration_hours) { return tick_stride_hours(duration_hours); },
          py::arg("duration_hours"),
          "Minor tick label stride for a chart of the given duration");

    m.def("normalize",
          [](double value, double vmin, double vmax, double baseline, const std::string& kind) {
              return normalize_value(value, vmin, vmax, baseline, kind_from_name(kind));
          },
          py::arg("value"), py::arg("vmin"), py::arg("vmax"), py::arg("baseline"),
          py::arg("kind") = "diverging");

    m.def("map_color_hex",
          [](const std::string& scheme, double position, const std::string& mode, int steps,
             bool inverted) {
              auto name = parse_scheme_name(scheme);
              if (!name) throw ConfigError("unknown scheme '" + scheme + "'");
              const ScaleMode scale_mode =
                  iequals(mode, "discrete") ? ScaleMode::discrete : ScaleMode::continuous;
              return map_color(make_named_scale(*name, scale_mode, inverted, steps), position)
                  .to_hex();
          },
          py::arg("scheme"), py::arg("position"), py::arg("mode") = "continuous",
          py::arg("steps") = 5, py::arg("inverted") = false);

    m.def("generate_patient",
          [](const std::string& kind, double duration_days, std::uint64_t seed,
             const std::string& patient_id, double dropout_rate,
             std::int32_t utc_offset_seconds) {
              SyntheticPatient patient = generate_patient(make_profile(
                  kind, patient_id, duration_days, seed, dropout_rate, utc_offset_seconds));
              py::dict truth;
              truth["start_hour"] = patient.truth.start_hour;
              truth["hours"] = patient.truth.hours;
              truth["gap_hours"] = patient.truth.gap_hours;
              truth["dropout_hours"] = patient.truth.dropout_hours;
              truth["stress_hour"] = patient.truth.stress_hour;
              truth["aspiration_hour"] = patient.truth.aspiration_hour;
              return py::make_tuple(std::move(patient.record), std::move(truth));
          },
          py::arg("kind") = "typical", py::arg("duration_days") = 3.0, py::arg("seed") = 1,
          py::arg("patient_id") = "p001", py::arg("dropout_rate") = 0.08,
          py::arg("utc_offset_seconds") = 0,
          "Deterministic synthetic patient; returns (record, ground_truth dict)");

    m.def("record_from_csv",
          [](const std::string& csv_text, const std::string& patient_id,
             std::int64_t admission_start, std::int64_t admission_end) {
              std::istringstream in(csv_text);
              ParseResult parsed = parse_samples_csv(in);
              PatientMeta meta;
              meta.patient_id = patient_id;
              meta.admission_start = admission_start;
              meta.admission_end = admission_end;
              BuildResult built = build_record(std::move(meta), std::move(parsed.samples));
              std::vector<std::string> diagnostics;
              for (const Diagnostic& d : parsed.diagnostics)
                  diagnostics.push_back("line " + std::to_string(d.line) + ": " + d.message);
              for (const Diagnostic& d : built.diagnostics) diagnostics.push_back(d.message);
              return py::make_tuple(std::move(built.record), std::move(diagnostics));
          },
          py::arg("csv_text"), py::arg("patient_id"), py::arg("admission_start"),
          py::arg("admission_end"));

    m.def("apply_cascade",
          [](const PatientRecord& record, int quality_threshold, bool require_hr_presence,
             bool crop_to_admission) {
              FilterConfig cfg;
              cfg.quality_threshold = quality_threshold;
              cfg.require_hr_presence = require_hr_presence;
              cfg.crop_to_admission = crop_to_admission;
              return apply_cascade(record, cfg);
          },
          py::arg("record"), py::arg("quality_threshold") = 50,
          py::arg("require_hr_presence") = true, py::arg("crop_to_admission") = true,
          "Admission crop, HR-presence mask and quality threshold in one pass");

    m.def("hourly_grid",
          [](const PatientRecord& record, std::int32_t utc_offset_seconds) {
              HourlyGrid grid = hourly_mean(record, utc_offset_seconds);
              annotate_grid(grid, RangeConfig{});
              return grid;
          },
          py::arg("record"), py::arg("utc_offset_seconds") = 0,
          "Hourly means with per-patient baselines and ranges");

    m.def("moving_average",
          [](const HourlyGrid& grid, const std::string& signal, int window_hours) {
              const auto it = grid.series.find(signal_from_name(signal));
              if (it == grid.series.end()) throw ConfigError("no series for '" + signal + "'");
              return moving_average(it->second, window_hours);
          },
          py::arg("grid"), py::arg("signal"), py::arg("window_hours") = 4);

    m.def("render_heatmap_svg",
          [](const HourlyGrid& grid, const std::string& title,
             const std::optional<std::string>& config_json) {
              const PipelineConfig cfg = config_from_json(config_json);
              return render_heatmap(grid, cfg.scales(), cfg.layout, {}, title);
          },
          py::arg("grid"), py::arg("title") = "", py::arg("config_json") = std::nullopt);

    m.def("render_barchart_svg",
          [](const HourlyGrid& grid, const std::string& title,
             const std::optional<std::string>& config_json) {
              const PipelineConfig cfg = config_from_json(config_json);
              return render_barchart(grid, cfg.layout, {}, title);
          },
          py::arg("grid"), py::arg("title") = "", py::arg("config_json") = std::nullopt);

    m.def("run_pipeline",
          [](const std::filesystem::path& out_dir, int patients, std::uint64_t seed,
             double max_duration_days, const std::optional<std::string>& config_json) {
              PipelineConfig cfg = config_from_json(config_json);
              cfg.synth.patients = patients;
              cfg.synth.seed = seed;
              cfg.synth.max_duration_days = max_duration_days;
              const PipelineResult result = run_pipeline(cfg, out_dir);
              py::dict out;
              out["patients"] = result.patients;
              out["warnings"] = result.warnings;
              if (result.stats) {
                  out["zero_data_patients"] = result.stats->zero_data_patients;
                  out["recorded_days_mean"] = result.stats->recorded.mean;
                  out["useful_days_mean"] = result.stats->useful.mean;
              }
              return out;
          },
          py::arg("out_dir"), py::arg("patients") = 8, py::arg("seed") = 20200301,
          py::arg("max_duration_days") = 5.0, py::arg("config_json") = std::nullopt,
          "Synthetic cohort end to end; writes SVG and CSV artifacts to out_dir");

    m.def("config_schema_json", &config_schema_json,
          "Default configuration serialized as JSON (doubles as schema documentation)");

    m.attr("CORE_SIGNALS") = []() {
        std::vector<std::string> names;
        for (const SignalId& id : core_signals()) names.push_back(id.name());
        return names;
    }();

#ifdef VITALBAND_VERSION
    m.attr("__version__") = VITALBAND_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
