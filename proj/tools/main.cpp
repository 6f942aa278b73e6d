#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vitalband/config.hpp"
#include "vitalband/errors.hpp"
#include "vitalband/ingest.hpp"
#include "vitalband/log.hpp"
#include "vitalband/pipeline.hpp"
#include "vitalband/text.hpp"
#include "vitalband/time_util.hpp"

namespace fs = std::filesystem;
using namespace vitalband;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out;
    std::string chart = "both";
    std::optional<int> quality_threshold;
    std::optional<std::string> timezone_offset;
    std::optional<bool> anonymize_dates;
    std::optional<std::uint64_t> seed;
    std::optional<int> patients;
    std::optional<double> max_days;
    std::optional<int> jobs;
};

void add_common_options(CLI::App* sub, CommonOpts& opts, bool with_chart = false) {
    sub->add_option("--config", opts.config_path, "JSON config file");
    sub->add_option("--out", opts.out, "Output directory or file");
    if (with_chart)
        sub->add_option("--chart", opts.chart, "Chart selection: heatmap, bars or both")
            ->check(CLI::IsMember({"heatmap", "bars", "both"}));
    sub->add_option("--quality-threshold", opts.quality_threshold,
                    "Minimum quality percent a sample must carry to survive");
    sub->add_option("--timezone-offset", opts.timezone_offset,
                    "Local clock offset, \"+HH:MM\", \"-HH:MM\" or minutes east of UTC");
    sub->add_flag("--anonymize-dates,!--absolute-dates", opts.anonymize_dates,
                  "Label days d1..dN instead of calendar dates");
    sub->add_option("--seed", opts.seed, "Cohort seed for synthetic generation");
    sub->add_option("--patients", opts.patients, "Synthetic cohort size");
    sub->add_option("--max-days", opts.max_days, "Longest synthetic admission in days");
    sub->add_option("--jobs", opts.jobs, "Worker threads (0 = auto)");
}

PipelineConfig resolve_config(const CommonOpts& opts) {
    PipelineConfig cfg = opts.config_path.empty() ? PipelineConfig{}
                                                  : load_config(opts.config_path);
    if (opts.quality_threshold) cfg.filter.quality_threshold = *opts.quality_threshold;
    if (opts.timezone_offset) {
        auto offset = parse_utc_offset(*opts.timezone_offset);
        if (!offset)
            throw ConfigError("bad --timezone-offset '" + *opts.timezone_offset + "'");
        cfg.utc_offset_seconds = *offset;
    }
    if (opts.anonymize_dates)
        cfg.layout.date_mode = *opts.anonymize_dates ? DateMode::anonymized : DateMode::absolute;
    if (opts.seed) cfg.synth.seed = *opts.seed;
    if (opts.patients) cfg.synth.patients = *opts.patients;
    if (opts.max_days) cfg.synth.max_duration_days = *opts.max_days;
    if (opts.jobs) cfg.jobs = *opts.jobs;
    cfg.validate();
    return cfg;
}

ChartSelection chart_selection(const std::string& chart) {
    if (chart == "heatmap") return ChartSelection::heatmap;
    if (chart == "bars") return ChartSelection::bars;
    return ChartSelection::both;
}

fs::path require_out_dir(const CommonOpts& opts) {
    if (opts.out.empty()) throw ConfigError("--out is required for this subcommand");
    fs::path dir(opts.out);
    fs::create_directories(dir);
    return dir;
}

PatientMeta select_patient(const MetaParseResult& metas, const std::string& wanted) {
    if (!wanted.empty()) {
        for (const PatientMeta& m : metas.patients)
            if (m.patient_id == wanted) return m;
        throw FormatError("patient '" + wanted + "' not found in metadata");
    }
    if (metas.patients.size() == 1) return metas.patients.front();
    throw ConfigError("metadata lists " + std::to_string(metas.patients.size()) +
                      " patients; pass --patient");
}

void print_diagnostics(const std::vector<Diagnostic>& diagnostics) {
    for (const Diagnostic& d : diagnostics) {
        if (d.line > 0) log_warn("line " + std::to_string(d.line) + ": " + d.message);
        else log_warn(d.message);
    }
}

std::vector<Annotation> annotations_for(const fs::path& file, const std::string& patient_id,
                                        std::int32_t tz) {
    std::vector<Annotation> out;
    if (file.empty()) return out;
    AnnotationParseResult parsed = parse_annotations_file(file);
    print_diagnostics(parsed.diagnostics);
    for (const AnnotationRow& row : parsed.rows) {
        if (row.patient_id != patient_id) continue;
        out.push_back({local_hour_index(row.timestamp, tz), row.text, false});
    }
    return out;
}

// synth -------------------------------------------------------------------

int cmd_synth(const CommonOpts& opts) {
    const PipelineConfig cfg = resolve_config(opts);
    const fs::path out_dir = require_out_dir(opts);

    std::vector<PatientProfile> profiles =
        cohort_profiles(cfg.synth.patients, cfg.synth.mix, cfg.synth.seed,
                        cfg.synth.max_duration_days, cfg.utc_offset_seconds);
    std::vector<PatientMeta> metas;
    std::vector<AnnotationRow> annotations;
    nlohmann::json manifest = nlohmann::json::object();
    nlohmann::json patients_json = nlohmann::json::array();

    for (PatientProfile& profile : profiles) {
        profile.levels = cfg.synth.levels;
        profile.utc_offset_seconds = cfg.offset_for(profile.patient_id);
        SyntheticPatient patient = generate_patient(profile);
        metas.push_back(patient.record.meta);
        write_text_file(out_dir / (profile.patient_id + "_samples.csv"),
                        serialize_samples_csv(flatten_record(patient.record)));

        if (patient.truth.stress_hour >= 0)
            annotations.push_back(
                {profile.patient_id,
                 patient.truth.stress_hour * kSecondsPerHour - profile.utc_offset_seconds,
                 "stress episode"});
        if (patient.truth.aspiration_hour >= 0)
            annotations.push_back(
                {profile.patient_id,
                 patient.truth.aspiration_hour * kSecondsPerHour - profile.utc_offset_seconds,
                 "complication onset"});

        nlohmann::json entry;
        entry["patient_id"] = profile.patient_id;
        entry["kind"] = std::string(profile_kind_name(profile.kind));
        entry["seed"] = profile.seed;
        entry["duration_days"] = profile.duration_days;
        entry["ground_truth"] = nlohmann::json::parse(ground_truth_json(patient.truth));
        patients_json.push_back(std::move(entry));
        log_info("generated " + profile.patient_id + " (" +
                 std::string(profile_kind_name(profile.kind)) + ")");
    }
    manifest["seed"] = cfg.synth.seed;
    manifest["patients"] = std::move(patients_json);

    write_text_file(out_dir / "patients.csv", serialize_patient_meta_csv(metas));
    write_text_file(out_dir / "annotations.csv", serialize_annotations_csv(annotations));
    write_text_file(out_dir / "ground_truth.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << profiles.size() << " synthetic patients to " << out_dir.string()
              << "\n";
    return 0;
}

// validate ----------------------------------------------------------------

int cmd_validate(const CommonOpts& opts, const std::string& samples, const std::string& format) {
    const SampleFormat fmt =
        iequals(format, "wide") ? SampleFormat::wide_form : SampleFormat::long_form;
    ParseResult parsed = parse_samples_file(samples, fmt);
    nlohmann::json report;
    report["samples"] = parsed.samples.size();
    report["diagnostics"] = nlohmann::json::array();
    for (const Diagnostic& d : parsed.diagnostics)
        report["diagnostics"].push_back({{"line", d.line}, {"message", d.message}});
    std::cout << report.dump(2) << "\n";
    return 0;
}

// filter / quality-report / aggregate --------------------------------------

struct LoadedPatient {
    PatientRecord record;
    std::vector<Diagnostic> diagnostics;
};

LoadedPatient load_patient(const std::string& samples, const std::string& meta,
                           const std::string& patient, const std::string& format) {
    if (samples.empty() || meta.empty())
        throw ConfigError("--samples and --meta are required for this subcommand");
    const SampleFormat fmt =
        iequals(format, "wide") ? SampleFormat::wide_form : SampleFormat::long_form;
    MetaParseResult metas = parse_patient_meta_file(meta);
    print_diagnostics(metas.diagnostics);
    PatientMeta selected = select_patient(metas, patient);
    ParseResult parsed = parse_samples_file(samples, fmt);
    print_diagnostics(parsed.diagnostics);
    BuildResult built = build_record(std::move(selected), std::move(parsed.samples));
    print_diagnostics(built.diagnostics);
    LoadedPatient out;
    out.record = std::move(built.record);
    out.diagnostics = std::move(parsed.diagnostics);
    return out;
}

int cmd_filter(const CommonOpts& opts, const std::string& samples, const std::string& meta,
               const std::string& patient, const std::string& format) {
    const PipelineConfig cfg = resolve_config(opts);
    const fs::path out_dir = require_out_dir(opts);
    LoadedPatient loaded = load_patient(samples, meta, patient, format);

    PatientRecord filtered = apply_cascade(loaded.record, cfg.filter);
    const std::string& id = filtered.meta.patient_id;
    write_text_file(out_dir / (id + "_filtered.csv"),
                    serialize_samples_csv(flatten_record(filtered)));
    write_text_file(out_dir / (id + "_quality.csv"),
                    quality_summary(loaded.record, filtered).to_csv());
    std::cout << "kept " << filtered.sample_count() << " of " << loaded.record.sample_count()
              << " samples\n";
    return 0;
}

int cmd_quality_report(const CommonOpts& opts, const std::string& samples,
                       const std::string& meta, const std::string& patient,
                       const std::string& format) {
    const PipelineConfig cfg = resolve_config(opts);
    LoadedPatient loaded = load_patient(samples, meta, patient, format);
    PatientRecord filtered = apply_cascade(loaded.record, cfg.filter);
    const std::string csv = quality_summary(loaded.record, filtered).to_csv();
    if (opts.out.empty()) std::cout << csv;
    else write_text_file(opts.out, csv);
    return 0;
}

int cmd_aggregate(const CommonOpts& opts, const std::string& samples, const std::string& meta,
                  const std::string& patient, const std::string& format, bool no_filter) {
    const PipelineConfig cfg = resolve_config(opts);
    LoadedPatient loaded = load_patient(samples, meta, patient, format);
    PatientRecord prepared =
        no_filter ? std::move(loaded.record) : apply_cascade(loaded.record, cfg.filter);
    HourlyGrid grid = hourly_mean(prepared, cfg.offset_for(prepared.meta.patient_id));
    const std::string csv = hourly_grid_csv(grid);
    if (opts.out.empty()) std::cout << csv;
    else write_text_file(opts.out, csv);
    return 0;
}

// render -------------------------------------------------------------------

int cmd_render(const CommonOpts& opts, const std::string& samples, const std::string& meta,
               const std::string& patient, const std::string& format,
               const std::string& annotations_file) {
    const PipelineConfig cfg = resolve_config(opts);
    const fs::path out_dir = require_out_dir(opts);
    LoadedPatient loaded = load_patient(samples, meta, patient, format);

    ProcessedPatient processed = process_record(loaded.record, cfg);
    std::vector<Annotation> annotations = annotations_for(
        annotations_file.empty() ? fs::path{} : fs::path(annotations_file),
        processed.meta.patient_id, cfg.offset_for(processed.meta.patient_id));
    std::vector<Diagnostic> warnings = std::move(processed.warnings);
    write_patient_artifacts(processed, cfg, chart_selection(opts.chart), annotations, out_dir,
                            &warnings);
    print_diagnostics(warnings);
    std::cout << "rendered " << processed.meta.patient_id << " to " << out_dir.string() << "\n";
    return 0;
}

// cohort -------------------------------------------------------------------

int cmd_cohort(const CommonOpts& opts, const std::string& in_dir) {
    const PipelineConfig cfg = resolve_config(opts);
    const fs::path out_dir = require_out_dir(opts);
    if (in_dir.empty()) throw ConfigError("--in is required for the cohort subcommand");

    MetaParseResult metas = parse_patient_meta_file(fs::path(in_dir) / "patients.csv");
    print_diagnostics(metas.diagnostics);

    std::vector<CohortInput> inputs;
    for (const PatientMeta& meta : metas.patients) {
        const fs::path sample_file = fs::path(in_dir) / (meta.patient_id + "_samples.csv");
        PatientRecord raw;
        if (fs::exists(sample_file)) {
            ParseResult parsed = parse_samples_file(sample_file);
            print_diagnostics(parsed.diagnostics);
            BuildResult built = build_record(meta, std::move(parsed.samples));
            print_diagnostics(built.diagnostics);
            raw = std::move(built.record);
        } else {
            raw.meta = meta;
            log_warn(meta.patient_id + ": no sample file, treated as zero-data");
        }
        ProcessedPatient processed = process_record(raw, cfg);
        print_diagnostics(processed.warnings);
        inputs.push_back({meta.patient_id, processed.days, processed.quality});
    }
    PipelineResult result = write_cohort_artifacts(std::move(inputs), cfg, out_dir);
    std::cout << "cohort artifacts for " << result.patients << " patients written to "
              << out_dir.string() << "\n";
    return 0;
}

// pipeline -----------------------------------------------------------------

int cmd_pipeline(const CommonOpts& opts) {
    const PipelineConfig cfg = resolve_config(opts);
    const fs::path out_dir = require_out_dir(opts);
    PipelineResult result = run_pipeline(cfg, out_dir, chart_selection(opts.chart));
    std::cout << "pipeline complete: " << result.patients << " patients, " << result.warnings
              << " warnings, artifacts in " << out_dir.string() << "\n";
    return 0;
}

int report_error(const char* type, const std::string& message, const std::string& out,
                 int code) {
    nlohmann::json report;
    report["error"] = {{"type", type}, {"message", message}};
    std::cerr << report.dump() << "\n";
    if (!out.empty()) {
        try {
            fs::create_directories(out);
            write_text_file(fs::path(out) / "error_report.json", report.dump(2) + "\n");
        } catch (...) {
            // the stderr report already carries the failure
        }
    }
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vitalband: wearable vital-sign filtering, hourly aggregation and SVG charts"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string samples, meta, patient, format = "long", annotations_file, in_dir;

    CLI::App* synth = app.add_subcommand("synth", "Write a synthetic cohort as CSV inputs");
    add_common_options(synth, opts);

    CLI::App* validate = app.add_subcommand("validate", "Parse a sample file and report diagnostics");
    add_common_options(validate, opts);
    validate->add_option("--samples", samples, "Sample CSV")->required();
    validate->add_option("--format", format, "long or wide")
        ->check(CLI::IsMember({"long", "wide"}));

    CLI::App* filter = app.add_subcommand("filter", "Run the cleansing cascade on one patient");
    add_common_options(filter, opts);
    filter->add_option("--samples", samples, "Sample CSV");
    filter->add_option("--meta", meta, "Patient metadata CSV");
    filter->add_option("--patient", patient, "Patient id when metadata lists several");
    filter->add_option("--format", format, "long or wide")->check(CLI::IsMember({"long", "wide"}));

    CLI::App* quality = app.add_subcommand("quality-report", "Per-signal mean quality before/after filtering");
    add_common_options(quality, opts);
    quality->add_option("--samples", samples, "Sample CSV");
    quality->add_option("--meta", meta, "Patient metadata CSV");
    quality->add_option("--patient", patient, "Patient id when metadata lists several");
    quality->add_option("--format", format, "long or wide")->check(CLI::IsMember({"long", "wide"}));

    CLI::App* aggregate = app.add_subcommand("aggregate", "Hourly mean grid as CSV");
    add_common_options(aggregate, opts);
    bool no_filter = false;
    aggregate->add_option("--samples", samples, "Sample CSV");
    aggregate->add_option("--meta", meta, "Patient metadata CSV");
    aggregate->add_option("--patient", patient, "Patient id when metadata lists several");
    aggregate->add_option("--format", format, "long or wide")
        ->check(CLI::IsMember({"long", "wide"}));
    aggregate->add_flag("--no-filter", no_filter, "Aggregate the raw record without filtering");

    CLI::App* render = app.add_subcommand("render", "Render heat map and/or bar chart SVGs");
    add_common_options(render, opts, /*with_chart=*/true);
    render->add_option("--samples", samples, "Sample CSV");
    render->add_option("--meta", meta, "Patient metadata CSV");
    render->add_option("--patient", patient, "Patient id when metadata lists several");
    render->add_option("--format", format, "long or wide")->check(CLI::IsMember({"long", "wide"}));
    render->add_option("--annotations", annotations_file, "Annotation CSV");

    CLI::App* cohort = app.add_subcommand("cohort", "Cohort statistics and summary charts");
    add_common_options(cohort, opts);
    cohort->add_option("--in", in_dir, "Directory with patients.csv and <id>_samples.csv files");

    CLI::App* pipeline = app.add_subcommand("pipeline", "Synthetic cohort end to end");
    add_common_options(pipeline, opts, /*with_chart=*/true);

    CLI::App* schema = app.add_subcommand("schema", "Print the default config as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (synth->parsed()) return cmd_synth(opts);
        if (validate->parsed()) return cmd_validate(opts, samples, format);
        if (filter->parsed()) return cmd_filter(opts, samples, meta, patient, format);
        if (quality->parsed()) return cmd_quality_report(opts, samples, meta, patient, format);
        if (aggregate->parsed())
            return cmd_aggregate(opts, samples, meta, patient, format, no_filter);
        if (render->parsed())
            return cmd_render(opts, samples, meta, patient, format, annotations_file);
        if (cohort->parsed()) return cmd_cohort(opts, in_dir);
        if (pipeline->parsed()) return cmd_pipeline(opts);
        if (schema->parsed()) {
            std::cout << config_schema_json();
            return 0;
        }
    } catch (const ConfigError& e) {
        return report_error("config", e.what(), opts.out, 2);
    } catch (const IoError& e) {
        return report_error("io", e.what(), opts.out, 1);
    } catch (const FormatError& e) {
        return report_error("format", e.what(), opts.out, 1);
    } catch (const std::exception& e) {
        return report_error("internal", e.what(), opts.out, 1);
    }
    return 0;
}
