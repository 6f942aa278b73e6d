#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "vitalband/types.hpp"

namespace vitalband {

enum class SampleFormat {
    long_form, // timestamp,signal,value,quality
    wide_form, // timestamp,<sig>,<sig>_quality,... one row per second
};

struct ParseResult {
    std::vector<VitalSample> samples;
    std::vector<Diagnostic> diagnostics;
};

// Parses sample rows, preserving input order. Malformed rows become
// diagnostics; more than 50% malformed data rows raises FormatError.
ParseResult parse_samples_csv(std::istream& in, SampleFormat format = SampleFormat::long_form);
ParseResult parse_samples_file(const std::filesystem::path& path,
                               SampleFormat format = SampleFormat::long_form);

// Canonical long-form CSV with header, epoch-second timestamps and
// shortest-round-trip values.
std::string serialize_samples_csv(const std::vector<VitalSample>& samples);

// Record flattened back to rows in canonical (signal, timestamp) order.
std::vector<VitalSample> flatten_record(const PatientRecord& record);

struct BuildResult {
    PatientRecord record;
    std::vector<Diagnostic> diagnostics;
};

// Groups samples by signal, sorts by timestamp and repairs duplicates
// (last occurrence wins, one diagnostic per dropped sample).
BuildResult build_record(PatientMeta meta, std::vector<VitalSample> samples);

struct MetaParseResult {
    std::vector<PatientMeta> patients;
    std::vector<Diagnostic> diagnostics;
};

// Header: patient_id,admission_start,admission_end,age,sex.
// Timestamps may be ISO-8601 or epoch seconds.
MetaParseResult parse_patient_meta_csv(std::istream& in);
MetaParseResult parse_patient_meta_file(const std::filesystem::path& path);

struct AnnotationRow {
    std::string patient_id;
    std::int64_t timestamp = 0;
    std::string text;
};

struct AnnotationParseResult {
    std::vector<AnnotationRow> rows;
    std::vector<Diagnostic> diagnostics;
};

// Header: patient_id,timestamp,text.
AnnotationParseResult parse_annotations_csv(std::istream& in);
AnnotationParseResult parse_annotations_file(const std::filesystem::path& path);

std::string serialize_annotations_csv(const std::vector<AnnotationRow>& rows);
std::string serialize_patient_meta_csv(const std::vector<PatientMeta>& patients);

} // namespace vitalband
