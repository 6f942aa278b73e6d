#include "vitalband/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vitalband/errors.hpp"
#include "vitalband/text.hpp"
#include "vitalband/time_util.hpp"

namespace vitalband {

namespace {

constexpr std::string_view kLongHeader = "timestamp,signal,value,quality";

std::optional<std::int16_t> parse_quality_field(std::string_view field, std::string* error) {
    field = trim(field);
    if (field.empty()) return kNoQuality;
    auto q = parse_int(field);
    if (!q || *q < 0 || *q > 100) {
        *error = "quality out of range [0,100]";
        return std::nullopt;
    }
    return static_cast<std::int16_t>(*q);
}

// Returns false and sets error for a malformed row.
bool parse_long_row(const std::vector<std::string>& fields, VitalSample& out, std::string* error) {
    if (fields.size() < 3 || fields.size() > 4) {
        *error = "expected 3 or 4 fields";
        return false;
    }
    auto ts = parse_timestamp(fields[0]);
    if (!ts) {
        *error = "bad timestamp";
        return false;
    }
    auto signal = SignalId::parse(fields[1]);
    if (!signal) {
        *error = "missing signal name";
        return false;
    }
    auto value = parse_double(fields[2]);
    if (!value) {
        *error = "bad value";
        return false;
    }
    if (!std::isfinite(*value)) {
        *error = "non-finite value";
        return false;
    }
    std::int16_t quality = kNoQuality;
    if (fields.size() == 4) {
        auto q = parse_quality_field(fields[3], error);
        if (!q) return false;
        quality = *q;
    }
    out = VitalSample{*ts, *signal, *value, quality};
    return true;
}

struct WideColumn {
    SignalId signal;
    int value_col = -1;
    int quality_col = -1;
};

std::vector<WideColumn> plan_wide_columns(const std::vector<std::string>& header) {
    std::vector<WideColumn> plan;
    for (std::size_t i = 1; i < header.size(); ++i) {
        std::string name(trim(header[i]));
        std::string lower = to_lower(name);
        constexpr std::string_view suffix = "_quality";
        if (lower.size() > suffix.size() &&
            lower.compare(lower.size() - suffix.size(), suffix.size(), suffix) == 0) {
            std::string base = name.substr(0, name.size() - suffix.size());
            auto id = SignalId::parse(base);
            if (!id) continue;
            for (auto& col : plan) {
                if (col.signal == *id) {
                    col.quality_col = static_cast<int>(i);
                    break;
                }
            }
            continue;
        }
        auto id = SignalId::parse(name);
        if (!id) continue;
        plan.push_back(WideColumn{*id, static_cast<int>(i), -1});
    }
    return plan;
}

} // namespace

ParseResult parse_samples_csv(std::istream& in, SampleFormat format) {
    if (!in.good()) throw IoError("unreadable sample stream");

    ParseResult result;
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw FormatError("empty sample input");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = split_csv_line(line);

    std::vector<WideColumn> wide_plan;
    if (format == SampleFormat::long_form) {
        if (!iequals(trim(line), kLongHeader))
            throw FormatError("expected header '" + std::string(kLongHeader) + "', got '" + line +
                              "'");
    } else {
        if (header.empty() || !iequals(trim(header[0]), "timestamp"))
            throw FormatError("wide format header must start with 'timestamp'");
        wide_plan = plan_wide_columns(header);
        if (wide_plan.empty()) throw FormatError("wide format header declares no signal columns");
    }

    std::size_t data_rows = 0;
    std::size_t bad_rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        ++data_rows;
        std::vector<std::string> fields = split_csv_line(line);
        std::string error;

        if (format == SampleFormat::long_form) {
            VitalSample sample;
            if (parse_long_row(fields, sample, &error)) {
                result.samples.push_back(std::move(sample));
            } else {
                ++bad_rows;
                result.diagnostics.push_back({line_no, error});
            }
            continue;
        }

        auto ts = parse_timestamp(fields.empty() ? "" : fields[0]);
        if (!ts) {
            ++bad_rows;
            result.diagnostics.push_back({line_no, "bad timestamp"});
            continue;
        }
        bool row_ok = true;
        std::vector<VitalSample> row_samples;
        for (const WideColumn& col : wide_plan) {
            if (col.value_col >= static_cast<int>(fields.size())) continue;
            std::string_view cell = trim(fields[col.value_col]);
            if (cell.empty()) continue;
            auto value = parse_double(cell);
            if (!value || !std::isfinite(*value)) {
                error = !value ? "bad value" : "non-finite value";
                row_ok = false;
                break;
            }
            std::int16_t quality = kNoQuality;
            if (col.quality_col >= 0 && col.quality_col < static_cast<int>(fields.size())) {
                auto q = parse_quality_field(fields[col.quality_col], &error);
                if (!q) {
                    row_ok = false;
                    break;
                }
                quality = *q;
            }
            row_samples.push_back(VitalSample{*ts, col.signal, *value, quality});
        }
        if (row_ok) {
            result.samples.insert(result.samples.end(), row_samples.begin(), row_samples.end());
        } else {
            ++bad_rows;
            result.diagnostics.push_back({line_no, error});
        }
    }

    if (in.bad()) throw IoError("read failure in sample stream");
    if (data_rows > 0 && bad_rows * 2 > data_rows)
        throw FormatError("more than half of the rows are malformed (" + std::to_string(bad_rows) +
                          " of " + std::to_string(data_rows) + "); wrong file or format?");
    return result;
}

ParseResult parse_samples_file(const std::filesystem::path& path, SampleFormat format) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_samples_csv(in, format);
}

std::string serialize_samples_csv(const std::vector<VitalSample>& samples) {
    std::string out;
    out.reserve(32 * samples.size() + 32);
    out += kLongHeader;
    out += '\n';
    for (const VitalSample& s : samples) {
        out += std::to_string(s.timestamp);
        out += ',';
        out += s.signal.name();
        out += ',';
        out += fmt_shortest(s.value);
        out += ',';
        if (s.quality != kNoQuality) out += std::to_string(s.quality);
        out += '\n';
    }
    return out;
}

std::vector<VitalSample> flatten_record(const PatientRecord& record) {
    std::vector<VitalSample> out;
    out.reserve(record.sample_count());
    for (const auto& [id, samples] : record.series) {
        for (const Sample& s : samples) out.push_back(VitalSample{s.timestamp, id, s.value, s.quality});
    }
    return out;
}

BuildResult build_record(PatientMeta meta, std::vector<VitalSample> samples) {
    BuildResult result;
    result.record.meta = std::move(meta);

    auto& series = result.record.series;
    for (VitalSample& s : samples) {
        series[s.signal].push_back(Sample{s.timestamp, s.value, s.quality});
    }
    for (auto& [id, sig_samples] : series) {
        std::stable_sort(sig_samples.begin(), sig_samples.end(),
                         [](const Sample& a, const Sample& b) { return a.timestamp < b.timestamp; });
        // Last occurrence wins for duplicate seconds.
        std::vector<Sample> deduped;
        deduped.reserve(sig_samples.size());
        for (std::size_t i = 0; i < sig_samples.size(); ++i) {
            if (i + 1 < sig_samples.size() &&
                sig_samples[i + 1].timestamp == sig_samples[i].timestamp) {
                result.diagnostics.push_back(
                    {0, "duplicate sample for " + id.name() + " at t=" +
                            std::to_string(sig_samples[i].timestamp) + ", keeping the last"});
                continue;
            }
            deduped.push_back(sig_samples[i]);
        }
        sig_samples = std::move(deduped);
    }
    return result;
}

MetaParseResult parse_patient_meta_csv(std::istream& in) {
    if (!in.good()) throw IoError("unreadable metadata stream");
    MetaParseResult result;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw FormatError("empty metadata input");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!iequals(trim(line), "patient_id,admission_start,admission_end,age,sex"))
        throw FormatError("expected header 'patient_id,admission_start,admission_end,age,sex'");

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 5) {
            result.diagnostics.push_back({line_no, "expected 5 fields"});
            continue;
        }
        PatientMeta meta;
        meta.patient_id = std::string(trim(fields[0]));
        if (meta.patient_id.empty()) {
            result.diagnostics.push_back({line_no, "empty patient_id"});
            continue;
        }
        auto start = parse_timestamp(fields[1]);
        auto end = parse_timestamp(fields[2]);
        if (!start || !end) {
            result.diagnostics.push_back({line_no, "bad admission timestamp"});
            continue;
        }
        if (*start >= *end) {
            result.diagnostics.push_back({line_no, "admission_start must precede admission_end"});
            continue;
        }
        meta.admission_start = *start;
        meta.admission_end = *end;
        if (!trim(fields[3]).empty()) {
            auto age = parse_int(fields[3]);
            if (!age || *age < 0 || *age > 150) {
                result.diagnostics.push_back({line_no, "bad age"});
                continue;
            }
            meta.age = static_cast<int>(*age);
        }
        meta.sex = parse_sex(fields[4]);
        result.patients.push_back(std::move(meta));
    }
    if (in.bad()) throw IoError("read failure in metadata stream");
    return result;
}

MetaParseResult parse_patient_meta_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_patient_meta_csv(in);
}

AnnotationParseResult parse_annotations_csv(std::istream& in) {
    if (!in.good()) throw IoError("unreadable annotation stream");
    AnnotationParseResult result;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw FormatError("empty annotation input");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!iequals(trim(line), "patient_id,timestamp,text"))
        throw FormatError("expected header 'patient_id,timestamp,text'");

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() < 3) {
            result.diagnostics.push_back({line_no, "expected 3 fields"});
            continue;
        }
        auto ts = parse_timestamp(fields[1]);
        if (!ts) {
            result.diagnostics.push_back({line_no, "bad timestamp"});
            continue;
        }
        result.rows.push_back({std::string(trim(fields[0])), *ts, fields[2]});
    }
    if (in.bad()) throw IoError("read failure in annotation stream");
    return result;
}

AnnotationParseResult parse_annotations_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_annotations_csv(in);
}

std::string serialize_annotations_csv(const std::vector<AnnotationRow>& rows) {
    std::string out = "patient_id,timestamp,text\n";
    for (const AnnotationRow& row : rows) {
        out += csv_escape(row.patient_id);
        out += ',';
        out += std::to_string(row.timestamp);
        out += ',';
        out += csv_escape(row.text);
        out += '\n';
    }
    return out;
}

std::string serialize_patient_meta_csv(const std::vector<PatientMeta>& patients) {
    std::string out = "patient_id,admission_start,admission_end,age,sex\n";
    for (const PatientMeta& meta : patients) {
        out += csv_escape(meta.patient_id);
        out += ',';
        out += std::to_string(meta.admission_start);
        out += ',';
        out += std::to_string(meta.admission_end);
        out += ',';
        if (meta.age) out += std::to_string(*meta.age);
        out += ',';
        out += sex_name(meta.sex);
        out += '\n';
    }
    return out;
}

} // namespace vitalband
