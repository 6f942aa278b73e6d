#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vitalband {

// Marks a sample whose signal has no quality channel.
inline constexpr std::int16_t kNoQuality = -1;

// The five core wearable channels plus opaque pass-through channels for the
// rest of the device's signal set.
class SignalId {
public:
    enum class Core : std::uint8_t { HR, HRV, RR, SPO2, TEMP };

    SignalId() : SignalId(Core::HR) {}
    SignalId(Core core); // NOLINT(google-explicit-constructor) - core ids convert freely

    static SignalId other(std::string name);

    // Core abbreviations are matched case-insensitively; any other non-empty
    // name becomes a non-core channel.
    static std::optional<SignalId> parse(std::string_view name);

    bool is_core() const { return core_.has_value(); }
    std::optional<Core> core() const { return core_; }

    // Canonical display name: "HR", "HRV", "RR", "SPO2", "Temp" or the raw
    // channel name for non-core signals.
    const std::string& name() const { return name_; }
    const std::string& sort_key() const { return sort_key_; }

    friend bool operator==(const SignalId& a, const SignalId& b) {
        return a.sort_key_ == b.sort_key_;
    }
    // Band order along the y axis: alphabetical by abbreviation, case-insensitive.
    friend bool operator<(const SignalId& a, const SignalId& b) {
        return a.sort_key_ < b.sort_key_;
    }

private:
    SignalId(std::optional<Core> core, std::string name);

    std::optional<Core> core_;
    std::string name_;
    std::string sort_key_; // lower-cased name
};

// Render order: HR, HRV, RR, SPO2, Temp.
const std::vector<SignalId>& core_signals();

// Physical unit of a core signal, empty for non-core channels.
std::string_view signal_unit(const SignalId& id);

// One parsed input row.
struct VitalSample {
    std::int64_t timestamp = 0; // UTC seconds since epoch
    SignalId signal;
    double value = 0.0;
    std::int16_t quality = kNoQuality; // percent in [0,100], kNoQuality if absent
};

// Per-signal series element; the signal is the enclosing map key.
struct Sample {
    std::int64_t timestamp = 0;
    double value = 0.0;
    std::int16_t quality = kNoQuality;
};

enum class Sex : std::uint8_t { unknown, female, male, other };

std::string_view sex_name(Sex s);
Sex parse_sex(std::string_view s);

struct PatientMeta {
    std::string patient_id;
    std::int64_t admission_start = 0;
    std::int64_t admission_end = 0;
    std::optional<int> age;
    Sex sex = Sex::unknown;

    double admitted_days() const {
        return static_cast<double>(admission_end - admission_start) / 86400.0;
    }
};

// Validated in-memory recording: per-signal series with strictly increasing
// timestamps and at most one sample per (signal, second).
struct PatientRecord {
    PatientMeta meta;
    std::map<SignalId, std::vector<Sample>> series;

    std::size_t sample_count() const;
    const std::vector<Sample>* find(const SignalId& id) const;
    bool empty() const { return sample_count() == 0; }
};

struct Diagnostic {
    std::size_t line = 0; // 1-based input line, 0 when not tied to a line
    std::string message;
};

struct Annotation {
    std::int64_t hour = 0; // absolute local hour index
    std::string text;
    bool emphasis = false;
};

} // namespace vitalband
