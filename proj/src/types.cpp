#include "vitalband/types.hpp"

#include "vitalband/text.hpp"

namespace vitalband {

namespace {

const char* core_name(SignalId::Core core) {
    switch (core) {
        case SignalId::Core::HR: return "HR";
        case SignalId::Core::HRV: return "HRV";
        case SignalId::Core::RR: return "RR";
        case SignalId::Core::SPO2: return "SPO2";
        case SignalId::Core::TEMP: return "Temp";
    }
    return "HR";
}

} // namespace

SignalId::SignalId(Core core) : SignalId(core, core_name(core)) {}

SignalId::SignalId(std::optional<Core> core, std::string name)
    : core_(core), name_(std::move(name)), sort_key_(to_lower(name_)) {}

SignalId SignalId::other(std::string name) {
    return SignalId(std::nullopt, std::move(name));
}

std::optional<SignalId> SignalId::parse(std::string_view name) {
    name = trim(name);
    if (name.empty()) return std::nullopt;
    for (const SignalId& core : core_signals()) {
        if (iequals(name, core.name())) return core;
    }
    return SignalId::other(std::string(name));
}

const std::vector<SignalId>& core_signals() {
    static const std::vector<SignalId> ids = {
        SignalId(SignalId::Core::HR),   SignalId(SignalId::Core::HRV),
        SignalId(SignalId::Core::RR),   SignalId(SignalId::Core::SPO2),
        SignalId(SignalId::Core::TEMP),
    };
    return ids;
}

std::string_view signal_unit(const SignalId& id) {
    if (!id.core()) return "";
    switch (*id.core()) {
        case SignalId::Core::HR: return "bpm";
        case SignalId::Core::HRV: return "ms";
        case SignalId::Core::RR: return "br/min";
        case SignalId::Core::SPO2: return "%";
        case SignalId::Core::TEMP: return "°C";
    }
    return "";
}

std::string_view sex_name(Sex s) {
    switch (s) {
        case Sex::female: return "f";
        case Sex::male: return "m";
        case Sex::other: return "other";
        case Sex::unknown: break;
    }
    return "";
}

Sex parse_sex(std::string_view s) {
    s = trim(s);
    if (iequals(s, "f") || iequals(s, "female")) return Sex::female;
    if (iequals(s, "m") || iequals(s, "male")) return Sex::male;
    if (s.empty()) return Sex::unknown;
    return Sex::other;
}

std::size_t PatientRecord::sample_count() const {
    std::size_t n = 0;
    for (const auto& [id, samples] : series) n += samples.size();
    return n;
}

const std::vector<Sample>* PatientRecord::find(const SignalId& id) const {
    auto it = series.find(id);
    return it == series.end() ? nullptr : &it->second;
}

} // namespace vitalband
