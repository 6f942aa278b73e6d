#include "vitalband/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vitalband/errors.hpp"
#include "vitalband/text.hpp"
#include "vitalband/time_util.hpp"

namespace vitalband {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

void reject_unknown_keys(const json& obj, const std::string& scope,
                         const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) fail("unknown config key '" + scope + key + "'");
    }
}

double get_number(const json& obj, const std::string& scope, const std::string& key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) fail("config key '" + scope + key + "' must be a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& scope, const std::string& key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) fail("config key '" + scope + key + "' must be an integer");
    return obj[key].get<int>();
}

bool get_bool(const json& obj, const std::string& scope, const std::string& key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) fail("config key '" + scope + key + "' must be a boolean");
    return obj[key].get<bool>();
}

std::string get_string(const json& obj, const std::string& scope, const std::string& key,
                       const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) fail("config key '" + scope + key + "' must be a string");
    return obj[key].get<std::string>();
}

Color get_color(const json& obj, const std::string& scope, const std::string& key,
                Color fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) fail("config key '" + scope + key + "' must be a hex string");
    auto color = Color::from_hex(obj[key].get<std::string>());
    if (!color) fail("config key '" + scope + key + "' must look like \"#RRGGBB\"");
    return *color;
}

SignalId parse_signal_key(const std::string& key, const std::string& scope) {
    auto id = SignalId::parse(key);
    if (!id) fail("empty signal name under '" + scope + "'");
    return *id;
}

void parse_filter(const json& obj, FilterConfig& filter) {
    reject_unknown_keys(obj, "filter.",
                        {"quality_threshold", "require_hr_presence", "crop_to_admission"});
    filter.quality_threshold = get_int(obj, "filter.", "quality_threshold", filter.quality_threshold);
    filter.require_hr_presence =
        get_bool(obj, "filter.", "require_hr_presence", filter.require_hr_presence);
    filter.crop_to_admission =
        get_bool(obj, "filter.", "crop_to_admission", filter.crop_to_admission);
}

void parse_palette(const json& obj, Palette& palette) {
    reject_unknown_keys(obj, "palette.", {"blue", "green", "yellow", "red", "white", "missing"});
    palette.blue = get_color(obj, "palette.", "blue", palette.blue);
    palette.green = get_color(obj, "palette.", "green", palette.green);
    palette.yellow = get_color(obj, "palette.", "yellow", palette.yellow);
    palette.red = get_color(obj, "palette.", "red", palette.red);
    palette.white = get_color(obj, "palette.", "white", palette.white);
    palette.missing = get_color(obj, "palette.", "missing", palette.missing);
}

void parse_layout(const json& obj, ChartLayout& layout) {
    reject_unknown_keys(obj, "layout.",
                        {"cell_width_px", "band_height_px", "band_gap_px", "margin_left_px",
                         "margin_right_px", "margin_top_px", "margin_bottom_px", "background",
                         "font_family", "font_size_px", "label_font_size_px", "show_colorbar",
                         "bar_up", "bar_down", "ma_line", "moving_average_hours"});
    layout.cell_width_px = get_number(obj, "layout.", "cell_width_px", layout.cell_width_px);
    layout.band_height_px = get_number(obj, "layout.", "band_height_px", layout.band_height_px);
    layout.band_gap_px = get_number(obj, "layout.", "band_gap_px", layout.band_gap_px);
    layout.margin_left_px = get_number(obj, "layout.", "margin_left_px", layout.margin_left_px);
    layout.margin_right_px = get_number(obj, "layout.", "margin_right_px", layout.margin_right_px);
    layout.margin_top_px = get_number(obj, "layout.", "margin_top_px", layout.margin_top_px);
    layout.margin_bottom_px =
        get_number(obj, "layout.", "margin_bottom_px", layout.margin_bottom_px);
    layout.background = get_color(obj, "layout.", "background", layout.background);
    layout.font_family = get_string(obj, "layout.", "font_family", layout.font_family);
    layout.font_size_px = get_number(obj, "layout.", "font_size_px", layout.font_size_px);
    layout.label_font_size_px =
        get_number(obj, "layout.", "label_font_size_px", layout.label_font_size_px);
    layout.show_colorbar = get_bool(obj, "layout.", "show_colorbar", layout.show_colorbar);
    layout.bar_up = get_color(obj, "layout.", "bar_up", layout.bar_up);
    layout.bar_down = get_color(obj, "layout.", "bar_down", layout.bar_down);
    layout.ma_line = get_color(obj, "layout.", "ma_line", layout.ma_line);
    layout.moving_average_hours =
        get_int(obj, "layout.", "moving_average_hours", layout.moving_average_hours);
}

void parse_ticks(const json& obj, TickRule& rule) {
    reject_unknown_keys(obj, "ticks.", {"thresholds_hours", "strides"});
    if (obj.contains("thresholds_hours")) {
        const json& arr = obj["thresholds_hours"];
        if (!arr.is_array() || arr.size() != rule.thresholds_hours.size())
            fail("ticks.thresholds_hours must be an array of 3 numbers");
        for (std::size_t i = 0; i < rule.thresholds_hours.size(); ++i)
            rule.thresholds_hours[i] = arr[i].get<double>();
    }
    if (obj.contains("strides")) {
        const json& arr = obj["strides"];
        if (!arr.is_array() || arr.size() != rule.strides.size())
            fail("ticks.strides must be an array of 4 integers");
        for (std::size_t i = 0; i < rule.strides.size(); ++i)
            rule.strides[i] = arr[i].get<int>();
    }
}

void parse_scales(const json& obj, std::map<SignalId, PipelineConfig::ScaleSpec>& specs) {
    for (const auto& [key, value] : obj.items()) {
        const SignalId id = parse_signal_key(key, "scales");
        const std::string scope = "scales." + key + ".";
        if (!value.is_object()) fail("'" + scope + "' must be an object");
        reject_unknown_keys(value, scope, {"scheme", "mode", "steps", "inverted", "anchors"});
        PipelineConfig::ScaleSpec spec;
        const std::string scheme = get_string(value, scope, "scheme", "RYGB");
        auto name = parse_scheme_name(scheme);
        if (!name) fail("unknown scheme '" + scheme + "' under '" + scope + "'");
        spec.scheme = *name;
        const std::string mode = get_string(value, scope, "mode", "continuous");
        if (iequals(mode, "continuous")) spec.mode = ScaleMode::continuous;
        else if (iequals(mode, "discrete")) spec.mode = ScaleMode::discrete;
        else fail("scale mode must be 'continuous' or 'discrete' under '" + scope + "'");
        spec.steps = get_int(value, scope, "steps", 5);
        spec.inverted = get_bool(value, scope, "inverted", false);
        if (value.contains("anchors")) {
            const json& arr = value["anchors"];
            if (!arr.is_array() || arr.size() < 2)
                fail("'" + scope + "anchors' must be an array of [position, \"#RRGGBB\"] pairs");
            for (const json& entry : arr) {
                if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
                    !entry[1].is_string())
                    fail("'" + scope + "anchors' entries must be [position, \"#RRGGBB\"]");
                auto color = Color::from_hex(entry[1].get<std::string>());
                if (!color) fail("bad anchor color under '" + scope + "'");
                spec.anchors.emplace_back(entry[0].get<double>(), *color);
            }
        }
        specs[id] = std::move(spec);
    }
}

void parse_ranges(const json& obj, RangeConfig& ranges) {
    for (const auto& [key, value] : obj.items()) {
        const SignalId id = parse_signal_key(key, "ranges");
        const std::string scope = "ranges." + key + ".";
        if (!value.is_object()) fail("'" + scope + "' must be an object");
        reject_unknown_keys(value, scope, {"vmin", "vmax", "baseline", "direction"});
        RangeOverride ov;
        if (value.contains("vmin")) ov.vmin = get_number(value, scope, "vmin", 0);
        if (value.contains("vmax")) ov.vmax = get_number(value, scope, "vmax", 0);
        if (value.contains("baseline")) ov.baseline = get_number(value, scope, "baseline", 0);
        if (value.contains("direction")) {
            auto dir = parse_direction(get_string(value, scope, "direction", ""));
            if (!dir) fail("bad direction under '" + scope + "'");
            ov.direction = dir;
        }
        ranges.overrides[id] = ov;
    }
}

void parse_levels(const json& obj, std::map<SignalId, SignalLevel>& levels) {
    for (const auto& [key, value] : obj.items()) {
        const SignalId id = parse_signal_key(key, "synth.levels");
        const std::string scope = "synth.levels." + key + ".";
        if (!value.is_object()) fail("'" + scope + "' must be an object");
        reject_unknown_keys(value, scope,
                            {"level", "circadian_amplitude", "noise_amplitude", "has_quality"});
        SignalLevel lvl = levels.count(id) ? levels[id] : SignalLevel{};
        lvl.level = get_number(value, scope, "level", lvl.level);
        lvl.circadian_amplitude =
            get_number(value, scope, "circadian_amplitude", lvl.circadian_amplitude);
        lvl.noise_amplitude = get_number(value, scope, "noise_amplitude", lvl.noise_amplitude);
        lvl.has_quality = get_bool(value, scope, "has_quality", lvl.has_quality);
        levels[id] = lvl;
    }
}

void parse_synth(const json& obj, SynthConfig& synth) {
    reject_unknown_keys(obj, "synth.", {"patients", "seed", "mix", "max_duration_days", "levels"});
    synth.patients = get_int(obj, "synth.", "patients", synth.patients);
    if (obj.contains("seed")) {
        if (!obj["seed"].is_number_unsigned() && !obj["seed"].is_number_integer())
            fail("synth.seed must be an integer");
        synth.seed = obj["seed"].get<std::uint64_t>();
    }
    synth.max_duration_days =
        get_number(obj, "synth.", "max_duration_days", synth.max_duration_days);
    if (obj.contains("mix")) {
        const json& mix = obj["mix"];
        reject_unknown_keys(mix, "synth.mix.", {"typical", "complication", "stress", "zero_data"});
        synth.mix.typical = get_number(mix, "synth.mix.", "typical", synth.mix.typical);
        synth.mix.complication =
            get_number(mix, "synth.mix.", "complication", synth.mix.complication);
        synth.mix.stress = get_number(mix, "synth.mix.", "stress", synth.mix.stress);
        synth.mix.zero_data = get_number(mix, "synth.mix.", "zero_data", synth.mix.zero_data);
    }
    if (obj.contains("levels")) parse_levels(obj["levels"], synth.levels);
}

void validate_anchors(const std::vector<std::pair<double, Color>>& anchors, ScaleKind kind,
                      const std::string& name) {
    if (anchors.size() < 2) fail("scale '" + name + "': need at least two anchors");
    if (anchors.front().first != 0.0 || anchors.back().first != 1.0)
        fail("scale '" + name + "': anchors must start at 0.0 and end at 1.0");
    bool has_center = false;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        if (i > 0 && anchors[i].first <= anchors[i - 1].first)
            fail("scale '" + name + "': anchor positions must be strictly increasing");
        if (anchors[i].first == 0.5) has_center = true;
    }
    if (kind == ScaleKind::diverging && !has_center)
        fail("scale '" + name + "': diverging scales need a center anchor at 0.5");
}

} // namespace

std::int32_t PipelineConfig::offset_for(const std::string& patient_id) const {
    const auto it = timezone_offsets.find(patient_id);
    return it == timezone_offsets.end() ? utc_offset_seconds : it->second;
}

ScaleSet PipelineConfig::scales() const {
    ScaleSet set = default_scales(palette);
    for (const auto& [id, spec] : scale_specs) {
        ColorScale scale = make_named_scale(spec.scheme, spec.mode, spec.inverted, spec.steps, palette);
        if (!spec.anchors.empty()) scale.anchors = spec.anchors;
        set.scales[id] = std::move(scale);
    }
    return set;
}

void PipelineConfig::validate() const {
    filter.validate();
    ranges.validate();
    layout.validate();
    for (std::size_t i = 0; i < layout.tick_rule.strides.size(); ++i) {
        if (layout.tick_rule.strides[i] < 1) fail("tick strides must be positive");
    }
    for (std::size_t i = 1; i < layout.tick_rule.thresholds_hours.size(); ++i) {
        if (layout.tick_rule.thresholds_hours[i] <= layout.tick_rule.thresholds_hours[i - 1])
            fail("tick thresholds must be increasing");
    }
    for (const auto& [id, spec] : scale_specs) {
        if (spec.mode == ScaleMode::discrete && spec.steps != 3 && spec.steps != 5 &&
            spec.steps != 7 && spec.steps != 9)
            fail("scale '" + id.name() + "': discrete steps must be one of 3, 5, 7, 9");
        if (!spec.anchors.empty())
            validate_anchors(spec.anchors, scheme_kind(spec.scheme), id.name());
    }
    if (synth.patients < 1) fail("synth.patients must be >= 1");
    if (synth.max_duration_days < 2) fail("synth.max_duration_days must be >= 2");
    if (jobs < 0) fail("jobs must be >= 0");
}

PipelineConfig parse_config_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) fail("config root must be a JSON object");
    reject_unknown_keys(root, "",
                        {"timezone_offset", "timezone_offsets", "anonymize_dates", "jobs",
                         "filter", "palette", "layout", "ticks", "scales", "ranges", "synth"});

    auto offset_of = [](const json& tz, const std::string& key) {
        std::optional<std::int32_t> offset;
        if (tz.is_string()) offset = parse_utc_offset(tz.get<std::string>());
        else if (tz.is_number_integer()) offset = parse_utc_offset(std::to_string(tz.get<int>()));
        if (!offset) fail("'" + key + "' must be \"+HH:MM\", \"-HH:MM\" or integer minutes");
        return *offset;
    };

    PipelineConfig cfg;
    if (root.contains("timezone_offset"))
        cfg.utc_offset_seconds = offset_of(root["timezone_offset"], "timezone_offset");
    if (root.contains("timezone_offsets")) {
        const json& overrides = root["timezone_offsets"];
        if (!overrides.is_object()) fail("timezone_offsets must map patient ids to offsets");
        for (const auto& [id, tz] : overrides.items()) {
            if (id.empty()) fail("timezone_offsets: empty patient id");
            cfg.timezone_offsets[id] = offset_of(tz, "timezone_offsets." + id);
        }
    }
    cfg.layout.date_mode = get_bool(root, "", "anonymize_dates", true) ? DateMode::anonymized
                                                                       : DateMode::absolute;
    cfg.jobs = get_int(root, "", "jobs", cfg.jobs);
    if (root.contains("filter")) parse_filter(root["filter"], cfg.filter);
    if (root.contains("palette")) parse_palette(root["palette"], cfg.palette);
    if (root.contains("layout")) parse_layout(root["layout"], cfg.layout);
    if (root.contains("ticks")) parse_ticks(root["ticks"], cfg.layout.tick_rule);
    if (root.contains("scales")) parse_scales(root["scales"], cfg.scale_specs);
    if (root.contains("ranges")) parse_ranges(root["ranges"], cfg.ranges);
    if (root.contains("synth")) parse_synth(root["synth"], cfg.synth);

    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path, bool allow_missing) {
    std::ifstream in(path);
    if (!in) {
        if (allow_missing) return PipelineConfig{};
        throw IoError("cannot open config " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_json(buffer.str());
}

std::string config_schema_json() {
    const PipelineConfig cfg;
    json root;
    root["timezone_offset"] = "+00:00";
    root["timezone_offsets"] = json::object();
    root["anonymize_dates"] = cfg.layout.date_mode == DateMode::anonymized;
    root["jobs"] = cfg.jobs;
    root["filter"] = {{"quality_threshold", cfg.filter.quality_threshold},
                      {"require_hr_presence", cfg.filter.require_hr_presence},
                      {"crop_to_admission", cfg.filter.crop_to_admission}};
    root["palette"] = {{"blue", cfg.palette.blue.to_hex()},
                       {"green", cfg.palette.green.to_hex()},
                       {"yellow", cfg.palette.yellow.to_hex()},
                       {"red", cfg.palette.red.to_hex()},
                       {"white", cfg.palette.white.to_hex()},
                       {"missing", cfg.palette.missing.to_hex()}};
    root["layout"] = {{"cell_width_px", cfg.layout.cell_width_px},
                      {"band_height_px", cfg.layout.band_height_px},
                      {"band_gap_px", cfg.layout.band_gap_px},
                      {"margin_left_px", cfg.layout.margin_left_px},
                      {"margin_right_px", cfg.layout.margin_right_px},
                      {"margin_top_px", cfg.layout.margin_top_px},
                      {"margin_bottom_px", cfg.layout.margin_bottom_px},
                      {"background", cfg.layout.background.to_hex()},
                      {"font_family", cfg.layout.font_family},
                      {"font_size_px", cfg.layout.font_size_px},
                      {"label_font_size_px", cfg.layout.label_font_size_px},
                      {"show_colorbar", cfg.layout.show_colorbar},
                      {"bar_up", cfg.layout.bar_up.to_hex()},
                      {"bar_down", cfg.layout.bar_down.to_hex()},
                      {"ma_line", cfg.layout.ma_line.to_hex()},
                      {"moving_average_hours", cfg.layout.moving_average_hours}};
    root["ticks"] = {{"thresholds_hours", cfg.layout.tick_rule.thresholds_hours},
                     {"strides", cfg.layout.tick_rule.strides}};
    json scales = json::object();
    scales["HR"] = {{"scheme", "RYGB"}, {"mode", "continuous"}, {"steps", 5}, {"inverted", false}};
    scales["HRV"] = {{"scheme", "GB"}, {"mode", "continuous"}, {"steps", 5}, {"inverted", false}};
    scales["RR"] = {{"scheme", "RYGB"}, {"mode", "continuous"}, {"steps", 5}, {"inverted", false}};
    scales["SPO2"] = {{"scheme", "GB"}, {"mode", "continuous"}, {"steps", 5}, {"inverted", true}};
    scales["Temp"] = {{"scheme", "RYGB"}, {"mode", "continuous"}, {"steps", 5}, {"inverted", false}};
    root["scales"] = std::move(scales);
    root["ranges"] = json::object();
    json levels = json::object();
    for (const auto& [id, lvl] : cfg.synth.levels) {
        levels[id.name()] = {{"level", lvl.level},
                             {"circadian_amplitude", lvl.circadian_amplitude},
                             {"noise_amplitude", lvl.noise_amplitude},
                             {"has_quality", lvl.has_quality}};
    }
    root["synth"] = {{"patients", cfg.synth.patients},
                     {"seed", cfg.synth.seed},
                     {"max_duration_days", cfg.synth.max_duration_days},
                     {"mix",
                      {{"typical", cfg.synth.mix.typical},
                       {"complication", cfg.synth.mix.complication},
                       {"stress", cfg.synth.mix.stress},
                       {"zero_data", cfg.synth.mix.zero_data}}},
                     {"levels", std::move(levels)}};
    return root.dump(2) + "\n";
}

} // namespace vitalband
