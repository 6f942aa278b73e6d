#include "vitalband/colorscale.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "vitalband/errors.hpp"
#include "vitalband/text.hpp"

namespace vitalband {

std::optional<Color> Color::from_hex(std::string_view hex) {
    if (hex.size() != 7 || hex[0] != '#') return std::nullopt;
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    std::uint8_t parts[3];
    for (int i = 0; i < 3; ++i) {
        const int hi = nibble(hex[1 + 2 * i]);
        const int lo = nibble(hex[2 + 2 * i]);
        if (hi < 0 || lo < 0) return std::nullopt;
        parts[i] = static_cast<std::uint8_t>(hi * 16 + lo);
    }
    return Color{parts[0], parts[1], parts[2]};
}

std::string Color::to_hex() const {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02X%02X%02X", r, g, b);
    return buf;
}

std::string_view scheme_name_str(SchemeName name) {
    switch (name) {
        case SchemeName::WR: return "WR";
        case SchemeName::YR: return "YR";
        case SchemeName::GB_SEQ: return "GB";
        case SchemeName::RWB: return "RWB";
        case SchemeName::RYB: return "RYB";
        case SchemeName::RGR: return "RGR";
        case SchemeName::RGB3: return "RGB";
        case SchemeName::RYGB: return "RYGB";
    }
    return "RYGB";
}

std::optional<SchemeName> parse_scheme_name(std::string_view s) {
    s = trim(s);
    for (SchemeName name : {SchemeName::WR, SchemeName::YR, SchemeName::GB_SEQ, SchemeName::RWB,
                            SchemeName::RYB, SchemeName::RGR, SchemeName::RGB3, SchemeName::RYGB}) {
        if (iequals(s, scheme_name_str(name))) return name;
    }
    if (iequals(s, "GB_SEQ")) return SchemeName::GB_SEQ;
    return std::nullopt;
}

ScaleKind scheme_kind(SchemeName name) {
    switch (name) {
        case SchemeName::WR:
        case SchemeName::YR:
        case SchemeName::GB_SEQ: return ScaleKind::sequential;
        default: return ScaleKind::diverging;
    }
}

ColorScale make_named_scale(SchemeName name, ScaleMode mode, bool inverted, int steps,
                            const Palette& p) {
    if (mode == ScaleMode::discrete && steps != 3 && steps != 5 && steps != 7 && steps != 9)
        throw ConfigError("discrete color steps must be one of 3, 5, 7 or 9, got " +
                          std::to_string(steps));

    ColorScale scale;
    scale.name = name;
    scale.kind = scheme_kind(name);
    scale.mode = mode;
    scale.steps = steps;
    scale.inverted = inverted;
    scale.missing_color = p.missing;

    switch (name) {
        case SchemeName::WR:
            scale.anchors = {{0.0, p.white}, {1.0, p.red}};
            break;
        case SchemeName::YR:
            scale.anchors = {{0.0, p.yellow}, {1.0, p.red}};
            break;
        case SchemeName::GB_SEQ:
            // Light end at low values, darkening through green into blue.
            scale.anchors = {{0.0, p.white}, {0.5, p.green}, {1.0, p.blue}};
            break;
        case SchemeName::RWB:
            scale.anchors = {{0.0, p.blue}, {0.5, p.white}, {1.0, p.red}};
            break;
        case SchemeName::RYB:
            scale.anchors = {{0.0, p.blue}, {0.5, p.yellow}, {1.0, p.red}};
            break;
        case SchemeName::RGR:
            scale.anchors = {{0.0, p.red}, {0.5, p.green}, {1.0, p.red}};
            break;
        case SchemeName::RGB3:
            scale.anchors = {{0.0, p.blue}, {0.5, p.green}, {1.0, p.red}};
            break;
        case SchemeName::RYGB:
            // Yellow sits strictly between the green center and the red high
            // end; ambiguous values below the baseline are never yellow.
            scale.anchors = {{0.0, p.blue}, {0.5, p.green}, {0.75, p.yellow}, {1.0, p.red}};
            break;
    }
    return scale;
}

double normalize_value(double value, double vmin, double vmax, double baseline, ScaleKind kind) {
    if (!(vmin < vmax))
        throw RangeError("normalize_value requires vmin < vmax");
    double pos = 0;
    if (kind == ScaleKind::sequential) {
        pos = (value - vmin) / (vmax - vmin);
    } else {
        if (value <= baseline) {
            pos = baseline > vmin ? 0.5 * (value - vmin) / (baseline - vmin)
                                  : (value < baseline ? 0.0 : 0.5);
        } else {
            pos = baseline < vmax ? 0.5 + 0.5 * (value - baseline) / (vmax - baseline) : 1.0;
        }
    }
    return std::clamp(pos, 0.0, 1.0);
}

namespace {

Color interpolate(const std::vector<std::pair<double, Color>>& anchors, double pos) {
    if (pos <= anchors.front().first) return anchors.front().second;
    if (pos >= anchors.back().first) return anchors.back().second;
    std::size_t hi = 1;
    while (hi < anchors.size() && anchors[hi].first < pos) ++hi;
    const auto& [p0, c0] = anchors[hi - 1];
    const auto& [p1, c1] = anchors[hi];
    if (pos == p0) return c0;
    const double t = (pos - p0) / (p1 - p0);
    auto lerp = [t](std::uint8_t a, std::uint8_t b) {
        return static_cast<std::uint8_t>(std::llround(a + (b - a) * t));
    };
    return Color{lerp(c0.r, c1.r), lerp(c0.g, c1.g), lerp(c0.b, c1.b)};
}

} // namespace

Color map_color(const ColorScale& scale, double position) {
    double pos = std::clamp(position, 0.0, 1.0);
    if (scale.inverted) pos = 1.0 - pos;
    if (scale.mode == ScaleMode::discrete) {
        const int n = scale.steps;
        int bin = static_cast<int>(pos * n);
        bin = std::clamp(bin, 0, n - 1);
        pos = (bin + 0.5) / n;
    }
    return interpolate(scale.anchors, pos);
}

Color map_color(const ColorScale& scale, std::optional<double> position) {
    return position ? map_color(scale, *position) : scale.missing_color;
}

const ColorScale& ScaleSet::for_signal(const SignalId& id) const {
    auto it = scales.find(id);
    if (it != scales.end()) return it->second;
    static const ColorScale fallback = make_named_scale(SchemeName::RYGB);
    return fallback;
}

ScaleSet default_scales(const Palette& palette) {
    ScaleSet set;
    set.scales.emplace(SignalId(SignalId::Core::HR), make_named_scale(SchemeName::RYGB, ScaleMode::continuous, false, 5, palette));
    set.scales.emplace(SignalId(SignalId::Core::HRV), make_named_scale(SchemeName::GB_SEQ, ScaleMode::continuous, false, 5, palette));
    set.scales.emplace(SignalId(SignalId::Core::RR), make_named_scale(SchemeName::RYGB, ScaleMode::continuous, false, 5, palette));
    set.scales.emplace(SignalId(SignalId::Core::SPO2), make_named_scale(SchemeName::GB_SEQ, ScaleMode::continuous, true, 5, palette));
    set.scales.emplace(SignalId(SignalId::Core::TEMP), make_named_scale(SchemeName::RYGB, ScaleMode::continuous, false, 5, palette));
    return set;
}

} // namespace vitalband
