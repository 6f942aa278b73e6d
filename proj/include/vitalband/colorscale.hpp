#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vitalband/aggregate.hpp"

namespace vitalband {

struct Color {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    static std::optional<Color> from_hex(std::string_view hex); // "#RRGGBB"
    std::string to_hex() const;                                 // "#RRGGBB" uppercase

    friend bool operator==(const Color&, const Color&) = default;
};

// Central hex table; every named scheme is built from these, and a config
// file may override any entry.
struct Palette {
    Color blue = {0x05, 0x71, 0xB0};
    Color green = {0x1A, 0x96, 0x41};
    Color yellow = {0xFD, 0xAE, 0x61};
    Color red = {0xCA, 0x00, 0x20};
    Color white = {0xF7, 0xF7, 0xF7};
    Color missing = {0xBD, 0xBD, 0xBD};
};

enum class SchemeName : std::uint8_t { WR, YR, GB_SEQ, RWB, RYB, RGR, RGB3, RYGB };
enum class ScaleKind : std::uint8_t { sequential, diverging };
enum class ScaleMode : std::uint8_t { continuous, discrete };

std::string_view scheme_name_str(SchemeName name);
std::optional<SchemeName> parse_scheme_name(std::string_view s);
ScaleKind scheme_kind(SchemeName name);

struct ColorScale {
    SchemeName name = SchemeName::RYGB;
    ScaleKind kind = ScaleKind::diverging;
    ScaleMode mode = ScaleMode::continuous;
    int steps = 5;         // discrete mode only, in {3,5,7,9}
    bool inverted = false; // light end <-> dark end swap
    // Sorted by position; first at 0.0, last at 1.0. Diverging scales have an
    // anchor at exactly 0.5.
    std::vector<std::pair<double, Color>> anchors;
    Color missing_color = {0xBD, 0xBD, 0xBD};
};

// Throws ConfigError for discrete steps outside {3,5,7,9}.
ColorScale make_named_scale(SchemeName name, ScaleMode mode = ScaleMode::continuous,
                            bool inverted = false, int steps = 5, const Palette& palette = {});

// Sequential: (v-vmin)/(vmax-vmin). Diverging: piecewise-linear with the
// baseline pinned to 0.5. Clamped to [0,1]; throws RangeError when vmin >= vmax.
double normalize_value(double value, double vmin, double vmax, double baseline, ScaleKind kind);

// Continuous: channel-wise linear interpolation between neighboring anchors.
// Discrete(n): position quantized to n equal bins, colored by each bin
// midpoint's continuous color. Inversion flips the position first, so
// map(inverted, p) == map(base, 1-p) exactly.
Color map_color(const ColorScale& scale, double position);
Color map_color(const ColorScale& scale, std::optional<double> position);

// Per-signal scale assignment. Defaults: HR/RR/Temp diverging RYGB,
// HRV sequential GB, SPO2 sequential GB inverted (light end = high values).
struct ScaleSet {
    std::map<SignalId, ColorScale> scales;

    const ColorScale& for_signal(const SignalId& id) const;
};

ScaleSet default_scales(const Palette& palette = {});

} // namespace vitalband
