#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vitalband/aggregate.hpp"
#include "vitalband/colorscale.hpp"

namespace vitalband {

enum class DateMode : std::uint8_t { anonymized, absolute };

// Minor-tick stride rule: strides[i] applies while the duration is below
// thresholds_hours[i]; the last stride covers everything beyond.
struct TickRule {
    std::array<double, 3> thresholds_hours = {24.0, 144.0, 240.0};
    std::array<int, 4> strides = {1, 6, 12, 24};
};

struct ChartLayout {
    double cell_width_px = 5;
    double band_height_px = 56;
    double band_gap_px = 10;
    double margin_left_px = 72;
    double margin_right_px = 104;
    double margin_top_px = 46;
    double margin_bottom_px = 44;
    Color background = {0xF0, 0xF0, 0xF0};
    std::string font_family = "sans-serif";
    double font_size_px = 10;
    double label_font_size_px = 11;
    bool show_colorbar = true;
    DateMode date_mode = DateMode::anonymized;

    Color bar_up = {0xF4, 0xA6, 0xA0};   // above baseline, light red-like
    Color bar_down = {0x6B, 0xAE, 0xD6}; // below baseline, blue
    Color ma_line = {0xD7, 0x19, 0x1C};  // 4-hour moving-average overlay

    int moving_average_hours = 4;
    TickRule tick_rule;

    void validate() const; // throws ConfigError for non-positive dimensions
};

struct TickPlan {
    int stride_hours = 1; // {1, 6, 12, 24}
    struct Tick {
        std::int64_t hour = 0; // absolute local hour index of the boundary
        std::string label;
    };
    std::vector<Tick> major; // day boundaries
    std::vector<Tick> minor; // HH:MM every stride hours, from 00:00
};

// 1 below one day, 6 from one to six days, 12 from six to ten, 24 beyond.
int tick_stride_hours(double duration_hours, const TickRule& rule = {});

TickPlan plan_ticks(std::int64_t start_hour, std::size_t hours, DateMode mode,
                    const TickRule& rule = {});

// Five signal bands in abbreviation order, one cell per hour, missing hours
// grey, midnight/noon dashed rules, optional per-band color bars.
std::string render_heatmap(const HourlyGrid& grid, const ScaleSet& scales,
                           const ChartLayout& layout,
                           const std::vector<Annotation>& annotations = {},
                           std::string_view title = {},
                           std::vector<Diagnostic>* warnings = nullptr);

// Baseline-relative up/down bars with the moving-average polyline overlay.
std::string render_barchart(const HourlyGrid& grid, const ChartLayout& layout,
                            const std::vector<Annotation>& annotations = {},
                            std::string_view title = {},
                            std::vector<Diagnostic>* warnings = nullptr);

// Vertical legend strip with numeric labels at vmin, baseline and vmax.
// Exposed separately so the legend can be tested on its own.
std::string render_colorbar(const ColorScale& scale, double vmin, double vmax,
                            double baseline, double x, double y, double width,
                            double height, const ChartLayout& layout);

} // namespace vitalband
