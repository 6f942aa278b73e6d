#include "vitalband/render.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "vitalband/errors.hpp"
#include "vitalband/text.hpp"
#include "vitalband/time_util.hpp"

namespace vitalband {

void ChartLayout::validate() const {
    if (cell_width_px <= 0 || band_height_px <= 0 || band_gap_px < 0 || font_size_px <= 0 ||
        label_font_size_px <= 0)
        throw ConfigError("chart layout dimensions must be positive");
    if (moving_average_hours < 1)
        throw ConfigError("moving average window must be >= 1 hour");
}

int tick_stride_hours(double duration_hours, const TickRule& rule) {
    for (std::size_t i = 0; i < rule.thresholds_hours.size(); ++i) {
        if (duration_hours < rule.thresholds_hours[i]) return rule.strides[i];
    }
    return rule.strides.back();
}

TickPlan plan_ticks(std::int64_t start_hour, std::size_t hours, DateMode mode,
                    const TickRule& rule) {
    TickPlan plan;
    plan.stride_hours = tick_stride_hours(static_cast<double>(hours), rule);
    const std::int64_t end_hour = start_hour + static_cast<std::int64_t>(hours);
    const std::int64_t first_day = day_of_hour(start_hour);
    for (std::int64_t h = start_hour; h <= end_hour; ++h) {
        if (floor_mod(h, 24) == 0) {
            std::string label;
            if (mode == DateMode::anonymized) {
                label = "d" + std::to_string(day_of_hour(h) - first_day + 1);
            } else {
                label = format_date(day_of_hour(h) * kSecondsPerDay);
            }
            plan.major.push_back({h, std::move(label)});
        }
        if (floor_mod(h, plan.stride_hours) == 0) {
            plan.minor.push_back({h, format_hhmm(hour_of_day(h))});
        }
    }
    return plan;
}

namespace {

std::string escape_xml(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string sanitize_id(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) out.push_back(c);
        else out.push_back('_');
    }
    return out;
}

// Chart frame shared by heat maps and bar charts: band placement, tick
// furniture, dashed day markers, annotations.
struct Frame {
    const HourlyGrid& grid;
    const ChartLayout& layout;
    std::vector<const HourlySeries*> bands; // canonical order
    double plot_w = 0;
    double total_w = 0;
    double total_h = 0;

    Frame(const HourlyGrid& g, const ChartLayout& l) : grid(g), layout(l) {
        for (const auto& [id, series] : grid.series) {
            if (series.values.size() != grid.hours)
                throw RangeError("series " + id.name() + " does not share the grid axis");
            bands.push_back(&series);
        }
        plot_w = std::max(1.0, static_cast<double>(grid.hours) * layout.cell_width_px);
        total_w = layout.margin_left_px + plot_w + layout.margin_right_px;
        const double n = static_cast<double>(bands.size());
        total_h = layout.margin_top_px + n * layout.band_height_px +
                  std::max(0.0, n - 1) * layout.band_gap_px + layout.margin_bottom_px;
    }

    double band_y(std::size_t k) const {
        return layout.margin_top_px +
               static_cast<double>(k) * (layout.band_height_px + layout.band_gap_px);
    }
    double bands_bottom() const {
        return band_y(bands.empty() ? 0 : bands.size() - 1) +
               (bands.empty() ? 0.0 : layout.band_height_px);
    }
    double x_of_hour(std::int64_t hour) const {
        return layout.margin_left_px +
               static_cast<double>(hour - grid.start_hour) * layout.cell_width_px;
    }

    void open(std::ostream& os, std::string_view title) const {
        os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt2(total_w)
           << "\" height=\"" << fmt2(total_h) << "\" viewBox=\"0 0 " << fmt2(total_w) << " "
           << fmt2(total_h) << "\" font-family=\"" << escape_xml(layout.font_family) << "\">\n";
        os << "<rect x=\"0\" y=\"0\" width=\"" << fmt2(total_w) << "\" height=\"" << fmt2(total_h)
           << "\" fill=\"" << layout.background.to_hex() << "\"/>\n";
        if (!title.empty()) {
            os << "<text x=\"" << fmt2(layout.margin_left_px) << "\" y=\"18\" font-size=\""
               << fmt2(layout.label_font_size_px + 2) << "\" font-weight=\"bold\">"
               << escape_xml(title) << "</text>\n";
        }
    }

    void band_label(std::ostream& os, const HourlySeries& series, double y) const {
        os << "<text x=\"" << fmt2(layout.margin_left_px - 8) << "\" y=\""
           << fmt2(y + layout.band_height_px / 2) << "\" text-anchor=\"end\" font-size=\""
           << fmt2(layout.label_font_size_px) << "\">" << escape_xml(series.signal.name())
           << "</text>\n";
        const std::string_view unit = signal_unit(series.signal);
        if (!unit.empty()) {
            os << "<text x=\"" << fmt2(layout.margin_left_px - 8) << "\" y=\""
               << fmt2(y + layout.band_height_px / 2 + layout.font_size_px + 1)
               << "\" text-anchor=\"end\" font-size=\"" << fmt2(layout.font_size_px - 2)
               << "\" fill=\"#555555\">" << escape_xml(std::string(unit)) << "</text>\n";
        }
    }

    void day_night_rules(std::ostream& os) const {
        if (grid.hours == 0) return;
        const std::int64_t end_hour = grid.start_hour + static_cast<std::int64_t>(grid.hours);
        const double y0 = layout.margin_top_px;
        const double y1 = bands_bottom();
        for (std::int64_t h = grid.start_hour; h <= end_hour; ++h) {
            const unsigned hod = hour_of_day(h);
            if (hod != 0 && hod != 12) continue;
            const bool midnight = hod == 0;
            os << "<line class=\"" << (midnight ? "midnight" : "noon") << "\" x1=\""
               << fmt2(x_of_hour(h)) << "\" y1=\"" << fmt2(y0) << "\" x2=\"" << fmt2(x_of_hour(h))
               << "\" y2=\"" << fmt2(y1) << "\" stroke=\"" << (midnight ? "#000000" : "#888888")
               << "\" stroke-width=\"1\" stroke-dasharray=\"4,3\"/>\n";
        }
    }

    void axis(std::ostream& os) const {
        if (grid.hours == 0) return;
        const TickPlan plan =
            plan_ticks(grid.start_hour, grid.hours, layout.date_mode, layout.tick_rule);
        const double y = bands_bottom();
        os << "<line x1=\"" << fmt2(layout.margin_left_px) << "\" y1=\"" << fmt2(y) << "\" x2=\""
           << fmt2(layout.margin_left_px + plot_w) << "\" y2=\"" << fmt2(y)
           << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        for (const TickPlan::Tick& tick : plan.minor) {
            const double x = x_of_hour(tick.hour);
            os << "<line x1=\"" << fmt2(x) << "\" y1=\"" << fmt2(y) << "\" x2=\"" << fmt2(x)
               << "\" y2=\"" << fmt2(y + 4) << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
            os << "<text class=\"minor\" x=\"" << fmt2(x) << "\" y=\"" << fmt2(y + 14)
               << "\" text-anchor=\"middle\" font-size=\"" << fmt2(layout.font_size_px - 2)
               << "\">" << tick.label << "</text>\n";
        }
        for (const TickPlan::Tick& tick : plan.major) {
            const double x = x_of_hour(tick.hour);
            os << "<line x1=\"" << fmt2(x) << "\" y1=\"" << fmt2(y) << "\" x2=\"" << fmt2(x)
               << "\" y2=\"" << fmt2(y + 8) << "\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
            os << "<text class=\"major\" x=\"" << fmt2(x) << "\" y=\"" << fmt2(y + 27)
               << "\" text-anchor=\"middle\" font-size=\"" << fmt2(layout.font_size_px) << "\">"
               << escape_xml(tick.label) << "</text>\n";
        }
    }

    void annotations_layer(std::ostream& os, const std::vector<Annotation>& annotations,
                           std::vector<Diagnostic>* warnings) const {
        for (const Annotation& a : annotations) {
            if (grid.hours == 0 || a.hour < grid.start_hour ||
                a.hour >= grid.start_hour + static_cast<std::int64_t>(grid.hours)) {
                if (warnings)
                    warnings->push_back({0, "annotation '" + a.text + "' outside chart range"});
                continue;
            }
            const double x = x_of_hour(a.hour) + layout.cell_width_px / 2;
            os << "<line class=\"annotation\" x1=\"" << fmt2(x) << "\" y1=\""
               << fmt2(layout.margin_top_px - 6) << "\" x2=\"" << fmt2(x) << "\" y2=\""
               << fmt2(bands_bottom()) << "\" stroke=\"#666666\" stroke-width=\"1\"/>\n";
            os << "<text x=\"" << fmt2(x + 3) << "\" y=\"" << fmt2(layout.margin_top_px - 10)
               << "\" font-size=\"" << fmt2(layout.font_size_px) << "\""
               << (a.emphasis ? " font-weight=\"bold\"" : "") << ">" << escape_xml(a.text)
               << "</text>\n";
        }
    }

    void close(std::ostream& os) const { os << "</svg>\n"; }
};

void empty_band_note(std::ostream& os, const Frame& frame, double y) {
    os << "<text x=\"" << fmt2(frame.layout.margin_left_px + 4) << "\" y=\""
       << fmt2(y + frame.layout.band_height_px / 2) << "\" font-size=\""
       << fmt2(frame.layout.font_size_px) << "\" fill=\"#777777\">no data</text>\n";
}

} // namespace

std::string render_colorbar(const ColorScale& scale, double vmin, double vmax, double baseline,
                            double x, double y, double width, double height,
                            const ChartLayout& layout) {
    std::ostringstream os;
    const bool degenerate = !(vmin < vmax);
    os << "<g class=\"colorbar\">\n";
    if (degenerate) {
        os << "<rect x=\"" << fmt2(x) << "\" y=\"" << fmt2(y) << "\" width=\"" << fmt2(width)
           << "\" height=\"" << fmt2(height) << "\" fill=\"" << map_color(scale, 0.5).to_hex()
           << "\"/>\n";
        os << "<text x=\"" << fmt2(x + width + 4) << "\" y=\"" << fmt2(y + height / 2)
           << "\" font-size=\"" << fmt2(layout.font_size_px - 2) << "\">" << fmt_trim(vmin)
           << "</text>\n";
        os << "</g>\n";
        return os.str();
    }

    if (scale.mode == ScaleMode::discrete) {
        const int n = scale.steps;
        for (int i = 0; i < n; ++i) {
            // Bin i covers positions [i/n, (i+1)/n); drawn top-down from high
            // positions to low.
            const double pos = (i + 0.5) / n;
            const double seg_h = height / n;
            const double seg_y = y + height - (i + 1) * seg_h;
            os << "<rect x=\"" << fmt2(x) << "\" y=\"" << fmt2(seg_y) << "\" width=\""
               << fmt2(width) << "\" height=\"" << fmt2(seg_h) << "\" fill=\""
               << map_color(scale, pos).to_hex() << "\"/>\n";
        }
    } else {
        // Gradient stops follow the anchors so anchor colors are exact.
        std::string gid = "grad_" + sanitize_id(std::string(scheme_name_str(scale.name))) +
                          (scale.inverted ? "_inv" : "") + "_" + fmt_trim(x) + "_" + fmt_trim(y);
        os << "<defs><linearGradient id=\"" << gid << "\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">\n";
        if (!scale.inverted) {
            for (const auto& [pos, color] : scale.anchors)
                os << "<stop offset=\"" << fmt2(pos * 100) << "%\" stop-color=\""
                   << color.to_hex() << "\"/>\n";
        } else {
            for (auto it = scale.anchors.rbegin(); it != scale.anchors.rend(); ++it)
                os << "<stop offset=\"" << fmt2((1.0 - it->first) * 100) << "%\" stop-color=\""
                   << it->second.to_hex() << "\"/>\n";
        }
        os << "</linearGradient></defs>\n";
        os << "<rect x=\"" << fmt2(x) << "\" y=\"" << fmt2(y) << "\" width=\"" << fmt2(width)
           << "\" height=\"" << fmt2(height) << "\" fill=\"url(#" << gid << ")\"/>\n";
    }

    struct Label {
        double value;
        double pos;
    };
    const double base_pos = normalize_value(baseline, vmin, vmax, baseline, scale.kind);
    const Label labels[] = {{vmin, 0.0}, {baseline, base_pos}, {vmax, 1.0}};
    for (const Label& label : labels) {
        const double ly = y + height - label.pos * height;
        os << "<line x1=\"" << fmt2(x + width) << "\" y1=\"" << fmt2(ly) << "\" x2=\""
           << fmt2(x + width + 3) << "\" y2=\"" << fmt2(ly) << "\" stroke=\"#333333\"/>\n";
        os << "<text x=\"" << fmt2(x + width + 5) << "\" y=\"" << fmt2(ly + 3)
           << "\" font-size=\"" << fmt2(layout.font_size_px - 2) << "\">" << fmt_trim(label.value)
           << "</text>\n";
    }
    os << "</g>\n";
    return os.str();
}

std::string render_heatmap(const HourlyGrid& grid, const ScaleSet& scales,
                           const ChartLayout& layout, const std::vector<Annotation>& annotations,
                           std::string_view title, std::vector<Diagnostic>* warnings) {
    layout.validate();
    Frame frame(grid, layout);
    std::ostringstream os;
    frame.open(os, title);

    for (std::size_t k = 0; k < frame.bands.size(); ++k) {
        const HourlySeries& series = *frame.bands[k];
        const ColorScale& scale = scales.for_signal(series.signal);
        const double y = frame.band_y(k);
        os << "<g class=\"band\" data-signal=\"" << escape_xml(series.signal.name()) << "\">\n";
        frame.band_label(os, series, y);

        const bool degenerate = series.range_defined && !(series.vmin < series.vmax);
        if (degenerate && warnings)
            warnings->push_back({0, series.signal.name() +
                                        ": degenerate range, heat map band at center color"});
        if (!series.range_defined && series.present_count() > 0 && warnings)
            warnings->push_back({0, series.signal.name() + ": range undefined, band renders grey"});

        for (std::size_t i = 0; i < grid.hours; ++i) {
            Color fill = scale.missing_color;
            if (series.values[i] && series.range_defined) {
                const double pos =
                    degenerate ? 0.5
                               : normalize_value(*series.values[i], series.vmin, series.vmax,
                                                 series.baseline, scale.kind);
                fill = map_color(scale, pos);
            }
            const std::int64_t hour = grid.start_hour + static_cast<std::int64_t>(i);
            os << "<rect class=\"cell\" data-hour=\"" << hour << "\" x=\""
               << fmt2(frame.x_of_hour(hour)) << "\" y=\"" << fmt2(y) << "\" width=\""
               << fmt2(layout.cell_width_px) << "\" height=\"" << fmt2(layout.band_height_px)
               << "\" fill=\"" << fill.to_hex() << "\"/>\n";
        }
        if (grid.hours == 0) empty_band_note(os, frame, y);

        if (layout.show_colorbar && series.range_defined) {
            os << render_colorbar(scale, series.vmin, series.vmax, series.baseline,
                                  layout.margin_left_px + frame.plot_w + 14, y, 12,
                                  layout.band_height_px, layout);
        }
        os << "</g>\n";
    }

    frame.day_night_rules(os);
    frame.axis(os);
    frame.annotations_layer(os, annotations, warnings);
    frame.close(os);
    return os.str();
}

std::string render_barchart(const HourlyGrid& grid, const ChartLayout& layout,
                            const std::vector<Annotation>& annotations, std::string_view title,
                            std::vector<Diagnostic>* warnings) {
    layout.validate();
    Frame frame(grid, layout);
    std::ostringstream os;
    frame.open(os, title);

    for (std::size_t k = 0; k < frame.bands.size(); ++k) {
        const HourlySeries& series = *frame.bands[k];
        const double y = frame.band_y(k);
        const double center = y + layout.band_height_px / 2;
        os << "<g class=\"band\" data-signal=\"" << escape_xml(series.signal.name()) << "\">\n";
        os << "<rect x=\"" << fmt2(layout.margin_left_px) << "\" y=\"" << fmt2(y) << "\" width=\""
           << fmt2(frame.plot_w) << "\" height=\"" << fmt2(layout.band_height_px)
           << "\" fill=\"#FFFFFF\"/>\n";
        frame.band_label(os, series, y);

        if (!series.range_defined) {
            if (warnings)
                warnings->push_back(
                    {0, series.signal.name() + ": undefined baseline, bar band left empty"});
            os << "<text class=\"warnglyph\" x=\"" << fmt2(layout.margin_left_px + frame.plot_w / 2)
               << "\" y=\"" << fmt2(center + 4) << "\" text-anchor=\"middle\" font-size=\""
               << fmt2(layout.label_font_size_px) << "\" fill=\"#AA3333\">!</text>\n";
            if (grid.hours == 0) empty_band_note(os, frame, y);
            os << "</g>\n";
            continue;
        }

        const double max_dev =
            std::max(series.vmax - series.baseline, series.baseline - series.vmin);
        const double ppu = max_dev > 0 ? (layout.band_height_px / 2) / max_dev : 0.0;
        if (max_dev <= 0 && warnings)
            warnings->push_back({0, series.signal.name() +
                                        ": degenerate range, bars collapse to the baseline"});

        // Baseline rule across the band.
        os << "<line class=\"baseline\" x1=\"" << fmt2(layout.margin_left_px) << "\" y1=\""
           << fmt2(center) << "\" x2=\"" << fmt2(layout.margin_left_px + frame.plot_w)
           << "\" y2=\"" << fmt2(center) << "\" stroke=\"#555555\" stroke-width=\"0.8\"/>\n";

        for (std::size_t i = 0; i < grid.hours; ++i) {
            if (!series.values[i]) continue; // missing hours render no bar
            const double v = *series.values[i];
            const double dev = v - series.baseline;
            const double h = std::min(std::abs(dev) * ppu, layout.band_height_px / 2);
            const std::int64_t hour = grid.start_hour + static_cast<std::int64_t>(i);
            const char* dir = dev > 0 ? "up" : (dev < 0 ? "down" : "zero");
            const Color fill = dev >= 0 ? layout.bar_up : layout.bar_down;
            const double rect_y = dev > 0 ? center - h : center;
            os << "<rect class=\"bar\" data-hour=\"" << hour << "\" data-dir=\"" << dir
               << "\" x=\"" << fmt2(frame.x_of_hour(hour)) << "\" y=\"" << fmt2(rect_y)
               << "\" width=\"" << fmt2(layout.cell_width_px) << "\" height=\"" << fmt2(h)
               << "\" fill=\"" << fill.to_hex() << "\"/>\n";
        }

        // Moving-average overlay, broken at missing stretches.
        const std::vector<std::optional<double>> ma =
            moving_average(series, layout.moving_average_hours);
        std::string points;
        auto flush_points = [&]() {
            if (points.empty()) return;
            os << "<polyline class=\"ma\" points=\"" << points << "\" fill=\"none\" stroke=\""
               << layout.ma_line.to_hex() << "\" stroke-width=\"1.2\"/>\n";
            points.clear();
        };
        for (std::size_t i = 0; i < ma.size(); ++i) {
            if (!ma[i]) {
                flush_points();
                continue;
            }
            const double mx = layout.margin_left_px +
                              (static_cast<double>(i) + 0.5) * layout.cell_width_px;
            const double my = std::clamp(center - (*ma[i] - series.baseline) * ppu, y,
                                         y + layout.band_height_px);
            if (!points.empty()) points += ' ';
            points += fmt2(mx);
            points += ',';
            points += fmt2(my);
        }
        flush_points();
        if (grid.hours == 0) empty_band_note(os, frame, y);
        os << "</g>\n";
    }

    frame.day_night_rules(os);
    frame.axis(os);
    frame.annotations_layer(os, annotations, warnings);
    frame.close(os);
    return os.str();
}

} // namespace vitalband
