#include "vitalband/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vitalband/errors.hpp"
#include "vitalband/text.hpp"

namespace vitalband {

namespace {

CohortStats::Stat reduce(const std::vector<DayCounts>& patients, double DayCounts::*field) {
    CohortStats::Stat stat;
    stat.min = std::numeric_limits<double>::infinity();
    stat.max = -std::numeric_limits<double>::infinity();
    double sum = 0;
    for (const DayCounts& d : patients) {
        const double v = d.*field;
        sum += v;
        stat.min = std::min(stat.min, v);
        stat.max = std::max(stat.max, v);
    }
    const double n = static_cast<double>(patients.size());
    stat.mean = sum / n;
    if (patients.size() > 1) {
        double ss = 0;
        for (const DayCounts& d : patients) {
            const double delta = d.*field - stat.mean;
            ss += delta * delta;
        }
        stat.stddev = std::sqrt(ss / (n - 1)); // sample estimator
    }
    return stat;
}

int duration_bin(double days) {
    for (std::size_t i = 0; i < kDurationBinEdges.size(); ++i)
        if (days < kDurationBinEdges[i]) return static_cast<int>(i);
    return static_cast<int>(kDurationBinEdges.size());
}

void stat_rows(std::string& out, std::string_view name, const CohortStats::Stat& stat) {
    out += std::string(name) + "_mean," + fmt_shortest(stat.mean) + "\n";
    out += std::string(name) + "_std," + fmt_shortest(stat.stddev) + "\n";
    out += std::string(name) + "_min," + fmt_shortest(stat.min) + "\n";
    out += std::string(name) + "_max," + fmt_shortest(stat.max) + "\n";
}

} // namespace

CohortStats cohort_stats(const std::vector<DayCounts>& patients) {
    if (patients.empty()) throw RangeError("cohort_stats requires at least one patient");
    CohortStats stats;
    stats.patients = static_cast<int>(patients.size());
    stats.admitted = reduce(patients, &DayCounts::admitted);
    stats.recorded = reduce(patients, &DayCounts::recorded);
    stats.useful = reduce(patients, &DayCounts::useful);
    for (const DayCounts& d : patients) {
        ++stats.recorded_day_bins[static_cast<std::size_t>(duration_bin(d.recorded))];
        if (d.recorded == 0) ++stats.zero_data_patients;
    }
    return stats;
}

std::string cohort_stats_csv(const CohortStats& stats) {
    std::string out = "metric,value\n";
    out += "patients," + std::to_string(stats.patients) + "\n";
    stat_rows(out, "admitted_days", stats.admitted);
    stat_rows(out, "recorded_days", stats.recorded);
    stat_rows(out, "useful_days", stats.useful);
    out += "recorded_bin_0_2," + std::to_string(stats.recorded_day_bins[0]) + "\n";
    out += "recorded_bin_2_5," + std::to_string(stats.recorded_day_bins[1]) + "\n";
    out += "recorded_bin_5_10," + std::to_string(stats.recorded_day_bins[2]) + "\n";
    out += "recorded_bin_10_up," + std::to_string(stats.recorded_day_bins[3]) + "\n";
    out += "zero_data_patients," + std::to_string(stats.zero_data_patients) + "\n";
    return out;
}

std::string patient_days_csv(std::vector<PatientDays> patients) {
    std::sort(patients.begin(), patients.end(),
              [](const PatientDays& a, const PatientDays& b) {
                  return a.patient_id < b.patient_id;
              });
    std::string out = "patient_id,admitted_days,recorded_days,useful_days\n";
    for (const PatientDays& p : patients) {
        out += csv_escape(p.patient_id);
        out += ',';
        out += fmt_shortest(p.days.admitted);
        out += ',';
        out += fmt_shortest(p.days.recorded);
        out += ',';
        out += fmt_shortest(p.days.useful);
        out += '\n';
    }
    return out;
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

void svg_open(std::ostringstream& os, double w, double h, const ChartLayout& layout) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt2(w) << "\" height=\""
       << fmt2(h) << "\" viewBox=\"0 0 " << fmt2(w) << " " << fmt2(h) << "\" font-family=\""
       << escape_xml(layout.font_family) << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << fmt2(w) << "\" height=\"" << fmt2(h)
       << "\" fill=\"" << layout.background.to_hex() << "\"/>\n";
}

} // namespace

std::string render_cohort_days_chart(std::vector<PatientDays> patients,
                                     const ChartLayout& layout) {
    std::sort(patients.begin(), patients.end(),
              [](const PatientDays& a, const PatientDays& b) {
                  return a.patient_id < b.patient_id;
              });

    const double group_w = 14;
    const double plot_h = 220;
    const double margin_left = 46, margin_top = 34, margin_bottom = 58, margin_right = 16;
    const double plot_w = std::max(1.0, group_w * static_cast<double>(patients.size()));
    const double total_w = margin_left + plot_w + margin_right;
    const double total_h = margin_top + plot_h + margin_bottom;

    double max_days = 0;
    for (const PatientDays& p : patients)
        max_days = std::max({max_days, p.days.admitted, p.days.recorded});
    double y_top = std::max(5.0, std::ceil(max_days / 5.0) * 5.0);

    std::ostringstream os;
    svg_open(os, total_w, total_h, layout);
    os << "<text x=\"" << fmt2(margin_left) << "\" y=\"16\" font-size=\""
       << fmt2(layout.label_font_size_px + 1)
       << "\" font-weight=\"bold\">Patient days: admitted / recorded / useful</text>\n";

    const double scale = plot_h / y_top;
    const double base_y = margin_top + plot_h;
    for (double gl = 0; gl <= y_top + 1e-9; gl += 5.0) {
        const double y = base_y - gl * scale;
        os << "<line x1=\"" << fmt2(margin_left) << "\" y1=\"" << fmt2(y) << "\" x2=\""
           << fmt2(margin_left + plot_w) << "\" y2=\"" << fmt2(y)
           << "\" stroke=\"#CCCCCC\" stroke-width=\"0.5\"/>\n";
        os << "<text x=\"" << fmt2(margin_left - 4) << "\" y=\"" << fmt2(y + 3)
           << "\" text-anchor=\"end\" font-size=\"" << fmt2(layout.font_size_px - 2) << "\">"
           << fmt_trim(gl) << "</text>\n";
    }

    for (std::size_t i = 0; i < patients.size(); ++i) {
        const PatientDays& p = patients[i];
        const double x = margin_left + static_cast<double>(i) * group_w;
        os << "<g class=\"patient\" data-id=\"" << escape_xml(p.patient_id) << "\">\n";
        struct Bar {
            const char* cls;
            double value;
            double width;
            const char* fill;
        };
        const Bar bars[] = {
            {"admitted", p.days.admitted, 10, "#D9D9D9"},
            {"recorded", p.days.recorded, 7, "#737373"},
            {"useful", p.days.useful, 4, "#0571B0"},
        };
        for (const Bar& bar : bars) {
            const double h = std::min(bar.value, y_top) * scale;
            os << "<rect class=\"" << bar.cls << "\" x=\""
               << fmt2(x + (group_w - bar.width) / 2) << "\" y=\"" << fmt2(base_y - h)
               << "\" width=\"" << fmt2(bar.width) << "\" height=\"" << fmt2(h) << "\" fill=\""
               << bar.fill << "\"/>\n";
        }
        os << "<text x=\"" << fmt2(x + group_w / 2) << "\" y=\"" << fmt2(base_y + 8)
           << "\" font-size=\"6\" text-anchor=\"end\" transform=\"rotate(-60 "
           << fmt2(x + group_w / 2) << " " << fmt2(base_y + 8) << ")\">"
           << escape_xml(p.patient_id) << "</text>\n";
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string render_quality_chart(const QualitySummary& summary, const ChartLayout& layout,
                                 int quality_threshold) {
    const std::vector<QualitySummary::Row> all_rows = summary.rows();
    std::vector<QualitySummary::Row> rows;
    for (const QualitySummary::Row& row : all_rows)
        if (row.signal.is_core()) rows.push_back(row);

    const double bar_w = 34, bar_gap = 12;
    const double panel_w =
        std::max(1.0, static_cast<double>(rows.size()) * (bar_w + bar_gap) + bar_gap);
    const double plot_h = 180;
    const double margin_left = 44, margin_top = 40, margin_bottom = 34;
    const double panel_gap = 48;
    const double total_w = margin_left + panel_w * 2 + panel_gap + 20;
    const double total_h = margin_top + plot_h + margin_bottom;

    std::ostringstream os;
    svg_open(os, total_w, total_h, layout);
    const double base_y = margin_top + plot_h;
    const double scale = plot_h / 100.0;

    struct Panel {
        const char* title;
        double x0;
        bool after;
        const char* fill;
    };
    const Panel panels[] = {
        {"mean quality before filtering", margin_left, false, "#737373"},
        {"mean quality after filtering", margin_left + panel_w + panel_gap, true, "#0571B0"},
    };
    for (const Panel& panel : panels) {
        os << "<g class=\"panel\" data-side=\"" << (panel.after ? "after" : "before") << "\">\n";
        os << "<text x=\"" << fmt2(panel.x0) << "\" y=\"" << fmt2(margin_top - 14)
           << "\" font-size=\"" << fmt2(layout.label_font_size_px) << "\">" << panel.title
           << "</text>\n";
        for (int gl = 0; gl <= 100; gl += 25) {
            const double y = base_y - gl * scale;
            os << "<line x1=\"" << fmt2(panel.x0) << "\" y1=\"" << fmt2(y) << "\" x2=\""
               << fmt2(panel.x0 + panel_w) << "\" y2=\"" << fmt2(y)
               << "\" stroke=\"#CCCCCC\" stroke-width=\"0.5\"/>\n";
            os << "<text x=\"" << fmt2(panel.x0 - 4) << "\" y=\"" << fmt2(y + 3)
               << "\" text-anchor=\"end\" font-size=\"" << fmt2(layout.font_size_px - 2) << "\">"
               << gl << "</text>\n";
        }
        // Threshold gridline.
        const double ty = base_y - quality_threshold * scale;
        os << "<line class=\"threshold\" x1=\"" << fmt2(panel.x0) << "\" y1=\"" << fmt2(ty)
           << "\" x2=\"" << fmt2(panel.x0 + panel_w) << "\" y2=\"" << fmt2(ty)
           << "\" stroke=\"#CA0020\" stroke-width=\"1\" stroke-dasharray=\"3,2\"/>\n";

        for (std::size_t i = 0; i < rows.size(); ++i) {
            const QualitySummary::Row& row = rows[i];
            const double x = panel.x0 + bar_gap + static_cast<double>(i) * (bar_w + bar_gap);
            const std::optional<double>& mean = panel.after ? row.mean_after : row.mean_before;
            if (mean) {
                const double h = std::clamp(*mean, 0.0, 100.0) * scale;
                os << "<rect class=\"qbar\" data-signal=\"" << escape_xml(row.signal.name())
                   << "\" x=\"" << fmt2(x) << "\" y=\"" << fmt2(base_y - h) << "\" width=\""
                   << fmt2(bar_w) << "\" height=\"" << fmt2(h) << "\" fill=\"" << panel.fill
                   << "\"/>\n";
                os << "<text x=\"" << fmt2(x + bar_w / 2) << "\" y=\"" << fmt2(base_y - h - 3)
                   << "\" text-anchor=\"middle\" font-size=\"" << fmt2(layout.font_size_px - 2)
                   << "\">" << fmt_trim(*mean) << "</text>\n";
            } else {
                os << "<text class=\"na\" data-signal=\"" << escape_xml(row.signal.name())
                   << "\" x=\"" << fmt2(x + bar_w / 2) << "\" y=\"" << fmt2(base_y - 6)
                   << "\" text-anchor=\"middle\" font-size=\"" << fmt2(layout.font_size_px)
                   << "\" fill=\"#777777\">n/a</text>\n";
            }
            os << "<text x=\"" << fmt2(x + bar_w / 2) << "\" y=\"" << fmt2(base_y + 12)
               << "\" text-anchor=\"middle\" font-size=\"" << fmt2(layout.font_size_px) << "\">"
               << escape_xml(row.signal.name()) << "</text>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace vitalband
