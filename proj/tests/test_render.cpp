#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "support/svg_checks.hpp"
#include "vitalband/errors.hpp"
#include "vitalband/render.hpp"

using namespace vitalband;

namespace {

HourlyGrid grid_from(const std::map<SignalId, std::vector<std::optional<double>>>& data,
                     std::int64_t start_hour = 438912 /* 2020-01-27T00:00 local */) {
    HourlyGrid grid;
    grid.start_hour = start_hour;
    std::size_t hours = 0;
    for (const auto& [id, values] : data) hours = std::max(hours, values.size());
    grid.hours = hours;
    for (const SignalId& id : core_signals()) {
        HourlySeries series;
        series.signal = id;
        series.start_hour = start_hour;
        const auto it = data.find(id);
        series.values = it != data.end() ? it->second
                                         : std::vector<std::optional<double>>(hours, std::nullopt);
        series.values.resize(hours, std::nullopt);
        series.counts.assign(hours, 1);
        series.direction = default_direction(id);
        grid.series.emplace(id, std::move(series));
    }
    annotate_grid(grid, RangeConfig{});
    return grid;
}

int count_midnights(const HourlyGrid& grid) {
    int n = 0;
    for (std::int64_t h = grid.start_hour; h <= grid.start_hour + static_cast<std::int64_t>(grid.hours);
         ++h)
        if (hour_of_day(h) == 0) ++n;
    return n;
}

} // namespace

TEST_CASE("tick stride follows the duration rule") {
    const struct {
        double hours;
        int stride;
    } table[] = {{1, 1},   {23, 1},  {24, 6},  {120, 6},  {143, 6},
                 {144, 12}, {239, 12}, {240, 24}, {600, 24}};
    for (const auto& row : table) CHECK(tick_stride_hours(row.hours) == row.stride);
}

TEST_CASE("tick labels run HH:00 from midnight and days are numbered") {
    const TickPlan plan = plan_ticks(438912, 48, DateMode::anonymized);
    CHECK(plan.stride_hours == 6);
    REQUIRE(!plan.major.empty());
    CHECK(plan.major[0].label == "d1");
    CHECK(plan.major[1].label == "d2");
    REQUIRE(!plan.minor.empty());
    CHECK(plan.minor[0].label == "00:00");
    CHECK(plan.minor[1].label == "06:00");

    const TickPlan abs = plan_ticks(438912, 48, DateMode::absolute);
    CHECK(abs.major[0].label == "2020-01-27");
}

TEST_CASE("an all-missing day renders five grey bands") {
    HourlyGrid g24 = grid_from({{SignalId(SignalId::Core::HR),
                                 std::vector<std::optional<double>>(24, std::nullopt)}});
    std::vector<Diagnostic> warnings;
    const std::string svg = render_heatmap(g24, default_scales(), ChartLayout{}, {}, "p", &warnings);
    std::string error;
    CHECK(svgcheck::well_formed(svg, &error));
    INFO(error);
    for (const SignalId& id : core_signals()) {
        const std::string band = svgcheck::band_fragment(svg, id.name());
        REQUIRE(!band.empty());
        const auto cells = svgcheck::find_tags(band, "rect", {{"class", "cell"}});
        CHECK(cells.size() == 24);
        for (const auto& cell : cells) CHECK(cell.attrs.at("fill") == "#BDBDBD");
    }
}

TEST_CASE("baseline-valued hours paint the exact green anchor") {
    HourlyGrid grid = grid_from({{SignalId(SignalId::Core::HR),
                                  {60.0, 70.0, 80.0}}}); // baseline 70
    const std::string svg = render_heatmap(grid, default_scales(), ChartLayout{});
    const std::string band = svgcheck::band_fragment(svg, "HR");
    const auto cells = svgcheck::find_tags(band, "rect", {{"class", "cell"}});
    REQUIRE(cells.size() == 3);
    CHECK(cells[1].attrs.at("fill") == "#1A9641");
    CHECK(cells[0].attrs.at("fill") == "#0571B0"); // vmin: blue anchor
    CHECK(cells[2].attrs.at("fill") == "#CA0020"); // vmax: red anchor
}

TEST_CASE("rendering is deterministic") {
    SplitMix64 rng(5);
    std::map<SignalId, std::vector<std::optional<double>>> data;
    for (const SignalId& id : core_signals()) {
        std::vector<std::optional<double>> values;
        for (int i = 0; i < 60; ++i) {
            if (rng.next_unit() < 0.15) values.push_back(std::nullopt);
            else values.push_back(rng.uniform(10, 100));
        }
        data[id] = values;
    }
    const HourlyGrid grid = grid_from(data);
    const std::vector<Annotation> notes = {{grid.start_hour + 5, "event", true}};
    CHECK(render_heatmap(grid, default_scales(), ChartLayout{}, notes, "t") ==
          render_heatmap(grid, default_scales(), ChartLayout{}, notes, "t"));
    CHECK(render_barchart(grid, ChartLayout{}, notes, "t") ==
          render_barchart(grid, ChartLayout{}, notes, "t"));
}

TEST_CASE("both chart types declare size and are well formed") {
    const HourlyGrid grid = grid_from({{SignalId(SignalId::Core::HR), {60.0, 70.0, 80.0}}});
    for (const std::string& svg :
         {render_heatmap(grid, default_scales(), ChartLayout{}, {}, "p1"),
          render_barchart(grid, ChartLayout{}, {}, "p1")}) {
        std::string error;
        CHECK(svgcheck::well_formed(svg, &error));
        INFO(error);
        const auto roots = svgcheck::find_tags(svg, "svg");
        REQUIRE(roots.size() == 1);
        CHECK(roots[0].attrs.count("width"));
        CHECK(roots[0].attrs.count("height"));
    }
}

TEST_CASE("midnight dashes appear at every midnight boundary") {
    for (std::size_t hours : {24u, 30u, 72u}) {
        std::vector<std::optional<double>> values(hours, 70.0);
        const HourlyGrid grid =
            grid_from({{SignalId(SignalId::Core::HR), values}}, 438912 + 5); // starts 05:00
        const std::string svg = render_heatmap(grid, default_scales(), ChartLayout{});
        const auto midnights = svgcheck::find_tags(svg, "line", {{"class", "midnight"}});
        CHECK(midnights.size() == static_cast<std::size_t>(count_midnights(grid)));
        const auto noons = svgcheck::find_tags(svg, "line", {{"class", "noon"}});
        CHECK(!noons.empty());
    }
}

TEST_CASE("bar directions follow the sign of the deviation") {
    HourlyGrid grid = grid_from(
        {{SignalId(SignalId::Core::HR), {60.0, 70.0, 80.0, std::nullopt, 70.0}}});
    const std::string svg = render_barchart(grid, ChartLayout{});
    const std::string band = svgcheck::band_fragment(svg, "HR");
    const auto bars = svgcheck::find_tags(band, "rect", {{"class", "bar"}});
    REQUIRE(bars.size() == 4); // missing hour renders no bar
    CHECK(bars[0].attrs.at("data-dir") == "down");
    CHECK(bars[1].attrs.at("data-dir") == "zero");
    CHECK(bars[1].attrs.at("height") == "0.00");
    CHECK(bars[2].attrs.at("data-dir") == "up");
    CHECK(bars[3].attrs.at("data-dir") == "zero");

    // Scaling: the largest deviation fills the half band (28px of 56).
    CHECK(bars[0].attrs.at("height") == "28.00");
    CHECK(bars[2].attrs.at("height") == "28.00");
}

TEST_CASE("constant series draws zero bars and a flat centered line") {
    HourlyGrid grid = grid_from({{SignalId(SignalId::Core::HR), {70.0, 70.0, 70.0}}});
    std::vector<Diagnostic> warnings;
    const std::string svg = render_barchart(grid, ChartLayout{}, {}, "c", &warnings);
    const std::string band = svgcheck::band_fragment(svg, "HR");
    const auto bars = svgcheck::find_tags(band, "rect", {{"class", "bar"}});
    for (const auto& bar : bars) CHECK(bar.attrs.at("height") == "0.00");
    const auto ma = svgcheck::find_tags(band, "polyline", {{"class", "ma"}});
    REQUIRE(ma.size() == 1);
    // All MA points sit on the band center line.
    const std::string points = ma[0].attrs.at("points");
    CHECK(points.find(",74.00") != std::string::npos); // band_y(0)=46, center=46+28
    CHECK(!warnings.empty()); // degenerate range warning
}

TEST_CASE("undefined baseline leaves the band empty with a warning glyph") {
    HourlyGrid grid = grid_from({{SignalId(SignalId::Core::HR), {60.0, 70.0, 80.0}}});
    // SPO2 has no values and no overrides.
    std::vector<Diagnostic> warnings;
    const std::string svg = render_barchart(grid, ChartLayout{}, {}, "w", &warnings);
    const std::string band = svgcheck::band_fragment(svg, "SPO2");
    CHECK(svgcheck::find_tags(band, "rect", {{"class", "bar"}}).empty());
    CHECK(!svgcheck::find_tags(band, "text", {{"class", "warnglyph"}}).empty());
    CHECK(!warnings.empty());
}

TEST_CASE("annotations draw a rule and text inside the range only") {
    HourlyGrid grid = grid_from({{SignalId(SignalId::Core::HR), {60.0, 70.0, 80.0}}});
    std::vector<Diagnostic> warnings;
    const std::vector<Annotation> notes = {{grid.start_hour + 1, "med & dose", false},
                                           {grid.start_hour + 99, "outside", false}};
    const std::string svg = render_heatmap(grid, default_scales(), ChartLayout{}, notes, "a",
                                           &warnings);
    CHECK(svgcheck::find_tags(svg, "line", {{"class", "annotation"}}).size() == 1);
    CHECK(svg.find("med &amp; dose") != std::string::npos);
    CHECK(warnings.size() == 1);
}

TEST_CASE("colorbar labels the range ends and baseline") {
    const ColorScale scale = make_named_scale(SchemeName::RYGB);
    const std::string frag = render_colorbar(scale, 60, 90, 70, 0, 0, 12, 100, ChartLayout{});
    CHECK(frag.find(">60<") != std::string::npos);
    CHECK(frag.find(">70<") != std::string::npos);
    CHECK(frag.find(">90<") != std::string::npos);
    CHECK(frag.find("#1A9641") != std::string::npos); // green stop at the baseline mark

    // Label placement: baseline 70 normalizes to 0.5, so its text sits at
    // mid-strip (y = 100 - 50 + 3 for the text offset), ends at the ends.
    const auto labels = svgcheck::find_tags(frag, "text");
    REQUIRE(labels.size() == 3);
    CHECK(labels[0].attrs.at("y") == "103.00"); // vmin at the bottom
    CHECK(labels[1].attrs.at("y") == "53.00");  // baseline centered
    CHECK(labels[2].attrs.at("y") == "3.00");   // vmax at the top

    const ColorScale discrete = make_named_scale(SchemeName::RYGB, ScaleMode::discrete, false, 5);
    const std::string steps = render_colorbar(discrete, 60, 90, 70, 0, 0, 12, 100, ChartLayout{});
    CHECK(svgcheck::find_tags(steps, "rect").size() == 5);

    const std::string degenerate =
        render_colorbar(scale, 36.5, 36.5, 36.5, 0, 0, 12, 100, ChartLayout{});
    CHECK(svgcheck::find_tags(degenerate, "rect").size() == 1);
    CHECK(degenerate.find("#1A9641") != std::string::npos); // center color block
}

TEST_CASE("color bars can be switched off") {
    const HourlyGrid grid = grid_from({{SignalId(SignalId::Core::HR), {60.0, 70.0, 80.0}}});
    ChartLayout layout;
    CHECK(render_heatmap(grid, default_scales(), layout).find("class=\"colorbar\"") !=
          std::string::npos);
    layout.show_colorbar = false;
    CHECK(render_heatmap(grid, default_scales(), layout).find("class=\"colorbar\"") ==
          std::string::npos);
}

TEST_CASE("grid mismatch is a precondition error") {
    HourlyGrid grid = grid_from({{SignalId(SignalId::Core::HR), {60.0, 70.0}}});
    grid.series.at(SignalId(SignalId::Core::HR)).values.push_back(99.0); // desync
    CHECK_THROWS_AS(render_heatmap(grid, default_scales(), ChartLayout{}), RangeError);
}

TEST_CASE("layout dimensions are validated") {
    ChartLayout layout;
    layout.cell_width_px = 0;
    CHECK_THROWS_AS(layout.validate(), ConfigError);
}
