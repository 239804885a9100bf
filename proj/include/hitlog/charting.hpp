#pragma once

// SVG 1.1 bar, pie and line charts for hit counts and benchmark timings.
// Output is a pure function of the ChartSpec.

#include "hitlog/mrengine.hpp"
#include "hitlog/piglite/relation.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hitlog::chart {

class ChartError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyTag : public ChartError {
public:
    explicit EmptyTag(const std::string& tag) : ChartError("EmptyTag: no rows with tag '" + tag + "'") {}
};

class AllZero : public ChartError {
public:
    AllZero() : ChartError("AllZero: pie chart needs a positive total") {}
};

class TooFewPoints : public ChartError {
public:
    explicit TooFewPoints(const std::string& series)
        : ChartError("TooFewPoints: line series '" + series + "' needs at least 2 points") {}
};

struct Point {
    std::string label;
    double value = 0.0;
};

struct Series {
    std::string title;
    std::vector<Point> points;
};

enum class ChartKind { Bar, Pie, Line };

std::string_view to_string(ChartKind kind);
ChartKind parse_chart_kind(std::string_view name);

const std::vector<std::string>& default_palette();

struct ChartSpec {
    ChartKind kind = ChartKind::Bar;
    std::vector<Series> series;  // bar and pie use series.front()
    int width = 640;
    int height = 400;
    std::vector<std::string> palette = default_palette();
    std::string title;  // falls back to the first series title
};

/// Throws ChartError when size, palette or series invariants are violated.
void validate(const ChartSpec& spec);

/// Rows whose key starts with `<tag>-`, prefix stripped, duplicate labels
/// summed, ordered by descending count then label.
Series series_from_counts(const std::vector<mr::KeyValuePair>& rows, const std::string& tag);
/// From the (key, count) columns of a relation: first chararray and first int column.
Series series_from_counts(const pig::Relation& relation, const std::string& tag);
/// From part files or a directory of them.
Series series_from_counts(const mr::fs::path& path, const std::string& tag);

struct PieWedge {
    std::string label;
    double value = 0.0;
    double start_degrees = 0.0;  // clockwise from 12 o'clock
    double sweep_degrees = 0.0;
};

/// Wedges for every nonzero point, in point order. Throws AllZero.
std::vector<PieWedge> pie_layout(const Series& series);

std::string render_bar(const ChartSpec& spec);
std::string render_pie(const ChartSpec& spec);
std::string render_line(const ChartSpec& spec);
std::string render(const ChartSpec& spec);

void write_svg(const std::string& svg, const mr::fs::path& path);

}  // namespace hitlog::chart
