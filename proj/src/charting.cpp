#include "hitlog/charting.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace hitlog::chart {

namespace {

std::string num(double v, int decimals = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

std::string label_number(double v) {
    if (std::floor(v) == v && std::fabs(v) < 1e15) return num(v, 0);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

const std::string& color(const ChartSpec& spec, std::size_t i) {
    return spec.palette[i % spec.palette.size()];
}

std::string title_of(const ChartSpec& spec) {
    if (!spec.title.empty()) return spec.title;
    return spec.series.empty() ? std::string() : spec.series.front().title;
}

class SvgWriter {
public:
    SvgWriter(int width, int height) {
        os_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\""
            << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
            << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";
    }

    void text(double x, double y, std::string_view s, std::string_view anchor = "middle", int size = 12,
              std::string_view cls = "label") {
        os_ << "<text class=\"" << cls << "\" x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-family=\"sans-serif\""
            << " font-size=\"" << size << "\" text-anchor=\"" << anchor << "\">" << xml_escape(s) << "</text>\n";
    }

    void line(double x1, double y1, double x2, double y2, std::string_view stroke = "#333333") {
        os_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
            << "\" stroke=\"" << stroke << "\" stroke-width=\"1\"/>\n";
    }

    std::ostream& raw() { return os_; }

    std::string finish() {
        os_ << "</svg>\n";
        return os_.str();
    }

private:
    std::ostringstream os_;
};

void legend(SvgWriter& svg, const ChartSpec& spec, const std::vector<std::string>& labels, double x, double y) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double row = y + static_cast<double>(i) * 18.0;
        svg.raw() << "<rect class=\"legend-swatch\" x=\"" << num(x) << "\" y=\"" << num(row - 10) << "\" width=\"12\""
                  << " height=\"12\" fill=\"" << color(spec, i) << "\"/>\n";
        svg.text(x + 18, row, labels[i], "start", 12, "legend");
    }
}

// Plot frame shared by bar and line charts.
struct Frame {
    double left, top, width, height;
    double bottom() const { return top + height; }
};

Frame frame_for(const ChartSpec& spec, double right_fraction = 0.05) {
    const double w = spec.width, h = spec.height;
    return Frame{0.12 * w, 0.12 * h, w * (1.0 - 0.12 - right_fraction), 0.68 * h};
}

void y_axis(SvgWriter& svg, const Frame& f, double max_value) {
    svg.line(f.left, f.top, f.left, f.bottom());
    svg.line(f.left, f.bottom(), f.left + f.width, f.bottom());
    for (int i = 0; i <= 4; ++i) {
        const double v = max_value * i / 4.0;
        const double y = f.bottom() - f.height * i / 4.0;
        svg.line(f.left - 4, y, f.left, y);
        svg.text(f.left - 6, y + 4, label_number(v), "end", 10, "tick");
    }
}

Series from_pairs(std::vector<std::pair<std::string, double>> rows, const std::string& tag) {
    const std::string prefix = tag + "-";
    std::map<std::string, double> totals;
    for (auto& [key, value] : rows) {
        if (key.compare(0, prefix.size(), prefix) == 0) totals[key.substr(prefix.size())] += value;
    }
    if (totals.empty()) throw EmptyTag(tag);
    Series s{tag, {}};
    for (auto& [label, value] : totals) s.points.push_back(Point{label, value});
    std::stable_sort(s.points.begin(), s.points.end(), [](const Point& a, const Point& b) {
        if (a.value != b.value) return a.value > b.value;
        return a.label < b.label;
    });
    return s;
}

}  // namespace

std::string_view to_string(ChartKind kind) {
    switch (kind) {
        case ChartKind::Bar: return "bar";
        case ChartKind::Pie: return "pie";
        case ChartKind::Line: return "line";
    }
    return "?";
}

ChartKind parse_chart_kind(std::string_view name) {
    if (name == "bar") return ChartKind::Bar;
    if (name == "pie") return ChartKind::Pie;
    if (name == "line") return ChartKind::Line;
    throw ChartError("unknown chart kind '" + std::string(name) + "'");
}

const std::vector<std::string>& default_palette() {
    static const std::vector<std::string> kPalette = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                                                      "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
                                                      "#9c755f", "#bab0ac", "#1f77b4", "#8c564b"};
    return kPalette;
}

void validate(const ChartSpec& spec) {
    if (spec.width < 100 || spec.height < 100) throw ChartError("chart width and height must be >= 100");
    if (spec.palette.empty()) throw ChartError("palette must not be empty");
    if (spec.series.empty()) throw ChartError("chart needs a series");
    for (const auto& s : spec.series) {
        std::set<std::string_view> labels;
        for (const auto& p : s.points) {
            if (!std::isfinite(p.value) || p.value < 0) {
                throw ChartError("series '" + s.title + "': values must be finite and non-negative");
            }
            if (!labels.insert(p.label).second) {
                throw ChartError("series '" + s.title + "': duplicate label '" + p.label + "'");
            }
        }
    }
}

Series series_from_counts(const std::vector<mr::KeyValuePair>& rows, const std::string& tag) {
    std::vector<std::pair<std::string, double>> pairs;
    pairs.reserve(rows.size());
    for (const auto& kv : rows) {
        std::int64_t n = 0;
        const auto [ptr, ec] = std::from_chars(kv.value.data(), kv.value.data() + kv.value.size(), n);
        if (kv.value.empty() || ec != std::errc() || ptr != kv.value.data() + kv.value.size()) {
            throw ChartError("count for '" + kv.key + "' is not an integer: '" + kv.value + "'");
        }
        pairs.emplace_back(kv.key, static_cast<double>(n));
    }
    return from_pairs(std::move(pairs), tag);
}

Series series_from_counts(const pig::Relation& relation, const std::string& tag) {
    std::optional<std::size_t> key_col, count_col;
    for (std::size_t i = 0; i < relation.schema.columns.size(); ++i) {
        const auto type = relation.schema.columns[i].type;
        if (type == pig::ColumnType::Chararray && !key_col) key_col = i;
        if (type == pig::ColumnType::Int && !count_col) count_col = i;
    }
    if (!key_col || !count_col) throw ChartError("relation needs a chararray and an int column");
    std::vector<std::pair<std::string, double>> pairs;
    for (const auto& t : relation.tuples) {
        pairs.emplace_back(std::get<std::string>(t[*key_col]),
                           static_cast<double>(std::get<std::int64_t>(t[*count_col])));
    }
    return from_pairs(std::move(pairs), tag);
}

Series series_from_counts(const mr::fs::path& path, const std::string& tag) {
    return series_from_counts(mr::read_part_files(path), tag);
}

std::vector<PieWedge> pie_layout(const Series& series) {
    double total = 0.0;
    for (const auto& p : series.points) total += p.value;
    if (!(total > 0.0)) throw AllZero();
    std::vector<PieWedge> wedges;
    double start = 0.0;
    for (const auto& p : series.points) {
        if (p.value == 0.0) continue;
        const double sweep = 360.0 * p.value / total;
        wedges.push_back(PieWedge{p.label, p.value, start, sweep});
        start += sweep;
    }
    return wedges;
}

std::string render_bar(const ChartSpec& spec) {
    validate(spec);
    const Series& s = spec.series.front();
    SvgWriter svg(spec.width, spec.height);
    const Frame f = frame_for(spec);
    double max_value = 0.0;
    for (const auto& p : s.points) max_value = std::max(max_value, p.value);

    svg.text(spec.width / 2.0, f.top / 2.0 + 6, title_of(spec), "middle", 16, "title");
    y_axis(svg, f, max_value);

    const double slot = s.points.empty() ? f.width : f.width / static_cast<double>(s.points.size());
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const auto& p = s.points[i];
        const double h = max_value > 0 ? f.height * p.value / max_value : 0.0;
        const double x = f.left + slot * static_cast<double>(i) + slot * 0.15;
        svg.raw() << "<rect class=\"bar\" x=\"" << num(x) << "\" y=\"" << num(f.bottom() - h) << "\" width=\""
                  << num(slot * 0.7) << "\" height=\"" << num(h) << "\" fill=\"" << color(spec, i) << "\"><title>"
                  << xml_escape(p.label) << ": " << label_number(p.value) << "</title></rect>\n";
        svg.text(x + slot * 0.35, f.bottom() + 16, p.label, "middle", 11, "label");
    }
    svg.text(f.left + f.width / 2.0, spec.height - 8.0, s.title, "middle", 12, "axis-title");
    svg.raw() << "<text class=\"axis-title\" x=\"14\" y=\"" << num(f.top + f.height / 2.0)
              << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
              << num(f.top + f.height / 2.0) << ")\">hits</text>\n";
    return svg.finish();
}

std::string render_pie(const ChartSpec& spec) {
    validate(spec);
    const Series& s = spec.series.front();
    const auto wedges = pie_layout(s);
    SvgWriter svg(spec.width, spec.height);
    const double cx = spec.width * 0.38;
    const double cy = spec.height * 0.55;
    const double r = std::min(spec.width * 0.3, spec.height * 0.38);
    svg.text(spec.width / 2.0, spec.height * 0.08 + 6, title_of(spec), "middle", 16, "title");

    std::map<std::string_view, std::size_t> color_index;
    for (std::size_t i = 0; i < s.points.size(); ++i) color_index[s.points[i].label] = i;

    auto point_at = [&](double degrees) {
        const double rad = degrees * std::numbers::pi / 180.0;
        return std::pair{cx + r * std::sin(rad), cy - r * std::cos(rad)};
    };
    for (const auto& w : wedges) {
        const auto& fill = color(spec, color_index[w.label]);
        const std::string tip = xml_escape(w.label) + ": " + label_number(w.value);
        if (wedges.size() == 1) {
            svg.raw() << "<circle class=\"wedge\" cx=\"" << num(cx, 6) << "\" cy=\"" << num(cy, 6) << "\" r=\""
                      << num(r, 6) << "\" fill=\"" << fill << "\"><title>" << tip << "</title></circle>\n";
            continue;
        }
        const auto [x0, y0] = point_at(w.start_degrees);
        const auto [x1, y1] = point_at(w.start_degrees + w.sweep_degrees);
        svg.raw() << "<path class=\"wedge\" d=\"M " << num(cx, 6) << ' ' << num(cy, 6) << " L " << num(x0, 6) << ' '
                  << num(y0, 6) << " A " << num(r, 6) << ' ' << num(r, 6) << " 0 "
                  << (w.sweep_degrees > 180.0 ? 1 : 0) << " 1 " << num(x1, 6) << ' ' << num(y1, 6)
                  << " Z\" fill=\"" << fill << "\" stroke=\"#ffffff\" stroke-width=\"1\"><title>" << tip
                  << "</title></path>\n";
    }
    std::vector<std::string> labels;
    double total = 0.0;
    for (const auto& p : s.points) total += p.value;
    for (const auto& p : s.points) {
        labels.push_back(p.label + " (" + label_number(p.value) + ", " + num(100.0 * p.value / total, 1) + "%)");
    }
    legend(svg, spec, labels, spec.width * 0.72, spec.height * 0.25);
    return svg.finish();
}

std::string render_line(const ChartSpec& spec) {
    validate(spec);
    std::vector<std::vector<std::pair<double, double>>> data;
    double xmin = INFINITY, xmax = -INFINITY, ymax = 0.0;
    for (const auto& s : spec.series) {
        if (s.points.size() < 2) throw TooFewPoints(s.title);
        auto& pts = data.emplace_back();
        for (const auto& p : s.points) {
            double x = 0.0;
            const auto [ptr, ec] = std::from_chars(p.label.data(), p.label.data() + p.label.size(), x);
            if (p.label.empty() || ec != std::errc() || ptr != p.label.data() + p.label.size()) {
                throw ChartError("line chart labels must be numeric, got '" + p.label + "'");
            }
            pts.emplace_back(x, p.value);
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymax = std::max(ymax, p.value);
        }
        std::sort(pts.begin(), pts.end());
    }
    if (ymax <= 0.0) ymax = 1.0;

    SvgWriter svg(spec.width, spec.height);
    const Frame f = frame_for(spec, 0.25);
    svg.text(spec.width / 2.0, f.top / 2.0 + 6, title_of(spec), "middle", 16, "title");
    y_axis(svg, f, ymax);

    auto px = [&](double x) {
        return xmax == xmin ? f.left + f.width / 2.0 : f.left + f.width * (x - xmin) / (xmax - xmin);
    };
    auto py = [&](double y) { return f.bottom() - f.height * y / ymax; };

    std::set<double> xs;
    for (const auto& pts : data) {
        for (const auto& [x, y] : pts) xs.insert(x);
    }
    for (double x : xs) {
        svg.line(px(x), f.bottom(), px(x), f.bottom() + 4);
        svg.text(px(x), f.bottom() + 16, label_number(x), "middle", 10, "tick");
    }

    std::vector<std::string> names;
    for (std::size_t i = 0; i < data.size(); ++i) {
        svg.raw() << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color(spec, i)
                  << "\" stroke-width=\"2\" points=\"";
        for (std::size_t k = 0; k < data[i].size(); ++k) {
            svg.raw() << (k ? " " : "") << num(px(data[i][k].first)) << ',' << num(py(data[i][k].second));
        }
        svg.raw() << "\"><title>" << xml_escape(spec.series[i].title) << "</title></polyline>\n";
        names.push_back(spec.series[i].title);
    }
    legend(svg, spec, names, f.left + f.width + 16, f.top + 12);
    return svg.finish();
}

std::string render(const ChartSpec& spec) {
    switch (spec.kind) {
        case ChartKind::Bar: return render_bar(spec);
        case ChartKind::Pie: return render_pie(spec);
        case ChartKind::Line: return render_line(spec);
    }
    throw ChartError("unknown chart kind");
}

void write_svg(const std::string& svg, const mr::fs::path& path) {
    if (path.has_parent_path()) mr::fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << svg;
    if (!os) throw ChartError("write failure: " + path.string());
}

}  // namespace hitlog::chart
