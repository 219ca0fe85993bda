#include "phonon/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace phonon {

namespace {

std::string to_chars_string(double value, std::chars_format format, int precision) {
    char buffer[64];
    const auto result = precision < 0
                            ? std::to_chars(buffer, buffer + sizeof buffer, value, format)
                            : std::to_chars(buffer, buffer + sizeof buffer, value, format,
                                            precision);
    return std::string(buffer, result.ptr);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

// pixel-coordinate formatting for SVG paths
std::string px(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.2f", value);
    return buffer;
}

// ~n "nice" tick positions covering [lo, hi]
std::vector<double> nice_ticks(double lo, double hi, int target) {
    if (!(hi > lo)) return {lo};
    const double raw_step = (hi - lo) / std::max(1, target);
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw_step)));
    const double normalized = raw_step / magnitude;
    double step = 10.0 * magnitude;
    if (normalized < 1.5) {
        step = magnitude;
    } else if (normalized < 3.0) {
        step = 2.0 * magnitude;
    } else if (normalized < 7.0) {
        step = 5.0 * magnitude;
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 0.5 * step; t += step) {
        ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    }
    return ticks;
}

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string format_number(double value, int significant_digits) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";
    return to_chars_string(value, std::chars_format::general, significant_digits);
}

std::string format_number_exact(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return to_chars_string(value, std::chars_format::general, -1);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::vector<std::vector<std::string>> cells;
    cells.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<std::string> formatted;
        formatted.reserve(row.size());
        for (double value : row) formatted.push_back(format_number(value));
        cells.push_back(std::move(formatted));
    }
    write_csv_text(path, header, cells);
}

void write_csv_text(const std::filesystem::path& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
    std::string content;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) content += ',';
        content += header[i];
    }
    content += '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size()) {
            throw IoError("csv row width " + std::to_string(row.size()) +
                          " does not match header width " + std::to_string(header.size()));
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) content += ',';
            content += row[i];
        }
        content += '\n';
    }
    write_file(path, content);
}

void write_svg(const std::filesystem::path& path, const LinePlot& plot) {
    constexpr double width = 720.0, height = 480.0;
    constexpr double ml = 78.0, mr = 24.0, mt = 42.0, mb = 58.0;
    const double plot_w = width - ml - mr;
    const double plot_h = height - mt - mb;
    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const PlotSeries& s : plot.series) {
        for (double x : s.x) {
            const double v = plot.log_x ? std::log10(x) : x;
            x_lo = std::min(x_lo, v);
            x_hi = std::max(x_hi, v);
        }
        for (double y : s.y) {
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    }
    if (!(x_hi > x_lo)) { x_lo -= 0.5; x_hi += 0.5; }
    if (!(y_hi > y_lo)) { y_lo -= 0.5; y_hi += 0.5; }
    const double y_pad = 0.05 * (y_hi - y_lo);
    y_lo -= y_pad;
    y_hi += y_pad;

    auto x_px = [&](double v) { return ml + (v - x_lo) / (x_hi - x_lo) * plot_w; };
    auto y_px = [&](double v) { return mt + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(width) + "\" height=\"" +
           px(height) + "\" viewBox=\"0 0 " + px(width) + " " + px(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + px(width / 2) + "\" y=\"24\" text-anchor=\"middle\" " +
           "font-family=\"sans-serif\" font-size=\"16\">" + xml_escape(plot.title) + "</text>\n";

    // ticks and grid
    std::vector<double> xticks;
    if (plot.log_x) {
        for (int p = static_cast<int>(std::floor(x_lo)); p <= static_cast<int>(std::ceil(x_hi));
             ++p) {
            if (p >= x_lo - 1e-9 && p <= x_hi + 1e-9) xticks.push_back(p);
        }
        if (xticks.size() < 2) xticks = nice_ticks(x_lo, x_hi, 5);
    } else {
        xticks = nice_ticks(x_lo, x_hi, 6);
    }
    for (double t : xticks) {
        const double x = x_px(t);
        svg += "<line x1=\"" + px(x) + "\" y1=\"" + px(mt) + "\" x2=\"" + px(x) + "\" y2=\"" +
               px(mt + plot_h) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        const double label = plot.log_x ? std::pow(10.0, t) : t;
        svg += "<text x=\"" + px(x) + "\" y=\"" + px(mt + plot_h + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               format_number(label, 6) + "</text>\n";
    }
    for (double t : nice_ticks(y_lo, y_hi, 6)) {
        const double y = y_px(t);
        svg += "<line x1=\"" + px(ml) + "\" y1=\"" + px(y) + "\" x2=\"" + px(ml + plot_w) +
               "\" y2=\"" + px(y) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + px(ml - 6) + "\" y=\"" + px(y + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               format_number(t, 6) + "</text>\n";
    }

    // axes frame
    svg += "<rect x=\"" + px(ml) + "\" y=\"" + px(mt) + "\" width=\"" + px(plot_w) +
           "\" height=\"" + px(plot_h) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + px(ml + plot_w / 2) + "\" y=\"" + px(height - 14) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           xml_escape(plot.x_label) + "</text>\n";
    svg += "<text x=\"18\" y=\"" + px(mt + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " +
           px(mt + plot_h / 2) + ")\">" + xml_escape(plot.y_label) + "</text>\n";

    // data
    for (std::size_t s = 0; s < plot.series.size(); ++s) {
        const PlotSeries& series = plot.series[s];
        const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
        std::string points;
        for (std::size_t i = 0; i < series.x.size(); ++i) {
            const double xv = plot.log_x ? std::log10(series.x[i]) : series.x[i];
            points += px(x_px(xv)) + "," + px(y_px(series.y[i])) + " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        if (plot.series.size() > 1 && !series.label.empty()) {
            const double ly = mt + 16 + 16 * static_cast<double>(s);
            svg += "<line x1=\"" + px(ml + plot_w - 120) + "\" y1=\"" + px(ly - 4) + "\" x2=\"" +
                   px(ml + plot_w - 98) + "\" y2=\"" + px(ly - 4) + "\" stroke=\"" + color +
                   "\" stroke-width=\"1.5\"/>\n";
            svg += "<text x=\"" + px(ml + plot_w - 92) + "\" y=\"" + px(ly) +
                   "\" font-family=\"sans-serif\" font-size=\"11\">" + xml_escape(series.label) +
                   "</text>\n";
        }
    }
    svg += "</svg>\n";
    write_file(path, svg);
}

}  // namespace phonon
