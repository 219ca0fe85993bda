#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "phonon/errors.hpp"

namespace phonon {

// Locale-independent decimal formatting: 12 significant digits for data files,
// exact shortest round-trip for configuration echoes.
std::string format_number(double value, int significant_digits = 12);
std::string format_number_exact(double value);

// CSV with a fixed header, fixed column order and 12-significant-digit cells.
// Byte-identical for identical inputs.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// CSV variant with preformatted cells, for mixed text/number tables.
void write_csv_text(const std::filesystem::path& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows);

// Minimal self-contained SVG line plots; no timestamps, no external assets.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    std::vector<PlotSeries> series;
};

void write_svg(const std::filesystem::path& path, const LinePlot& plot);

}  // namespace phonon
