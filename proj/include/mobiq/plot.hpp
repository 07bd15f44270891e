#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mobiq/csvio.hpp"

namespace mobiq {

// Declarative plot description parsed from a small key = value file.
struct PlotSpec {
    std::string x;                       // column holding x values (required)
    std::string y;                       // column holding y values (required)
    std::string series;                  // optional grouping column
    std::string ci_lo, ci_hi;            // optional CI columns -> error bars
    std::vector<std::pair<std::string, std::string>> filters;  // column == value
    bool logx = false;
    bool logy = false;
    std::string title, xlabel, ylabel;
    std::string out;                     // optional output file name
    int width = 800;
    int height = 560;
};

// ConfigError (with line numbers) for unknown keys, duplicates or bad values.
PlotSpec parse_plot_spec(const std::string& text);

// Self-contained SVG text. ConfigError when a named column is missing, when a
// filter matches nothing, or when a log axis meets a nonpositive value.
std::string render_svg(const CsvTable& table, const PlotSpec& spec);

}  // namespace mobiq
