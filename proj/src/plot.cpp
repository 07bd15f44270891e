#include "mobiq/plot.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mobiq/config.hpp"

namespace mobiq {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return std::string(s);
}

// Two decimals are plenty for pixel coordinates and keep files small.
std::string px(double v) {
    const double r = std::round(v * 100.0) / 100.0;
    std::string s = csv_number(r);
    return s;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;

    double place(double v, double a, double b) const {
        const double t = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo))
                             : (v - lo) / (hi - lo);
        return a + t * (b - a);
    }

    std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            const int klo = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
            const int khi = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
            int step = 1;
            if (khi - klo > 8) step = (khi - klo + 5) / 6;
            for (int k = klo; k <= khi; k += step) out.push_back(std::pow(10.0, k));
            if (out.empty()) out = {lo, hi};
            return out;
        }
        const double span = hi - lo;
        const double raw = span / 5.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        const double norm = raw / mag;
        const double step = (norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0) * mag;
        double t = std::ceil(lo / step - 1e-9) * step;
        for (; t <= hi + 1e-9 * span; t += step) {
            out.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
        }
        return out;
    }
};

Axis make_axis(double lo, double hi, bool log, const char* name) {
    if (log && !(lo > 0.0)) {
        throw ConfigError({{0, std::string("log ") + name + " axis needs positive values"}});
    }
    if (lo == hi) {
        if (log) {
            lo /= 10.0;
            hi *= 10.0;
        } else {
            lo -= 1.0;
            hi += 1.0;
        }
    } else if (log) {
        const double pad = std::pow(10.0, 0.05 * (std::log10(hi) - std::log10(lo)));
        lo /= pad;
        hi *= pad;
    } else {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    return Axis{lo, hi, log};
}

struct SeriesData {
    std::string label;
    std::vector<double> x, y, lo, hi;
};

}  // namespace

PlotSpec parse_plot_spec(const std::string& text) {
    PlotSpec spec;
    std::vector<ConfigViolation> bad;
    std::map<std::string, int> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::string line =
            trim(text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos));
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            bad.push_back({line_no, "expected key = value"});
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (seen.count(key)) {
            bad.push_back({line_no, "duplicate key: " + key});
            continue;
        }
        seen[key] = line_no;
        auto boolean = [&](bool& target) {
            if (value == "true" || value == "1") {
                target = true;
            } else if (value == "false" || value == "0") {
                target = false;
            } else {
                bad.push_back({line_no, key + " expects true or false"});
            }
        };
        auto integer = [&](int& target) {
            try {
                const double v = parse_csv_number(value);
                if (v < 64 || v > 8192 || v != std::floor(v)) {
                    bad.push_back({line_no, key + " expects an integer in [64, 8192]"});
                } else {
                    target = static_cast<int>(v);
                }
            } catch (const IoError&) {
                bad.push_back({line_no, key + " expects an integer"});
            }
        };
        if (key == "x") spec.x = value;
        else if (key == "y") spec.y = value;
        else if (key == "series") spec.series = value;
        else if (key == "ci_lo") spec.ci_lo = value;
        else if (key == "ci_hi") spec.ci_hi = value;
        else if (key == "filter") {
            // comma-separated column:value pairs
            std::size_t start = 0;
            while (start <= value.size()) {
                std::size_t comma = value.find(',', start);
                const std::string item = trim(
                    value.substr(start, comma == std::string::npos ? std::string::npos
                                                                   : comma - start));
                start = comma == std::string::npos ? value.size() + 1 : comma + 1;
                if (item.empty()) continue;
                const std::size_t colon = item.find(':');
                if (colon == std::string::npos) {
                    bad.push_back({line_no, "filter items look like column:value"});
                } else {
                    spec.filters.emplace_back(trim(item.substr(0, colon)),
                                              trim(item.substr(colon + 1)));
                }
            }
        } else if (key == "logx") boolean(spec.logx);
        else if (key == "logy") boolean(spec.logy);
        else if (key == "title") spec.title = value;
        else if (key == "xlabel") spec.xlabel = value;
        else if (key == "ylabel") spec.ylabel = value;
        else if (key == "out") spec.out = value;
        else if (key == "width") integer(spec.width);
        else if (key == "height") integer(spec.height);
        else bad.push_back({line_no, "unknown plot key: " + key});
    }
    if (spec.x.empty()) bad.push_back({0, "plot spec needs x = <column>"});
    if (spec.y.empty()) bad.push_back({0, "plot spec needs y = <column>"});
    if (spec.ci_lo.empty() != spec.ci_hi.empty()) {
        bad.push_back({0, "ci_lo and ci_hi must be given together"});
    }
    if (!bad.empty()) throw ConfigError(std::move(bad));
    return spec;
}

std::string render_svg(const CsvTable& table, const PlotSpec& spec) {
    auto need = [&](const std::string& name) {
        const int idx = table.column(name);
        if (idx < 0) throw ConfigError({{0, "csv has no column named " + name}});
        return idx;
    };
    const int xi = need(spec.x);
    const int yi = need(spec.y);
    const int si = spec.series.empty() ? -1 : need(spec.series);
    const int li = spec.ci_lo.empty() ? -1 : need(spec.ci_lo);
    const int hi_i = spec.ci_hi.empty() ? -1 : need(spec.ci_hi);
    std::vector<int> fidx;
    for (const auto& [col, _] : spec.filters) fidx.push_back(need(col));

    std::vector<SeriesData> series;
    auto series_for = [&](const std::string& label) -> SeriesData& {
        for (auto& s : series) {
            if (s.label == label) return s;
        }
        series.push_back(SeriesData{label});
        return series.back();
    };
    for (const auto& row : table.rows) {
        bool keep = true;
        for (std::size_t f = 0; f < spec.filters.size(); ++f) {
            if (row[static_cast<std::size_t>(fidx[f])] != spec.filters[f].second) {
                keep = false;
                break;
            }
        }
        if (!keep) continue;
        SeriesData& s = series_for(si < 0 ? std::string() : row[static_cast<std::size_t>(si)]);
        s.x.push_back(parse_csv_number(row[static_cast<std::size_t>(xi)]));
        s.y.push_back(parse_csv_number(row[static_cast<std::size_t>(yi)]));
        if (li >= 0) {
            s.lo.push_back(parse_csv_number(row[static_cast<std::size_t>(li)]));
            s.hi.push_back(parse_csv_number(row[static_cast<std::size_t>(hi_i)]));
        }
    }
    if (series.empty()) throw ConfigError({{0, "no rows left after filters"}});

    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : series) {
        for (double v : s.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
        for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
        for (double v : s.lo) ymin = std::min(ymin, v);
        for (double v : s.hi) ymax = std::max(ymax, v);
    }
    if (spec.logy && !(ymin > 0.0)) throw ConfigError({{0, "log y axis needs positive values"}});
    if (spec.logx && !(xmin > 0.0)) throw ConfigError({{0, "log x axis needs positive values"}});
    const Axis ax = make_axis(xmin, xmax, spec.logx, "x");
    const Axis ay = make_axis(ymin, ymax, spec.logy, "y");

    const double W = spec.width, H = spec.height;
    const double ml = 72, mr = 24, mt = spec.title.empty() ? 24 : 44, mb = 56;
    auto X = [&](double v) { return ax.place(v, ml, W - mr); };
    auto Y = [&](double v) { return ay.place(v, H - mb, mt); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(W) + "\" height=\"" +
           px(H) + "\" viewBox=\"0 0 " + px(W) + " " + px(H) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\">\n";

    // axes + ticks + grid
    svg += "<line x1=\"" + px(ml) + "\" y1=\"" + px(H - mb) + "\" x2=\"" + px(W - mr) +
           "\" y2=\"" + px(H - mb) + "\" stroke=\"#222\"/>\n";
    svg += "<line x1=\"" + px(ml) + "\" y1=\"" + px(mt) + "\" x2=\"" + px(ml) + "\" y2=\"" +
           px(H - mb) + "\" stroke=\"#222\"/>\n";
    for (double t : ax.ticks()) {
        const double x = X(t);
        svg += "<line x1=\"" + px(x) + "\" y1=\"" + px(mt) + "\" x2=\"" + px(x) + "\" y2=\"" +
               px(H - mb) + "\" stroke=\"#ddd\"/>\n";
        svg += "<line x1=\"" + px(x) + "\" y1=\"" + px(H - mb) + "\" x2=\"" + px(x) +
               "\" y2=\"" + px(H - mb + 5) + "\" stroke=\"#222\"/>\n";
        svg += "<text x=\"" + px(x) + "\" y=\"" + px(H - mb + 18) +
               "\" text-anchor=\"middle\">" + xml_escape(csv_number(t)) + "</text>\n";
    }
    for (double t : ay.ticks()) {
        const double y = Y(t);
        svg += "<line x1=\"" + px(ml) + "\" y1=\"" + px(y) + "\" x2=\"" + px(W - mr) +
               "\" y2=\"" + px(y) + "\" stroke=\"#ddd\"/>\n";
        svg += "<line x1=\"" + px(ml - 5) + "\" y1=\"" + px(y) + "\" x2=\"" + px(ml) +
               "\" y2=\"" + px(y) + "\" stroke=\"#222\"/>\n";
        svg += "<text x=\"" + px(ml - 8) + "\" y=\"" + px(y + 4) + "\" text-anchor=\"end\">" +
               xml_escape(csv_number(t)) + "</text>\n";
    }

    // data
    for (std::size_t k = 0; k < series.size(); ++k) {
        const SeriesData& s = series[k];
        const char* color = kPalette[k % kPaletteSize];
        if (s.x.size() > 1) {
            std::string pts;
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i) pts += ' ';
                pts += px(X(s.x[i])) + "," + px(Y(s.y[i]));
            }
            svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
                   "\" stroke-width=\"1.8\"/>\n";
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double x = X(s.x[i]);
            if (!s.lo.empty()) {
                const double ylo = Y(s.lo[i]), yhi = Y(s.hi[i]);
                svg += "<line x1=\"" + px(x) + "\" y1=\"" + px(ylo) + "\" x2=\"" + px(x) +
                       "\" y2=\"" + px(yhi) + "\" stroke=\"" + color + "\"/>\n";
                svg += "<line x1=\"" + px(x - 3) + "\" y1=\"" + px(ylo) + "\" x2=\"" +
                       px(x + 3) + "\" y2=\"" + px(ylo) + "\" stroke=\"" + color + "\"/>\n";
                svg += "<line x1=\"" + px(x - 3) + "\" y1=\"" + px(yhi) + "\" x2=\"" +
                       px(x + 3) + "\" y2=\"" + px(yhi) + "\" stroke=\"" + color + "\"/>\n";
            }
            svg += "<circle cx=\"" + px(x) + "\" cy=\"" + px(Y(s.y[i])) + "\" r=\"3\" fill=\"" +
                   color + "\"/>\n";
        }
    }

    // legend (only when a series column set more than one label apart)
    if (series.size() > 1 || (series.size() == 1 && !series[0].label.empty())) {
        const double lx = W - mr - 170, ly = mt + 10;
        svg += "<rect x=\"" + px(lx - 8) + "\" y=\"" + px(ly - 14) + "\" width=\"178\" height=\"" +
               px(series.size() * 18 + 10.0) + "\" fill=\"white\" stroke=\"#bbb\"/>\n";
        for (std::size_t k = 0; k < series.size(); ++k) {
            const double y = ly + static_cast<double>(k) * 18.0;
            svg += "<line x1=\"" + px(lx) + "\" y1=\"" + px(y - 4) + "\" x2=\"" + px(lx + 24) +
                   "\" y2=\"" + px(y - 4) + "\" stroke=\"" + std::string(kPalette[k % kPaletteSize]) +
                   "\" stroke-width=\"2\"/>\n";
            const std::string label = series[k].label.empty() ? spec.y : series[k].label;
            svg += "<text x=\"" + px(lx + 30) + "\" y=\"" + px(y) + "\">" + xml_escape(label) +
                   "</text>\n";
        }
    }

    // labels
    if (!spec.title.empty()) {
        svg += "<text x=\"" + px(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
               xml_escape(spec.title) + "</text>\n";
    }
    const std::string xlabel = spec.xlabel.empty() ? spec.x : spec.xlabel;
    const std::string ylabel = spec.ylabel.empty() ? spec.y : spec.ylabel;
    svg += "<text x=\"" + px((ml + W - mr) / 2) + "\" y=\"" + px(H - 12) +
           "\" text-anchor=\"middle\">" + xml_escape(xlabel) + "</text>\n";
    svg += "<text x=\"16\" y=\"" + px((mt + H - mb) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           px((mt + H - mb) / 2) + ")\">" + xml_escape(ylabel) + "</text>\n";
    svg += "</g>\n</svg>\n";
    return svg;
}

}  // namespace mobiq
