// Report bundle I/O: run.csv / trace_final.csv emission, CSV reading for the
// plot command, and deterministic SVG line plots written without any plotting
// dependency.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cauchymann/experiments.hpp"

namespace cauchymann {

inline void write_trace_csv(std::ostream& os, const TraceFunction& final_v,
                            const TraceFunction* truth) {
    os << "x,psi_final,truth\n";
    for (int i = 0; i < final_v.size(); ++i) {
        os << final_v.s[static_cast<std::size_t>(i)] << "," << final_v[i] << ",";
        if (truth) os << (*truth)[i];
        os << "\n";
    }
}

// run.csv, trace_final.csv and the effective configuration echo.
inline void write_report_bundle(const std::filesystem::path& dir, const ExperimentReport& report,
                                const std::string& config_echo) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream os(dir / "run.csv");
        if (!os) throw std::runtime_error("cannot write " + (dir / "run.csv").string());
        write_history_csv(os, report.record, &report.truth);
    }
    {
        std::ofstream os(dir / "trace_final.csv");
        write_trace_csv(os, report.record.final_v, &report.truth);
    }
    {
        std::ofstream os(dir / "config.json");
        os << config_echo;
        if (!config_echo.empty() && config_echo.back() != '\n') os << "\n";
    }
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (first) {
            table.header = cells;
            first = false;
        } else {
            cells.resize(table.header.size());
            table.rows.push_back(cells);
        }
    }
    return table;
}

// SVG line plots.

struct PlotCurve {
    std::vector<double> x, y;
    std::string color = "#000000";
    std::string label;
};

namespace detail {

inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace detail

// Fixed-size canvas, linear or log10 ordinate; nonpositive values are skipped
// in log mode. Output is byte-deterministic for identical input.
inline void write_line_plot(std::ostream& os, const std::string& title,
                            const std::vector<PlotCurve>& curves, bool log_y) {
    const double width = 720, height = 480;
    const double ml = 80, mr = 20, mt = 40, mb = 50;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& c : curves) {
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            double yv = c.y[i];
            if (log_y) {
                if (!(yv > 0.0)) continue;
                yv = std::log10(yv);
            }
            if (!std::isfinite(yv) || !std::isfinite(c.x[i])) continue;
            xmin = std::min(xmin, c.x[i]);
            xmax = std::max(xmax, c.x[i]);
            ymin = std::min(ymin, yv);
            ymax = std::max(ymax, yv);
        }
    }
    if (!(xmin < xmax)) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (!(ymin < ymax)) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto py = [&](double y) { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); };

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
       << title << "</text>\n";
    // axes
    os << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr << "\" y2=\""
       << height - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
       << "\" stroke=\"black\"/>\n";
    // ticks
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + i * (xmax - xmin) / 5;
        os << "<line x1=\"" << px(xv) << "\" y1=\"" << height - mb << "\" x2=\"" << px(xv)
           << "\" y2=\"" << height - mb + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << px(xv) << "\" y=\"" << height - mb + 20
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << detail::fmt_num(xv) << "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const double yv = ymin + i * (ymax - ymin) / 5;
        const std::string label = log_y ? ("1e" + detail::fmt_num(yv)) : detail::fmt_num(yv);
        os << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << ml << "\" y2=\""
           << py(yv) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << label
           << "</text>\n";
    }
    // curves
    int legend_row = 0;
    for (const auto& c : curves) {
        os << "<polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            double yv = c.y[i];
            if (log_y) {
                if (!(yv > 0.0)) continue;
                yv = std::log10(yv);
            }
            if (!std::isfinite(yv) || !std::isfinite(c.x[i])) continue;
            if (!first) os << " ";
            os << detail::fmt_num(px(c.x[i])) << "," << detail::fmt_num(py(yv));
            first = false;
        }
        os << "\"/>\n";
        if (!c.label.empty()) {
            const double ly = mt + 14 + 16 * legend_row++;
            os << "<line x1=\"" << width - mr - 150 << "\" y1=\"" << ly - 4 << "\" x2=\""
               << width - mr - 120 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << c.color
               << "\" stroke-width=\"1.5\"/>\n";
            os << "<text x=\"" << width - mr - 114 << "\" y=\"" << ly
               << "\" font-family=\"sans-serif\" font-size=\"12\">" << c.label << "</text>\n";
        }
    }
    os << "</svg>\n";
}

}  // namespace cauchymann
