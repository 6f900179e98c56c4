#pragma once

// CSV tables and static SVG plots for potential curves and phase diagrams.
// Output bytes depend only on the input values.

#include "symtherm/combinatorics.hpp"
#include "symtherm/curie_weiss.hpp"
#include "symtherm/error.hpp"
#include "symtherm/sector_cache.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace symtherm {

// ---------------------------------------------------------------------------
// CSV

/// Cells of a CSV table; an empty optional is an empty field.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::optional<double>>> rows;
};

inline std::string to_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        out += table.header[i];
    }
    out += "\r\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            if (row[i]) out += format_double(*row[i] == 0.0 ? 0.0 : *row[i]);
        }
        out += "\r\n";
    }
    return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

inline void write_csv(const CsvTable& table, const std::filesystem::path& path) { write_text_file(path, to_csv(table)); }

inline CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && !first) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (first) {
            table.header = std::move(cells);
            first = false;
            continue;
        }
        std::vector<std::optional<double>> row;
        for (const auto& c : cells) {
            if (c.empty()) {
                row.emplace_back();
                continue;
            }
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc{} || ptr != c.data() + c.size()) throw IoError("malformed CSV number '" + c + "'");
            row.emplace_back(v);
        }
        row.resize(table.header.size());
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

/// Curves going into one potential table. All present curves must share the l grid.
struct PotentialSet {
    std::optional<ThermoCurve> exact;
    std::optional<ThermoCurve> asymptotic;
    std::optional<ThermoCurve> analytic;
    std::optional<ThermoCurve> analytic_printed;

    std::vector<const ThermoCurve*> present() const {
        std::vector<const ThermoCurve*> v;
        for (const auto* c : {&exact, &asymptotic, &analytic, &analytic_printed})
            if (*c) v.push_back(&**c);
        return v;
    }
};

/// Columns l, f_exact, f_asymptotic, f_analytic, s, e_numeric, e_analytic
/// (plus f_analytic_printed, e_analytic_printed when that curve is present).
inline CsvTable potential_table(const PotentialSet& set) {
    CsvTable t;
    t.header = {"l", "f_exact", "f_asymptotic", "f_analytic", "s", "e_numeric", "e_analytic"};
    if (set.analytic_printed) {
        t.header.emplace_back("f_analytic_printed");
        t.header.emplace_back("e_analytic_printed");
    }
    const auto curves = set.present();
    if (curves.empty()) return t;
    const std::size_t rows = curves.front()->points.size();
    for (const auto* c : curves) {
        if (c->points.size() != rows) throw DomainError("potential curves have different grids");
        for (std::size_t i = 0; i < rows; ++i)
            if (c->points[i].l != curves.front()->points[i].l) throw DomainError("potential curves have different grids");
    }
    auto f_of = [](const std::optional<ThermoCurve>& c, std::size_t i) -> std::optional<double> {
        return c ? std::optional<double>(c->points[i].f) : std::nullopt;
    };
    auto e_of = [](const std::optional<ThermoCurve>& c, std::size_t i) -> std::optional<double> {
        return c ? std::optional<double>(c->points[i].e) : std::nullopt;
    };
    for (std::size_t i = 0; i < rows; ++i) {
        const double l = curves.front()->points[i].l;
        std::vector<std::optional<double>> row{l,
                                               f_of(set.exact, i),
                                               f_of(set.asymptotic, i),
                                               f_of(set.analytic, i),
                                               rate_entropy_two_row(l),
                                               e_of(set.asymptotic, i),
                                               e_of(set.analytic, i)};
        if (set.analytic_printed) {
            row.push_back(f_of(set.analytic_printed, i));
            row.push_back(e_of(set.analytic_printed, i));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

/// Columns beta, alpha, l_star, f_star, s_star, e_star.
inline CsvTable phase_table(std::span<const PhasePoint> points) {
    CsvTable t;
    t.header = {"beta", "alpha", "l_star", "f_star", "s_star", "e_star"};
    for (const auto& p : points) t.rows.push_back({p.beta, p.alpha, p.l_star, p.f_star, p.s_star, p.e_star});
    return t;
}

// ---------------------------------------------------------------------------
// SVG

namespace detail {

inline std::string fmt(const char* spec, double v) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), spec, v);
    return buf.data();
}

struct Frame {
    double width = 720, height = 480;
    double left = 80, right = 150, top = 30, bottom = 60;
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;

    double px(double x) const { return left + (x - x_min) / (x_max - x_min) * (width - left - right); }
    double py(double y) const { return height - bottom - (y - y_min) / (y_max - y_min) * (height - top - bottom); }
};

inline void axes(std::ostringstream& os, const Frame& f, const std::string& x_label, const std::string& y_label,
                 bool numeric_ticks) {
    const double x0 = f.left, x1 = f.width - f.right, y0 = f.height - f.bottom, y1 = f.top;
    os << "<line x1=\"" << fmt("%.2f", x0) << "\" y1=\"" << fmt("%.2f", y0) << "\" x2=\"" << fmt("%.2f", x1)
       << "\" y2=\"" << fmt("%.2f", y0) << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << fmt("%.2f", x0) << "\" y1=\"" << fmt("%.2f", y0) << "\" x2=\"" << fmt("%.2f", x0)
       << "\" y2=\"" << fmt("%.2f", y1) << "\" stroke=\"black\"/>\n";
    if (numeric_ticks) {
        for (int k = 0; k <= 4; ++k) {
            const double xv = f.x_min + (f.x_max - f.x_min) * k / 4.0;
            const double yv = f.y_min + (f.y_max - f.y_min) * k / 4.0;
            os << "<text x=\"" << fmt("%.2f", f.px(xv)) << "\" y=\"" << fmt("%.2f", y0 + 18)
               << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt("%.4g", xv) << "</text>\n";
            os << "<text x=\"" << fmt("%.2f", x0 - 6) << "\" y=\"" << fmt("%.2f", f.py(yv) + 4)
               << "\" font-size=\"11\" text-anchor=\"end\">" << fmt("%.4g", yv) << "</text>\n";
        }
    }
    os << "<text x=\"" << fmt("%.2f", 0.5 * (x0 + x1)) << "\" y=\"" << fmt("%.2f", f.height - 15)
       << "\" font-size=\"14\" text-anchor=\"middle\">" << x_label << "</text>\n";
    os << "<text x=\"20\" y=\"" << fmt("%.2f", 0.5 * (y0 + y1)) << "\" font-size=\"14\" text-anchor=\"middle\" "
       << "transform=\"rotate(-90 20 " << fmt("%.2f", 0.5 * (y0 + y1)) << ")\">" << y_label << "</text>\n";
}

// viridis, sampled at 9 points
inline std::string colormap(double t) {
    static constexpr std::array<std::array<double, 3>, 9> stops{{{68, 1, 84},
                                                                  {71, 44, 122},
                                                                  {59, 81, 139},
                                                                  {44, 113, 142},
                                                                  {33, 144, 141},
                                                                  {39, 173, 129},
                                                                  {92, 200, 99},
                                                                  {170, 220, 50},
                                                                  {253, 231, 37}}};
    t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0) * (stops.size() - 1);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
    const double u = t - static_cast<double>(i);
    std::array<char, 16> buf{};
    std::array<int, 3> c{};
    for (int k = 0; k < 3; ++k) c[k] = static_cast<int>(std::lround(stops[i][k] + u * (stops[i + 1][k] - stops[i][k])));
    std::snprintf(buf.data(), buf.size(), "#%02x%02x%02x", c[0], c[1], c[2]);
    return buf.data();
}

} // namespace detail

/// Line plot of f(l), one polyline per curve, with a legend.
inline std::string potential_svg(std::span<const ThermoCurve> curves) {
    if (curves.empty()) throw DomainError("nothing to plot");
    detail::Frame frame;
    frame.x_min = INFINITY;
    frame.x_max = -INFINITY;
    frame.y_min = INFINITY;
    frame.y_max = -INFINITY;
    for (const auto& c : curves) {
        if (c.points.empty()) throw DomainError("cannot plot an empty curve");
        for (const auto& p : c.points) {
            frame.x_min = std::min(frame.x_min, p.l);
            frame.x_max = std::max(frame.x_max, p.l);
            frame.y_min = std::min(frame.y_min, p.f);
            frame.y_max = std::max(frame.y_max, p.f);
        }
    }
    if (frame.x_max == frame.x_min) frame.x_max = frame.x_min + 1e-3;
    if (frame.y_max == frame.y_min) frame.y_max = frame.y_min + 1e-3;
    const double pad = 0.05 * (frame.y_max - frame.y_min);
    frame.y_min -= pad;
    frame.y_max += pad;

    static constexpr std::array<const char*, 4> colors{"#d62728", "#2ca02c", "#1f77b4", "#9467bd"};
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << frame.width << "\" height=\"" << frame.height
       << "\" viewBox=\"0 0 " << frame.width << " " << frame.height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    detail::axes(os, frame, "l", "f(l)", true);
    for (std::size_t k = 0; k < curves.size(); ++k) {
        const auto& c = curves[k];
        const char* color = colors[k % colors.size()];
        os << "<polyline class=\"curve\" data-method=\"" << to_string(c.method) << "\" fill=\"none\" stroke=\""
           << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < c.points.size(); ++i) {
            if (i) os << ' ';
            os << detail::fmt("%.2f", frame.px(c.points[i].l)) << ',' << detail::fmt("%.2f", frame.py(c.points[i].f));
        }
        os << "\"/>\n";
        const double ly = frame.top + 20.0 * static_cast<double>(k + 1);
        const double lx = frame.width - frame.right + 15;
        os << "<line x1=\"" << detail::fmt("%.2f", lx) << "\" y1=\"" << detail::fmt("%.2f", ly - 4) << "\" x2=\""
           << detail::fmt("%.2f", lx + 20) << "\" y2=\"" << detail::fmt("%.2f", ly - 4) << "\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n";
        os << "<text class=\"legend\" x=\"" << detail::fmt("%.2f", lx + 26) << "\" y=\"" << detail::fmt("%.2f", ly)
           << "\" font-size=\"12\">" << to_string(c.method) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

/// Heat map of l*(beta, alpha); points are row-major in (beta, alpha).
inline std::string phase_svg(std::span<const PhasePoint> points, std::size_t beta_count, std::size_t alpha_count) {
    if (points.empty()) throw DomainError("nothing to plot");
    if (beta_count * alpha_count != points.size()) throw DomainError("phase grid shape does not match point count");
    detail::Frame frame;
    frame.x_min = 0;
    frame.x_max = static_cast<double>(beta_count);
    frame.y_min = 0;
    frame.y_max = static_cast<double>(alpha_count);

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << frame.width << "\" height=\"" << frame.height
       << "\" viewBox=\"0 0 " << frame.width << " " << frame.height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t ib = 0; ib < beta_count; ++ib)
        for (std::size_t ia = 0; ia < alpha_count; ++ia) {
            const auto& p = points[ib * alpha_count + ia];
            const double x0 = frame.px(static_cast<double>(ib)), x1 = frame.px(static_cast<double>(ib + 1));
            const double y0 = frame.py(static_cast<double>(ia + 1)), y1 = frame.py(static_cast<double>(ia));
            os << "<rect class=\"cell\" x=\"" << detail::fmt("%.2f", x0) << "\" y=\"" << detail::fmt("%.2f", y0)
               << "\" width=\"" << detail::fmt("%.2f", x1 - x0) << "\" height=\"" << detail::fmt("%.2f", y1 - y0)
               << "\" fill=\"" << detail::colormap(p.l_star / 0.5) << "\"/>\n";
        }
    detail::axes(os, frame, "beta", "alpha", false);
    // tick labels at the first, middle and last grid values
    for (std::size_t ib : {std::size_t{0}, beta_count / 2, beta_count - 1}) {
        os << "<text x=\"" << detail::fmt("%.2f", frame.px(ib + 0.5)) << "\" y=\""
           << detail::fmt("%.2f", frame.height - frame.bottom + 18) << "\" font-size=\"11\" text-anchor=\"middle\">"
           << detail::fmt("%.4g", points[ib * alpha_count].beta) << "</text>\n";
    }
    for (std::size_t ia : {std::size_t{0}, alpha_count / 2, alpha_count - 1}) {
        os << "<text x=\"" << detail::fmt("%.2f", frame.left - 6) << "\" y=\"" << detail::fmt("%.2f", frame.py(ia + 0.5) + 4)
           << "\" font-size=\"11\" text-anchor=\"end\">" << detail::fmt("%.4g", points[ia].alpha) << "</text>\n";
    }
    // color bar for l* in [0, 1/2]
    const double bx = frame.width - frame.right + 30;
    for (int k = 0; k < 10; ++k) {
        const double y = frame.top + 30.0 * (9 - k);
        os << "<rect x=\"" << detail::fmt("%.2f", bx) << "\" y=\"" << detail::fmt("%.2f", y)
           << "\" width=\"20\" height=\"30\" fill=\"" << detail::colormap((k + 0.5) / 10.0) << "\"/>\n";
    }
    os << "<text x=\"" << detail::fmt("%.2f", bx + 26) << "\" y=\"" << detail::fmt("%.2f", frame.top + 300)
       << "\" font-size=\"11\">0</text>\n";
    os << "<text x=\"" << detail::fmt("%.2f", bx + 26) << "\" y=\"" << detail::fmt("%.2f", frame.top + 10)
       << "\" font-size=\"11\">0.5</text>\n";
    os << "<text x=\"" << detail::fmt("%.2f", bx) << "\" y=\"" << detail::fmt("%.2f", frame.top + 320)
       << "\" font-size=\"12\">l*</text>\n";
    os << "</svg>\n";
    return os.str();
}

inline void render_svg(std::span<const ThermoCurve> curves, const std::filesystem::path& path) {
    write_text_file(path, potential_svg(curves));
}

inline void render_svg(std::span<const PhasePoint> points, std::size_t beta_count, std::size_t alpha_count,
                       const std::filesystem::path& path) {
    write_text_file(path, phase_svg(points, beta_count, alpha_count));
}

} // namespace symtherm
