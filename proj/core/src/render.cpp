#include "storyline/render.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "storyline/error.hpp"

namespace storyline {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    if (s == "-0") s = "0";
    return s;
}

std::string escape(const std::string &s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

// Fixed palette; characters cycle through it by index.
constexpr const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                   "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

void check_spec(const render_spec &s) {
    if (s.column_width <= 0 || s.run_width <= 0 || s.row_gap <= 0 || s.margin < 0 ||
        s.label_width < 0 || s.bar_width <= 0)
        throw std::invalid_argument("render spec needs positive geometry");
    if (s.run_width >= s.column_width)
        throw std::invalid_argument("run width must be smaller than the column width");
}

struct layout {
    double x0;
    std::vector<std::vector<double>> y;  // y[layer][char], < 0 when inactive

    double center(int t, const render_spec &s) const { return x0 + t * s.column_width; }
};

layout make_layout(const instance &inst, const drawing &d, const render_spec &s) {
    layout l;
    l.x0 = s.margin + (s.labels ? s.label_width : 0) + s.run_width / 2;
    l.y.assign(inst.num_layers(), std::vector<double>(inst.num_chars(), -1));
    for (int t = 0; t < inst.num_layers(); ++t)
        for (std::size_t i = 0; i < d.layers[t].size(); ++i)
            l.y[t][d.layers[t][i]] = s.margin + s.row_gap * (static_cast<double>(i) + 0.5);
    return l;
}

}  // namespace

curve_style parse_curve_style(std::string_view s) {
    if (s == "orthogonal") return curve_style::orthogonal;
    if (s == "smooth") return curve_style::smooth;
    throw std::invalid_argument("unknown curve style '" + std::string(s) + "'");
}

std::vector<std::vector<point>> character_paths(const instance &inst, const drawing &d,
                                                const render_spec &spec) {
    check_spec(spec);
    require_valid(inst, d);
    const auto l = make_layout(inst, d, spec);
    std::vector<std::vector<point>> paths(inst.num_chars());
    for (char_id c = 0; c < inst.num_chars(); ++c)
        for (int t = 0; t < inst.num_layers(); ++t) {
            const double y = l.y[t][c];
            if (y < 0) continue;
            const double x = l.center(t, spec);
            paths[c].push_back({x - spec.run_width / 2, y});
            paths[c].push_back({x + spec.run_width / 2, y});
        }
    return paths;
}

std::string render_svg(const instance &inst, const drawing &d, const render_spec &spec) {
    check_spec(spec);
    require_valid(inst, d);
    const auto l = make_layout(inst, d, spec);
    std::size_t rows = 0;
    for (const auto &pi : d.layers) rows = std::max(rows, pi.size());
    const double width = l.center(inst.num_layers() - 1, spec) + spec.run_width / 2 + spec.margin;
    const double height = 2 * spec.margin + spec.row_gap * static_cast<double>(rows);

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    if (spec.interaction_bars) {
        svg += "<g class=\"interactions\" fill=\"#c8c8c8\">\n";
        for (const auto &inter : inst.interactions()) {
            double lo = 1e300, hi = -1e300;
            for (char_id c : inter.chars) {
                lo = std::min(lo, l.y[inter.time][c]);
                hi = std::max(hi, l.y[inter.time][c]);
            }
            const double pad = spec.row_gap * 0.35;
            svg += "<rect x=\"" + num(l.center(inter.time, spec) - spec.bar_width / 2) + "\" y=\"" +
                   num(lo - pad) + "\" width=\"" + num(spec.bar_width) + "\" height=\"" +
                   num(hi - lo + 2 * pad) + "\" rx=\"" + num(spec.bar_width / 2) + "\"/>\n";
        }
        svg += "</g>\n";
    }

    svg += "<g class=\"characters\" fill=\"none\" stroke-width=\"2\">\n";
    const double half = spec.run_width / 2;
    for (char_id c = 0; c < inst.num_chars(); ++c) {
        std::string path;
        int last = -1;
        for (int t = 0; t < inst.num_layers(); ++t) {
            const double y = l.y[t][c];
            if (y < 0) continue;
            const double x = l.center(t, spec);
            if (last < 0) {
                path += "M" + num(x - half) + " " + num(y);
            } else if (spec.style == curve_style::orthogonal) {
                path += " L" + num(x - half) + " " + num(y);
            } else {
                const double x1 = l.center(last, spec) + half;
                const double mid = (x1 + x - half) / 2;
                path += " C" + num(mid) + " " + num(l.y[last][c]) + " " + num(mid) + " " + num(y) +
                        " " + num(x - half) + " " + num(y);
            }
            path += " L" + num(x + half) + " " + num(y);
            last = t;
        }
        if (path.empty()) continue;
        svg += "<path d=\"" + path + "\" stroke=\"" + palette[c % std::size(palette)] +
               "\"><title>" + escape(inst.character_info(c).name) + "</title></path>\n";
    }
    svg += "</g>\n";

    if (spec.labels) {
        svg += "<g class=\"labels\" font-family=\"sans-serif\" font-size=\"" +
               num(spec.row_gap * 0.6) + "\" text-anchor=\"end\">\n";
        for (char_id c = 0; c < inst.num_chars(); ++c) {
            const int first = inst.activity(c).start;
            const auto &info = inst.character_info(c);
            const std::string text = info.name.empty() ? std::to_string(info.label) : info.name;
            svg += "<text x=\"" + num(l.center(first, spec) - half - 4) + "\" y=\"" +
                   num(l.y[first][c] + spec.row_gap * 0.2) + "\">" + escape(text) + "</text>\n";
        }
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace storyline
