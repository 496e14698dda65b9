#ifndef STORYLINE_RENDER_HPP
#define STORYLINE_RENDER_HPP

#include <string>
#include <vector>

#include "storyline/drawing.hpp"
#include "storyline/instance.hpp"

namespace storyline {

enum class curve_style {
    orthogonal,  ///< horizontal run per layer, straight segment between layers
    smooth,      ///< horizontal run per layer, cubic curve between layers
};

/// Throws std::invalid_argument for names other than "orthogonal" and "smooth".
curve_style parse_curve_style(std::string_view s);

struct render_spec {
    double column_width = 90;
    double run_width = 30;  ///< horizontal run length at each layer, < column_width
    double row_gap = 18;
    double margin = 24;
    double label_width = 110;
    double bar_width = 10;
    curve_style style = curve_style::orthogonal;
    bool interaction_bars = true;
    bool labels = true;
};

struct point {
    double x = 0;
    double y = 0;
};

/// One polyline per character (empty for characters never drawn): the
/// run at every active layer and the straight segments joining them. The
/// orthogonal SVG draws exactly these segments.
std::vector<std::vector<point>> character_paths(const instance &inst, const drawing &d,
                                                const render_spec &spec = {});

/// SVG document of a valid drawing; identical inputs give identical bytes.
/// Throws invalid_drawing and std::invalid_argument for non-positive geometry.
std::string render_svg(const instance &inst, const drawing &d, const render_spec &spec = {});

}  // namespace storyline

#endif  // STORYLINE_RENDER_HPP
