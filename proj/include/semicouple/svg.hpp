#pragma once

#include <string>

#include "semicouple/laguerre.hpp"
#include "semicouple/semicoupling.hpp"

namespace semicouple {

struct SvgStyle {
  int width = 640;          // pixels; the height follows the aspect ratio
  double dot_radius = 2.5;  // target markers, pixels
  bool outline = true;      // stroke Laguerre cell boundaries
};

// Fill colour of target j as #rrggbb.
std::string target_color(int j);

// Cells coloured per target over a white background (the cemetery); masked
// cells grey. Throws UnsupportedError unless d = 2.
std::string render_svg(const TransportPlan& plan, const SvgStyle& style = {});
std::string render_svg(const LaguerreDiagram& diagram, const SvgStyle& style = {});

}  // namespace semicouple
