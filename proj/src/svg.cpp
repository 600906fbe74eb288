#include "semicouple/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "semicouple/errors.hpp"

namespace semicouple {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  // avoid "-0.000"
  if (std::string(buf) == "-0.000") return "0.000";
  return buf;
}

struct Canvas {
  double x0 = 0.0, y1 = 0.0, scale = 1.0;
  int width = 0, height = 0;

  Canvas(const Box& window, int px) {
    x0 = window.lower[0];
    y1 = window.lower[1] + window.extent[1];
    scale = px / window.extent[0];
    width = px;
    height = static_cast<int>(std::lround(window.extent[1] * scale));
  }
  std::string x(double v) const { return num((v - x0) * scale); }
  std::string y(double v) const { return num((y1 - v) * scale); }
  std::string len(double v) const { return num(v * scale); }

  std::string header() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
           std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) +
           "\">\n<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\"" + std::to_string(height) +
           "\" fill=\"#ffffff\"/>\n";
  }
};

std::string dots(const Canvas& c, const PointPattern& pattern, double radius) {
  std::string out = "<g fill=\"#000000\">\n";
  for (int j = 0; j < pattern.size(); ++j) {
    out += "<circle cx=\"" + c.x(pattern.point(j)[0]) + "\" cy=\"" + c.y(pattern.point(j)[1]) + "\" r=\"" +
           num(radius) + "\"/>\n";
  }
  return out + "</g>\n";
}

void require_planar(int d) {
  if (d != 2) throw UnsupportedError("SVG rendering needs d = 2");
}

}  // namespace

std::string target_color(int j) {
  const double h = std::fmod(j * 0.6180339887498949, 1.0) * 6.0;
  const double s = 0.55, l = 0.62;
  const double chroma = (1.0 - std::abs(2.0 * l - 1.0)) * s;
  const double x = chroma * (1.0 - std::abs(std::fmod(h, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(h)) {
    case 0: r = chroma, g = x; break;
    case 1: r = x, g = chroma; break;
    case 2: g = chroma, b = x; break;
    case 3: g = x, b = chroma; break;
    case 4: r = x, b = chroma; break;
    default: r = chroma, b = x; break;
  }
  const double m = l - 0.5 * chroma;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround((r + m) * 255)),
                static_cast<int>(std::lround((g + m) * 255)), static_cast<int>(std::lround((b + m) * 255)));
  return buf;
}

std::string render_svg(const TransportPlan& plan, const SvgStyle& style) {
  require_planar(plan.grid.dim());
  const Canvas c(plan.grid.window(), style.width);
  std::string out = c.header();
  const int nx = plan.grid.counts()[0];
  const int ny = plan.grid.counts()[1];
  const double h = plan.grid.cell_width();
  const Vector& lo = plan.grid.lower();
  out += "<g shape-rendering=\"crispEdges\">\n";
  for (int row = 0; row < ny; ++row) {
    int col = 0;
    while (col < nx) {
      const std::size_t idx = static_cast<std::size_t>(row) * nx + col;
      const int a = plan.assignment[idx];
      int end = col + 1;
      while (end < nx && plan.assignment[static_cast<std::size_t>(row) * nx + end] == a) ++end;
      if (a != kCemetery) {
        const std::string fill = a == kInactive ? "#dddddd" : target_color(a);
        const double xl = lo[0] + col * h;
        const double yt = lo[1] + (row + 1) * h;
        out += "<rect x=\"" + c.x(xl) + "\" y=\"" + c.y(yt) + "\" width=\"" + c.len((end - col) * h) +
               "\" height=\"" + c.len(h) + "\" fill=\"" + fill + "\"/>\n";
      }
      col = end;
    }
  }
  out += "</g>\n" + dots(c, plan.pattern, style.dot_radius) + "</svg>\n";
  return out;
}

std::string render_svg(const LaguerreDiagram& diagram, const SvgStyle& style) {
  require_planar(diagram.pattern.dim());
  Eigen::Vector2d lo = diagram.pattern.domain().lower;
  Eigen::Vector2d hi = diagram.pattern.domain().upper();
  for (int j = 0; j < diagram.pattern.size(); ++j) {
    const double r = std::sqrt(std::max(0.0, diagram.weights[j]));
    const Eigen::Vector2d p = diagram.pattern.point(j);
    lo = lo.cwiseMin(p - Eigen::Vector2d::Constant(r));
    hi = hi.cwiseMax(p + Eigen::Vector2d::Constant(r));
  }
  const Canvas c(Box{lo, hi - lo}, style.width);
  std::string out = c.header();
  const std::string stroke = style.outline ? " stroke=\"#333333\" stroke-width=\"0.6\"" : "";
  for (std::size_t j = 0; j < diagram.cells.size(); ++j) {
    const auto& cell = diagram.cells[j];
    const std::string fill = target_color(static_cast<int>(j));
    if (cell.full_disk()) {
      const auto& disk = *cell.disk();
      out += "<circle cx=\"" + c.x(disk.center.x()) + "\" cy=\"" + c.y(disk.center.y()) + "\" r=\"" +
             c.len(disk.radius) + "\" fill=\"" + fill + "\"" + stroke + "/>\n";
      continue;
    }
    const auto bnd = cell.boundary();
    if (bnd.empty()) continue;
    std::string d = "M " + c.x(bnd[0].point.x()) + " " + c.y(bnd[0].point.y());
    for (std::size_t v = 0; v < bnd.size(); ++v) {
      const auto& p = bnd[(v + 1) % bnd.size()].point;
      if (bnd[v].arc_to_next) {
        const auto& disk = *cell.disk();
        const Eigen::Vector2d u = bnd[v].point - disk.center, w = p - disk.center;
        double t = std::atan2(u.x() * w.y() - u.y() * w.x(), u.dot(w));
        if (t <= 0) t += 2.0 * M_PI;
        // with y flipped a counter-clockwise arc has sweep flag 0
        d += " A " + c.len(disk.radius) + " " + c.len(disk.radius) + " 0 " + (t > M_PI ? "1" : "0") + " 0 " +
             c.x(p.x()) + " " + c.y(p.y());
      } else {
        d += " L " + c.x(p.x()) + " " + c.y(p.y());
      }
    }
    out += "<path d=\"" + d + " Z\" fill=\"" + fill + "\"" + stroke + "/>\n";
  }
  out += dots(c, diagram.pattern, style.dot_radius) + "</svg>\n";
  return out;
}

}  // namespace semicouple
