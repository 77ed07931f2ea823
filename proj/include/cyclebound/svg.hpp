#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cyclebound/geometry.hpp"

namespace cyclebound {

// Minimal SVG writer with a world-to-pixel transform (y axis pointing up).
class SvgCanvas {
public:
    SvgCanvas(Point world_lo, Point world_hi, int width_px = 800);

    void polyline(std::span<const Point> pts, const std::string& stroke, double width = 1.0,
                  const std::string& fill = "none", double opacity = 1.0);
    void circle(Point c, double radius_px, const std::string& fill);
    void text(Point at, const std::string& label, int size_px = 12);
    void rect_outline(Point lo, Point hi, const std::string& stroke);

    void write(std::ostream& os) const;

private:
    double px(double x) const;
    double py(double y) const;

    Point lo_, hi_;
    int width_, height_;
    std::vector<std::string> items_;
};

} // namespace cyclebound
