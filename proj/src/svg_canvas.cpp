#include <algorithm>
#include <cstdio>
#include <ostream>

#include "cyclebound/svg.hpp"

namespace cyclebound {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

SvgCanvas::SvgCanvas(Point world_lo, Point world_hi, int width_px) : lo_(world_lo), hi_(world_hi), width_(width_px) {
    if (!(hi_.x > lo_.x)) hi_.x = lo_.x + 1.0;
    if (!(hi_.y > lo_.y)) hi_.y = lo_.y + 1.0;
    height_ = std::max(1, static_cast<int>(width_px * (hi_.y - lo_.y) / (hi_.x - lo_.x)));
}

double SvgCanvas::px(double x) const { return (x - lo_.x) / (hi_.x - lo_.x) * width_; }
double SvgCanvas::py(double y) const { return (hi_.y - y) / (hi_.y - lo_.y) * height_; }

void SvgCanvas::polyline(std::span<const Point> pts, const std::string& stroke, double width,
                         const std::string& fill, double opacity) {
    if (pts.empty()) return;
    std::string d = "<path d=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) {
        d += (k == 0 ? "M" : " L") + fmt(px(pts[k].x)) + " " + fmt(py(pts[k].y));
    }
    const bool closed = pts.size() > 2 && pts.front() == pts.back();
    if (closed) d += " Z";
    d += "\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt(width) + "\" fill=\"" + fill + "\"";
    if (opacity < 1.0) d += " fill-opacity=\"" + fmt(opacity) + "\"";
    d += "/>";
    items_.push_back(std::move(d));
}

void SvgCanvas::circle(Point c, double radius_px, const std::string& fill) {
    items_.push_back("<circle cx=\"" + fmt(px(c.x)) + "\" cy=\"" + fmt(py(c.y)) + "\" r=\"" + fmt(radius_px) +
                     "\" fill=\"" + fill + "\"/>");
}

void SvgCanvas::text(Point at, const std::string& label, int size_px) {
    items_.push_back("<text x=\"" + fmt(px(at.x)) + "\" y=\"" + fmt(py(at.y)) + "\" font-size=\"" +
                     std::to_string(size_px) + "\" font-family=\"monospace\">" + escape(label) + "</text>");
}

void SvgCanvas::rect_outline(Point lo, Point hi, const std::string& stroke) {
    items_.push_back("<rect x=\"" + fmt(px(lo.x)) + "\" y=\"" + fmt(py(hi.y)) + "\" width=\"" +
                     fmt(px(hi.x) - px(lo.x)) + "\" height=\"" + fmt(py(lo.y) - py(hi.y)) + "\" stroke=\"" +
                     stroke + "\" fill=\"none\"/>");
}

void SvgCanvas::write(std::ostream& os) const {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\"" << height_
       << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& item : items_) os << item << "\n";
    os << "</svg>\n";
}

} // namespace cyclebound
