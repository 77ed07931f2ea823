#include "cyclebound/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace cyclebound {

double point_segment_distance(Point p, Point a, Point b) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + t * ab);
}

double point_polyline_distance(Point p, std::span<const Point> line) {
    if (line.empty()) return std::numeric_limits<double>::infinity();
    if (line.size() == 1) return distance(p, line[0]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < line.size(); ++k)
        best = std::min(best, point_segment_distance(p, line[k], line[k + 1]));
    return best;
}

double hausdorff(std::span<const Point> a, std::span<const Point> b) {
    double h = 0.0;
    for (const Point& p : a) h = std::max(h, point_polyline_distance(p, b));
    for (const Point& p : b) h = std::max(h, point_polyline_distance(p, a));
    return h;
}

int winding_number(std::span<const Point> loop, Point p) {
    if (loop.size() < 2) return 0;
    double total = 0.0;
    const std::size_t n = loop.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Point a = loop[k] - p;
        const Point b = loop[(k + 1) % n] - p;
        total += std::atan2(cross(a, b), dot(a, b));
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

Point vertex_centroid(std::span<const Point> loop) {
    std::size_t n = loop.size();
    if (n > 1 && loop.front() == loop.back()) --n;
    Point c;
    for (std::size_t k = 0; k < n; ++k) c = c + loop[k];
    return n == 0 ? c : (1.0 / static_cast<double>(n)) * c;
}

} // namespace cyclebound
