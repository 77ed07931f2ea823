#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace cyclebound {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator-(Point a) { return {-a.x, -a.y}; }
    friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

using Polyline = std::vector<Point>;

// Distance from p to the closed segment [a, b].
double point_segment_distance(Point p, Point a, Point b);

// Distance from p to a polyline (treated as a chain of segments).
double point_polyline_distance(Point p, std::span<const Point> line);

// Symmetric Hausdorff distance between two polylines, measured from the
// vertices of each to the segments of the other.
double hausdorff(std::span<const Point> a, std::span<const Point> b);

// Winding number of a closed polyline around p by angle accumulation. The
// polyline is closed implicitly if its last vertex differs from its first.
int winding_number(std::span<const Point> loop, Point p);

// Centroid of the vertices (closing duplicate excluded).
Point vertex_centroid(std::span<const Point> loop);

} // namespace cyclebound
