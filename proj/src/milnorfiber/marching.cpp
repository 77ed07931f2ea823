#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "cyclebound/milnorfiber/milnorfiber.hpp"

namespace cyclebound::milnor {

namespace {

using EdgeId = std::int64_t;

struct Adjacency {
    EdgeId a = -1;
    EdgeId b = -1;

    int degree() const { return (a >= 0) + (b >= 0); }
    void add(EdgeId e) {
        if (a < 0) a = e;
        else b = e;
    }
    EdgeId other(EdgeId e) const { return a == e ? b : a; }
};

// Horizontal edges (i, j)-(i+1, j) come first, then vertical (i, j)-(i, j+1).
struct EdgeIndex {
    int n;
    EdgeId horizontal(int i, int j) const { return static_cast<EdgeId>(j) * n + i; }
    EdgeId vertical(int i, int j) const {
        return static_cast<EdgeId>(n) * (n + 1) + static_cast<EdgeId>(j) * (n + 1) + i;
    }
};

Point edge_point(const LevelGrid& g, EdgeId e) {
    const EdgeId nh = static_cast<EdgeId>(g.n) * (g.n + 1);
    int i0, j0, i1, j1;
    if (e < nh) {
        j0 = static_cast<int>(e / g.n);
        i0 = static_cast<int>(e % g.n);
        i1 = i0 + 1;
        j1 = j0;
    } else {
        const EdgeId r = e - nh;
        j0 = static_cast<int>(r / (g.n + 1));
        i0 = static_cast<int>(r % (g.n + 1));
        i1 = i0;
        j1 = j0 + 1;
    }
    const double va = g.value(i0, j0), vb = g.value(i1, j1);
    const double t = va / (va - vb);
    const Point a = g.node(i0, j0), b = g.node(i1, j1);
    return a + t * (b - a);
}

} // namespace

std::vector<Component> march(const LevelGrid& g) {
    const int n = g.n;
    const EdgeIndex ix{n};
    std::unordered_map<EdgeId, Adjacency> adj;
    auto link = [&](EdgeId e, EdgeId f) {
        adj[e].add(f);
        adj[f].add(e);
    };

    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (!g.cell_kept(i, j)) continue;
            const bool s0 = g.positive(i, j), s1 = g.positive(i + 1, j);
            const bool s2 = g.positive(i + 1, j + 1), s3 = g.positive(i, j + 1);
            const EdgeId bottom = ix.horizontal(i, j), right = ix.vertical(i + 1, j);
            const EdgeId top = ix.horizontal(i, j + 1), left = ix.vertical(i, j);

            if (s0 == s2 && s1 == s3 && s0 != s1) {
                // The center sign decides which diagonal pair stays connected.
                const bool center_pos = g.saddle_sign(i, j) > 0;
                if (center_pos == s0) {
                    link(bottom, right);
                    link(top, left);
                } else {
                    link(left, bottom);
                    link(right, top);
                }
                continue;
            }
            EdgeId ends[2];
            int k = 0;
            if (s0 != s1) ends[k++] = bottom;
            if (s1 != s2) ends[k++] = right;
            if (s2 != s3) ends[k++] = top;
            if (s3 != s0) ends[k++] = left;
            if (k == 2) link(ends[0], ends[1]);
        }
    }

    std::vector<EdgeId> keys;
    keys.reserve(adj.size());
    for (const auto& [e, a] : adj) keys.push_back(e);
    std::sort(keys.begin(), keys.end());

    std::unordered_map<EdgeId, bool> visited;
    visited.reserve(adj.size());
    const double slack = g.h * std::sqrt(2.0);
    auto on_sphere = [&](Point p) { return std::abs(distance(p, g.center) - g.delta) <= slack; };

    std::vector<Component> out;
    for (const EdgeId start : keys) {
        if (adj[start].degree() != 1 || visited[start]) continue;
        Component c;
        EdgeId prev = -1, cur = start;
        for (;;) {
            visited[cur] = true;
            c.vertices.push_back(edge_point(g, cur));
            const Adjacency& a = adj[cur];
            const EdgeId next = a.degree() == 1 ? (a.a == prev ? -1 : a.a) : a.other(prev);
            if (next < 0) break;
            prev = cur;
            cur = next;
        }
        if (c.vertices.size() == 2)
            c.vertices.insert(c.vertices.begin() + 1, 0.5 * (c.vertices[0] + c.vertices[1]));
        c.closed = false;
        c.arc_endpoints_on_sphere = on_sphere(c.vertices.front()) && on_sphere(c.vertices.back());
        out.push_back(std::move(c));
    }
    for (const EdgeId start : keys) {
        if (visited[start]) continue;
        Component c;
        EdgeId prev = -1, cur = start;
        for (;;) {
            visited[cur] = true;
            c.vertices.push_back(edge_point(g, cur));
            const Adjacency& a = adj[cur];
            const EdgeId next = prev < 0 ? a.a : a.other(prev);
            if (next == start) break;
            prev = cur;
            cur = next;
        }
        c.vertices.push_back(c.vertices.front());
        c.closed = true;
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace cyclebound::milnor
