#include "vsg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace vsg {

bool point_in_polygon(const Polyline& poly, const Vec2& pt) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[j];
        const Vec2& b = poly[i];
        if ((b.y > pt.y) != (a.y > pt.y)) {
            const double x_cross = b.x + (pt.y - b.y) * (a.x - b.x) / (a.y - b.y);
            if (pt.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

double polygon_area(const Polyline& poly) {
    const std::size_t n = poly.size();
    if (n < 3) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        acc += poly[j].x * poly[i].y - poly[i].x * poly[j].y;
    }
    return 0.5 * std::abs(acc);
}

namespace {

double point_segment_dist2(const Vec2& p, const Vec2& a, const Vec2& b) {
    const double abx = b.x - a.x, aby = b.y - a.y;
    const double apx = p.x - a.x, apy = p.y - a.y;
    const double len2 = abx * abx + aby * aby;
    double t = len2 > 0.0 ? (apx * abx + apy * aby) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = apx - t * abx, dy = apy - t * aby;
    return dx * dx + dy * dy;
}

}  // namespace

double distance_to_polyline(const Polyline& poly, const Vec2& pt, double sx, double sy,
                            bool closed) {
    const std::size_t n = poly.size();
    if (n == 0) return std::numeric_limits<double>::infinity();
    const auto scale = [&](const Vec2& v) { return Vec2{v.x / sx, v.y / sy}; };
    const Vec2 q = scale(pt);
    double best = std::numeric_limits<double>::infinity();
    const std::size_t m = closed ? n : n - 1;
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2 a = scale(poly[i]);
        const Vec2 b = scale(poly[(i + 1) % n]);
        best = std::min(best, point_segment_dist2(q, a, b));
    }
    return std::sqrt(best);
}

std::optional<Vec2> segment_intersection(const Vec2& a1, const Vec2& a2, const Vec2& b1,
                                         const Vec2& b2) {
    const double rx = a2.x - a1.x, ry = a2.y - a1.y;
    const double sx = b2.x - b1.x, sy = b2.y - b1.y;
    const double denom = rx * sy - ry * sx;
    const double qpx = b1.x - a1.x, qpy = b1.y - a1.y;
    if (denom == 0.0) return std::nullopt;  // parallel or collinear
    const double t = (qpx * sy - qpy * sx) / denom;
    const double u = (qpx * ry - qpy * rx) / denom;
    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
    return Vec2{a1.x + t * rx, a1.y + t * ry};
}

bool polyline_self_intersects(const Polyline& line) {
    const std::size_t n = line.size();
    if (n < 4) return false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 2; j + 1 < n; ++j) {
            if (segment_intersection(line[i], line[i + 1], line[j], line[j + 1])) return true;
        }
    }
    return false;
}

namespace {

// Clip against one half-plane keep(v) >= 0 with linear boundary value.
Polyline clip_half_plane(const Polyline& poly, const std::function<double(const Vec2&)>& value) {
    Polyline out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        const double va = value(a);
        const double vb = value(b);
        if (va >= 0.0) out.push_back(a);
        if ((va < 0.0) != (vb < 0.0)) {
            const double t = va / (va - vb);
            out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
    }
    return out;
}

}  // namespace

Polyline clip_polygon_to_rect(const Polyline& poly, double xmin, double xmax, double ymin,
                              double ymax) {
    Polyline p = poly;
    p = clip_half_plane(p, [&](const Vec2& v) { return v.x - xmin; });
    p = clip_half_plane(p, [&](const Vec2& v) { return xmax - v.x; });
    p = clip_half_plane(p, [&](const Vec2& v) { return v.y - ymin; });
    p = clip_half_plane(p, [&](const Vec2& v) { return ymax - v.y; });
    return p;
}

Polyline thin_polyline(const Polyline& line, double tol, double sx, double sy) {
    if (line.size() < 3) return line;
    Polyline out;
    out.push_back(line.front());
    for (std::size_t i = 1; i + 1 < line.size(); ++i) {
        const double dx = (line[i].x - out.back().x) / sx;
        const double dy = (line[i].y - out.back().y) / sy;
        if (std::sqrt(dx * dx + dy * dy) >= tol) out.push_back(line[i]);
    }
    out.push_back(line.back());
    return out;
}

}  // namespace vsg
