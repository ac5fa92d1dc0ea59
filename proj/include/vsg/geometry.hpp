#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace vsg {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

using Polyline = std::vector<Vec2>;

/// Even-odd ray-casting membership test. Points on an edge follow the
/// parity rule of the crossing count; callers wanting a boundary tolerance
/// should combine this with distance_to_polyline.
bool point_in_polygon(const Polyline& poly, const Vec2& pt);

/// Shoelace area, non-negative regardless of orientation.
double polygon_area(const Polyline& poly);

/// Minimum distance from `pt` to the segments of `poly` under an
/// anisotropic metric that scales x by 1/sx and y by 1/sy.
double distance_to_polyline(const Polyline& poly, const Vec2& pt, double sx, double sy,
                            bool closed);

/// Proper or touching intersection of segments [a1,a2] and [b1,b2].
std::optional<Vec2> segment_intersection(const Vec2& a1, const Vec2& a2, const Vec2& b1,
                                         const Vec2& b2);

/// True if any two non-adjacent segments of the open polyline intersect.
bool polyline_self_intersects(const Polyline& line);

/// Drops points closer than `tol` (in the anisotropic metric) to the last
/// kept point. Endpoints are always kept.
Polyline thin_polyline(const Polyline& line, double tol, double sx, double sy);

/// Sutherland-Hodgman clip of a closed polygon against an axis-aligned
/// rectangle.
Polyline clip_polygon_to_rect(const Polyline& poly, double xmin, double xmax, double ymin,
                              double ymax);

}  // namespace vsg
