#include "lpfsi/geometry.hpp"

namespace lpfsi {

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& v) {
    // Crossing-number test; robust enough away from edges.
    bool inside = false;
    const size_t n = v.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const bool cross = (v[i].y > p.y) != (v[j].y > p.y);
        if (cross) {
            const double x_at =
                v[j].x + (v[i].x - v[j].x) * (p.y - v[j].y) / (v[i].y - v[j].y);
            if (p.x < x_at) inside = !inside;
        }
    }
    return inside;
}

double polygon_area(const std::vector<Vec2>& v) {
    double twice = 0.0;
    const size_t n = v.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) twice += v[j].cross(v[i]);
    return 0.5 * twice;
}

namespace {

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        return (q - p).cross(r - p);
    };
    const double o1 = orient(a, b, c), o2 = orient(a, b, d);
    const double o3 = orient(c, d, a), o4 = orient(c, d, b);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

}  // namespace

bool polygon_self_intersects(const std::vector<Vec2>& v) {
    const size_t n = v.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % n];
        for (size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent around the seam
            if (segments_intersect(a, b, v[j], v[(j + 1) % n])) return true;
        }
    }
    return false;
}

}  // namespace lpfsi
