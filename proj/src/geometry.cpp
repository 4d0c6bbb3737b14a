#include "mcfs/geometry.hpp"

#include <algorithm>
#include <limits>

namespace mcfs {

double signed_area(std::span<const Point2> ring) {
    const std::size_t n = ring.size();
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        twice += cross(ring[i], ring[(i + 1) % n]);
    }
    return 0.5 * twice;
}

double perimeter(std::span<const Point2> ring) {
    const std::size_t n = ring.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += dist(ring[i], ring[(i + 1) % n]);
    }
    return total;
}

double closest_param_on_segment(Point2 p, Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) {
        return 0.0;
    }
    return std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    const double t = closest_param_on_segment(p, a, b);
    return dist(p, a + t * (b - a));
}

double point_ring_distance(Point2 p, std::span<const Point2> ring) {
    const std::size_t n = ring.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        best = std::min(best, point_segment_distance(p, ring[i], ring[(i + 1) % n]));
    }
    return best;
}

bool point_in_ring(Point2 p, std::span<const Point2> ring) {
    bool inside = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2 a = ring[i];
        const Point2 b = ring[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_cross) {
                inside = !inside;
            }
        }
    }
    return inside;
}

namespace {

int orientation(Point2 a, Point2 b, Point2 c) {
    const double v = cross(b - a, c - a);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    const int o1 = orientation(a, b, c);
    const int o2 = orientation(a, b, d);
    const int o3 = orientation(c, d, a);
    const int o4 = orientation(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

bool segment_hits_ring(Point2 a, Point2 b, std::span<const Point2> ring) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (segments_intersect(a, b, ring[i], ring[(i + 1) % n])) {
            return true;
        }
    }
    return false;
}

bool ring_is_simple(std::span<const Point2> ring) {
    const std::size_t n = ring.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (ring[i] == ring[(i + 1) % n]) return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = ring[i];
        const Point2 b = ring[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            // adjacent edges share an endpoint by construction
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(a, b, ring[j], ring[(j + 1) % n])) return false;
        }
    }
    return true;
}

double turning_curvature(Point2 prev, Point2 curr, Point2 next) {
    const Point2 in = curr - prev;
    const Point2 out = next - curr;
    const double len_in = norm(in);
    const double len_out = norm(out);
    if (len_in == 0.0 || len_out == 0.0) {
        throw InvalidInput("discrete curvature undefined for coincident neighbors", "geom");
    }
    const double angle = std::abs(std::atan2(cross(in, out), dot(in, out)));
    return angle / (0.5 * (len_in + len_out));
}

double discrete_curvature(std::span<const Point2> points, std::size_t index) {
    const std::size_t n = points.size();
    if (n < 3 || index >= n) {
        throw InvalidInput("discrete curvature needs a point with two neighbors", "geom");
    }
    return turning_curvature(points[(index + n - 1) % n], points[index], points[(index + 1) % n]);
}

}  // namespace mcfs
