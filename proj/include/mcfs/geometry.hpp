#pragma once

/// \file
/// \brief Planar primitives shared by every stage of the planner.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcfs {

/// Base class for all planner errors. `stage` names the pipeline stage that
/// raised it so the CLI can report where a plan failed.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what, std::string stage = {})
        : std::runtime_error(stage.empty() ? what : stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

/// Malformed or out-of-contract input (CLI exit code 2).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// The instance admits no solution (CLI exit code 3).
class Infeasible : public Error {
public:
    using Error::Error;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
    friend bool operator<(Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }
};

/// Closed polyline; the closing segment back->front is implicit.
using Ring = std::vector<Point2>;

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Shoelace area; positive for counterclockwise rings.
double signed_area(std::span<const Point2> ring);

double perimeter(std::span<const Point2> ring);

/// Distance from `p` to the closed segment [a, b].
double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// Parameter t in [0,1] of the point on [a, b] closest to `p`.
double closest_param_on_segment(Point2 p, Point2 a, Point2 b);

/// Minimum distance from `p` to the closed ring (all edges including the closing one).
double point_ring_distance(Point2 p, std::span<const Point2> ring);

/// Even-odd crossing test against a single ring.
bool point_in_ring(Point2 p, std::span<const Point2> ring);

/// True when the closed segments [a,b] and [c,d] share at least one point.
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d);

/// True when the segment [a,b] touches any edge of the ring.
bool segment_hits_ring(Point2 a, Point2 b, std::span<const Point2> ring);

/// O(n^2) simplicity check: no two non-adjacent edges intersect and no zero-length edges.
bool ring_is_simple(std::span<const Point2> ring);

/// Turning angle / mean adjacent segment length at `curr`.
/// Throws InvalidInput when a neighbor coincides with `curr`.
double turning_curvature(Point2 prev, Point2 curr, Point2 next);

/// Discrete curvature of a closed point loop at `index` (cyclic neighbors).
double discrete_curvature(std::span<const Point2> points, std::size_t index);

}  // namespace mcfs
