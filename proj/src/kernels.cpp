#include "mcfs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcfs::kernels {

namespace {

void signed_distance_row(const GridSpec& grid, const Workspace& ws, int j, std::span<double> values,
                         std::span<std::uint8_t> inside) {
    for (int i = 0; i < grid.nx; ++i) {
        const Point2 p = grid.node(i, j);
        const std::size_t k = static_cast<std::size_t>(j) * grid.nx + i;
        const bool in = ws.contains(p);
        const double d = ws.boundary_distance(p);
        inside[k] = in ? 1 : 0;
        values[k] = in ? d : -d;
    }
}

}  // namespace

void signed_distance_serial(const GridSpec& grid, const Workspace& ws, std::span<double> values,
                            std::span<std::uint8_t> inside) {
    for (int j = 0; j < grid.ny; ++j) {
        signed_distance_row(grid, ws, j, values, inside);
    }
}

void signed_distance_omp(const GridSpec& grid, const Workspace& ws, std::span<double> values,
                         std::span<std::uint8_t> inside) {
#pragma omp parallel for schedule(dynamic, 4)
    for (int j = 0; j < grid.ny; ++j) {
        signed_distance_row(grid, ws, j, values, inside);
    }
}

SegmentIndex::SegmentIndex(const std::vector<std::vector<Point2>>& paths, bool closed, double bucket_size)
    : closed_(closed), bucket_(bucket_size) {
    Point2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Point2 hi{-lo.x, -lo.y};
    lengths_.assign(paths.size(), 0.0);
    for (std::size_t r = 0; r < paths.size(); ++r) {
        const auto& pts = paths[r];
        const std::size_t n = pts.size();
        if (n == 0) continue;
        const std::size_t nseg = closed ? n : n - 1;
        double arc = 0.0;
        for (std::size_t s = 0; s < nseg; ++s) {
            const Point2 a = pts[s];
            const Point2 b = pts[(s + 1) % n];
            segments_.push_back({a, b, arc, static_cast<int>(r)});
            arc += dist(a, b);
        }
        if (n == 1) segments_.push_back({pts[0], pts[0], 0.0, static_cast<int>(r)});
        lengths_[r] = arc;
        for (const Point2& p : pts) {
            lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
            hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
        }
    }
    if (segments_.empty()) return;
    origin_ = lo;
    nx_ = static_cast<int>(std::floor((hi.x - lo.x) / bucket_)) + 1;
    ny_ = static_cast<int>(std::floor((hi.y - lo.y) / bucket_)) + 1;
    buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
    for (std::size_t s = 0; s < segments_.size(); ++s) {
        const auto& seg = segments_[s];
        const int i0 = static_cast<int>(std::floor((std::min(seg.a.x, seg.b.x) - lo.x) / bucket_));
        const int i1 = static_cast<int>(std::floor((std::max(seg.a.x, seg.b.x) - lo.x) / bucket_));
        const int j0 = static_cast<int>(std::floor((std::min(seg.a.y, seg.b.y) - lo.y) / bucket_));
        const int j1 = static_cast<int>(std::floor((std::max(seg.a.y, seg.b.y) - lo.y) / bucket_));
        for (int j = std::max(j0, 0); j <= std::min(j1, ny_ - 1); ++j) {
            for (int i = std::max(i0, 0); i <= std::min(i1, nx_ - 1); ++i) {
                buckets_[static_cast<std::size_t>(j) * nx_ + i].push_back(static_cast<int>(s));
            }
        }
    }
}

std::uint8_t classify_sample(Point2 p, const SegmentIndex& index, double radius, double revisit_separation) {
    int first_robot = -1;
    bool repeated = false;
    std::vector<double> arcs;
    index.for_each_near(p, [&](const PathSegment& seg) {
        if (repeated) return;
        if (point_segment_distance(p, seg.a, seg.b) > radius) return;
        if (first_robot < 0) {
            first_robot = seg.robot;
        } else if (seg.robot != first_robot) {
            repeated = true;
            return;
        }
        const double t = closest_param_on_segment(p, seg.a, seg.b);
        arcs.push_back(seg.arc_start + t * dist(seg.a, seg.b));
    });
    if (first_robot < 0) return 0;
    if (repeated) return 2;
    std::sort(arcs.begin(), arcs.end());
    const double total = index.path_length(first_robot);
    // any two nearby path locations farther apart than the threshold along the path
    for (std::size_t a = 0; a < arcs.size(); ++a) {
        for (std::size_t b = a + 1; b < arcs.size(); ++b) {
            double sep = arcs[b] - arcs[a];
            if (index.closed()) sep = std::min(sep, total - sep);
            if (sep > revisit_separation) return 2;
        }
    }
    return 1;
}

void coverage_serial(std::span<const Point2> samples, const SegmentIndex& index, double radius,
                     double revisit_separation, std::span<std::uint8_t> state) {
    for (std::size_t k = 0; k < samples.size(); ++k) {
        state[k] = classify_sample(samples[k], index, radius, revisit_separation);
    }
}

void coverage_omp(std::span<const Point2> samples, const SegmentIndex& index, double radius,
                  double revisit_separation, std::span<std::uint8_t> state) {
    const long n = static_cast<long>(samples.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (long k = 0; k < n; ++k) {
        state[static_cast<std::size_t>(k)] =
            classify_sample(samples[static_cast<std::size_t>(k)], index, radius, revisit_separation);
    }
}

}  // namespace mcfs::kernels
