#pragma once

/// \file
/// \brief Data-parallel inner loops. Every kernel has a serial reference and an
/// OpenMP version; both write each output slot from the same pure per-slot
/// function, so their results are bit-identical.

#include <cstdint>
#include <span>
#include <vector>

#include "mcfs/geometry.hpp"
#include "mcfs/workspace.hpp"

namespace mcfs {

enum class Exec { serial, parallel };

namespace kernels {

/// Regular grid of nodes origin + (i*cell, j*cell), row-major (j*nx + i).
struct GridSpec {
    Point2 origin;
    double cell = 0.0;
    int nx = 0;
    int ny = 0;

    Point2 node(int i, int j) const { return {origin.x + i * cell, origin.y + j * cell}; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
};

/// Exact signed distance to the workspace boundary at every grid node
/// (positive inside) plus an inside mask.
void signed_distance_serial(const GridSpec& grid, const Workspace& ws, std::span<double> values,
                            std::span<std::uint8_t> inside);
void signed_distance_omp(const GridSpec& grid, const Workspace& ws, std::span<double> values,
                         std::span<std::uint8_t> inside);

/// One polyline segment of a robot path with its arc-length position.
struct PathSegment {
    Point2 a;
    Point2 b;
    double arc_start = 0.0;
    int robot = 0;
};

/// Bucketed segments of every robot path, for radius queries.
class SegmentIndex {
public:
    /// `paths[r]` is robot r's point sequence; closed paths include last->first.
    SegmentIndex(const std::vector<std::vector<Point2>>& paths, bool closed, double bucket_size);

    const std::vector<PathSegment>& segments() const { return segments_; }
    double path_length(int robot) const { return lengths_[static_cast<std::size_t>(robot)]; }
    bool closed() const { return closed_; }

    template <class Fn>
    void for_each_near(Point2 p, Fn&& fn) const;

private:
    std::vector<PathSegment> segments_;
    std::vector<double> lengths_;
    bool closed_ = true;
    Point2 origin_;
    double bucket_ = 1.0;
    int nx_ = 0;
    int ny_ = 0;
    std::vector<std::vector<int>> buckets_;
};

template <class Fn>
void SegmentIndex::for_each_near(Point2 p, Fn&& fn) const {
    if (nx_ == 0) return;
    const int bi = static_cast<int>(std::floor((p.x - origin_.x) / bucket_));
    const int bj = static_cast<int>(std::floor((p.y - origin_.y) / bucket_));
    for (int j = std::max(bj - 1, 0); j <= std::min(bj + 1, ny_ - 1); ++j) {
        for (int i = std::max(bi - 1, 0); i <= std::min(bi + 1, nx_ - 1); ++i) {
            for (int s : buckets_[static_cast<std::size_t>(j) * nx_ + i]) {
                fn(segments_[static_cast<std::size_t>(s)]);
            }
        }
    }
}

/// Per-sample coverage state: 0 = uncovered, 1 = covered once, 2 = covered
/// repeatedly (two robots, or one robot at two places more than
/// `revisit_separation` apart along its path).
std::uint8_t classify_sample(Point2 p, const SegmentIndex& index, double radius, double revisit_separation);

void coverage_serial(std::span<const Point2> samples, const SegmentIndex& index, double radius,
                     double revisit_separation, std::span<std::uint8_t> state);
void coverage_omp(std::span<const Point2> samples, const SegmentIndex& index, double radius,
                  double revisit_separation, std::span<std::uint8_t> state);

}  // namespace kernels
}  // namespace mcfs
