#pragma once

/// \file
/// \brief Distance field over the workspace and layered equidistant isolines.

#include <cstdint>
#include <vector>

#include "mcfs/kernels.hpp"
#include "mcfs/workspace.hpp"

namespace mcfs {

/// Sampled signed distance to the workspace boundary. Nodes sit at
/// origin + (i*cell_size, j*cell_size); the grid spans the bounding box padded
/// by one cell, so every positive level set is a closed curve inside it.
struct DistanceField {
    kernels::GridSpec grid;
    std::vector<double> values;        // row-major, positive inside
    std::vector<std::uint8_t> inside;  // 1 where the node lies in the workspace

    Point2 origin() const { return grid.origin; }
    double cell_size() const { return grid.cell; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.nx + i]; }
    /// Largest value over inside nodes.
    double max_value() const;
};

DistanceField build_distance_field(const Workspace& ws, double cell_size, Exec exec = Exec::parallel);

/// Closed counterclockwise loop of equidistant samples at distance layer*l from the boundary.
struct Isoline {
    int layer = 0;
    std::vector<Point2> points;
    double spacing = 0.0;  // arc-length distance between consecutive samples
};

/// Raw marching-squares loops of the level set {df == level}, in no particular
/// orientation. Saddle cells are resolved by the sign of the cell-center average.
std::vector<Ring> marching_squares(const DistanceField& df, double level);

/// Resamples a closed contour to N = max(3, round(P/l)) points spaced P/N along
/// its arc length, counterclockwise, starting at the contour's lexicographically
/// smallest vertex. Throws InvalidInput if P < 1.5*l.
Isoline resample_equidistant(const Isoline& raw, double l);

/// Isolines for layers 1..floor(l_max/l), sorted by layer then first point.
/// Throws InvalidInput("no coverable layers") when floor(l_max/l) == 0.
std::vector<Isoline> extract_isolines(const DistanceField& df, double l);

}  // namespace mcfs
