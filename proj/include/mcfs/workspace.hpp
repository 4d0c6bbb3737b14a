#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mcfs/geometry.hpp"

namespace mcfs {

/// Polygonal region to cover: one counterclockwise exterior ring and any
/// number of clockwise obstacle rings strictly inside it.
struct Workspace {
    std::string name;
    Ring exterior;
    std::vector<Ring> holes;

    /// Normalizes ring orientation (exterior CCW, holes CW) and validates.
    static Workspace make(std::string name, Ring exterior, std::vector<Ring> holes = {});

    /// Throws InvalidInput describing the first violated invariant.
    void validate() const;

    /// Exterior followed by holes.
    std::vector<const Ring*> rings() const;

    /// Area of the region (exterior minus holes).
    double area() const;

    bool contains(Point2 p) const;

    /// Minimum distance from `p` to any boundary ring.
    double boundary_distance(Point2 p) const;

    Point2 bbox_min() const;
    Point2 bbox_max() const;
    double diameter() const;
};

/// {"name": str, "exterior": [[x,y],...], "holes": [[[x,y],...],...]}
Workspace workspace_from_json_text(const std::string& text);
std::string workspace_to_json_text(const Workspace& ws);
Workspace load_workspace(const std::filesystem::path& path);
void save_workspace(const Workspace& ws, const std::filesystem::path& path);

}  // namespace mcfs
