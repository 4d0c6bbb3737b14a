#pragma once

/// \file
/// \brief End-to-end planning, metrics, rendering and file formats.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mcfs/cfs.hpp"
#include "mcfs/isograph.hpp"
#include "mcfs/mmrtc.hpp"
#include "mcfs/refine.hpp"
#include "mcfs/workspace.hpp"

namespace mcfs {

enum class Variant { none, ref, aug, both };
const char* to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct PlanConfig {
    double l = 0.0;                  // isoline step and cover diameter
    std::vector<Point2> robots;      // start positions
    std::optional<int> delta;        // default max(2, min(k, 4))
    SelectorConfig selector;
    bool enable_augment = false;
    bool enable_refine = false;
    bool bridge = false;             // join disconnected isographs with same-layer bridges
    SolverOptions solver;
    std::optional<double> cell_size; // default l/4
    Exec exec = Exec::parallel;

    void set_variant(Variant v);
    int effective_delta() const;
    double effective_cell_size() const;
    /// Throws InvalidInput.
    void validate() const;
};

struct RobotStats {
    int robot = 0;
    double length = 0.0;
    int points = 0;
    double tree_cost = 0.0;
};

struct PlanReport {
    double makespan = 0.0;      // longest closed path, workspace units
    int makespan_points = 0;    // point count of the longest path
    double curvature = 0.0;     // mean over every path point
    double coverage_ratio = 0.0;
    double overlap_ratio = 0.0;
    std::vector<RobotStats> per_robot;
    std::vector<std::pair<std::string, double>> runtime;  // stage, seconds
    std::string solver_status;
    double tree_makespan = 0.0;
    int isolines = 0;
    int vertices = 0;
    int edges = 0;
};

struct PlanResult {
    std::vector<CoveragePath> paths;
    PlanReport report;
    Isograph graph;  // the graph the paths were stitched from
    TreeCover cover;
    std::vector<int> roots;
    std::vector<RefineTraceRecord> trace;
    std::string lp;  // model text when requested
};

struct PlanOptions {
    bool keep_lp = false;
};

PlanResult plan(const Workspace& ws, const PlanConfig& cfg, const PlanOptions& options = {});

/// Vertex whose isoline holds the point nearest to `p` (ties to the lowest id, then index).
int snap_root(const Isograph& g, Point2 p);

/// Coverage/overlap rasterized at l/4; a cell counts as covered when its center
/// is within l/2 of a path, and as overlapped when two robots cover it or one
/// robot passes it at two path positions more than 2l apart along the path.
PlanReport compute_metrics(const std::vector<CoveragePath>& paths, const Workspace& ws, double l,
                           Exec exec = Exec::parallel);

std::string render_svg(const Workspace& ws, const Isograph* graph, const std::vector<CoveragePath>& paths,
                       const std::vector<Point2>& roots = {});
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// [{robot, points:[[x,y],...], sources:[[vid, idx],...]}]
std::string paths_to_json_text(const std::vector<CoveragePath>& paths);
std::vector<CoveragePath> paths_from_json_text(const std::string& text);
/// robot,index,x,y
std::string paths_to_csv(const std::vector<CoveragePath>& paths);
std::string report_to_json_text(const PlanReport& report, bool with_runtime);
std::string isolines_to_json_text(const std::vector<Isoline>& isolines);

/// Bundled benchmark shapes: disc, annulus, two_lobes, office, double_hole,
/// disc_two_obstacles, letter_p.
std::vector<std::string> suite_names();
Workspace suite_workspace(const std::string& name);

}  // namespace mcfs
