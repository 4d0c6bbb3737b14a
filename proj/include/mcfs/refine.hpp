#pragma once

/// \file
/// \brief Post-processing of a tree cover: splitting repeated isovertices among
/// the trees that share them and adding balancing repetitions.

#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mcfs/isograph.hpp"
#include "mcfs/mmrtc.hpp"

namespace mcfs {

struct RefineOptions {
    std::size_t budget = 4096;  // tuple assignments evaluated per split
};

/// One closed loop cut from two neighboring isolines.
struct SplitLoop {
    std::vector<Point2> points;                // counterclockwise
    std::vector<PointRef> origin;              // provenance on the original isolines
    std::vector<std::pair<int, int>> source;   // (vertex id, point index) in the two input loops
};

/// Cuts I_u and I_v at the given tuples (oriented u -> v): the links p-B(p)
/// and q-B(q) are removed, p-q and B(p)-B(q) added. Loop j is the one through
/// p_j. Nullopt unless the cuts yield exactly one loop of at least 3 points
/// per tuple.
std::optional<std::vector<SplitLoop>> split_loops(const Isograph& g, int u, int v,
                                                  const std::vector<StitchingTuple>& cuts);

/// Cover cost on a (possibly split) isograph.
double tree_cost(const Isograph& g, const Tree& tree);
void recompute_costs(const Isograph& g, TreeCover& cover);

struct PisResult {
    double h = std::numeric_limits<double>::infinity();
    Isograph graph;  // with the split vertices added and u, v removed
    TreeCover cover;
    std::vector<StitchingTuple> cuts;
    std::vector<int> new_vertices;
};

/// Splits u and its neighbor v into one loop per tree containing u and
/// returns the assignment with the smallest h (population standard deviation
/// of the rewired trees' costs plus detour distances of nonadjacent edges).
/// h is infinite when no assignment is admissible.
PisResult pis(const Isograph& g, const TreeCover& cover, int u, int v, const RefineOptions& options = {});

/// Copies one leaf of the costliest tree into the cheapest tree that has a
/// neighbor outside `used`. Returns the copied vertex, or -1 when none qualifies.
int air(const Isograph& g, TreeCover& cover, const std::set<int>& used);

struct RefineTraceRecord {
    int iteration = 0;
    bool air = false;
    int popped = -1;    // pis: u; air: copied vertex
    int neighbor = -1;  // pis: v; air: receiving robot
    double h = std::numeric_limits<double>::infinity();
    double makespan_before = 0.0;
    double makespan_after = 0.0;
};

struct RefineResult {
    Isograph graph;
    TreeCover cover;
    std::vector<RefineTraceRecord> trace;
    int iterations = 0;  // split iterations of the main loop
};

RefineResult refine(const Isograph& g, const TreeCover& sol, const RefineOptions& options = {});

/// One JSON object per line.
std::string trace_to_jsonl(const std::vector<RefineTraceRecord>& trace);

}  // namespace mcfs
