#pragma once

/// \file
/// \brief Stitching the isolines of one tree into a single closed coverage path.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mcfs/isograph.hpp"
#include "mcfs/mmrtc.hpp"

namespace mcfs {

struct CoveragePath {
    int robot = 0;
    std::vector<Point2> points;
    std::vector<PointRef> sources;  // provenance of each point on the original isolines
    bool closed = true;

    double length() const;
};

enum class SelectorKind { random, cfs, mcs };
const char* to_string(SelectorKind kind);
/// Throws InvalidInput on an unknown name.
SelectorKind selector_from_string(const std::string& name);

struct SelectorConfig {
    SelectorKind kind = SelectorKind::mcs;
    std::uint64_t seed = 0;
    bool maximize = false;  // mcs: pick the largest curvature change instead of the smallest
};

/// Path under construction: a cyclic doubly linked list over the points of
/// the tree's isolines. Node ids are per-vertex offsets plus point index.
class PathBuilder {
public:
    PathBuilder(const Isograph& g, const std::vector<int>& vertices, int root, int entry_index);

    int node(int vertex, int index) const;
    Point2 position(int node) const { return pos_[static_cast<std::size_t>(node)]; }
    bool in_path(int node) const { return next_[static_cast<std::size_t>(node)] >= 0; }
    bool used(int node) const { return used_[static_cast<std::size_t>(node)] != 0; }

    /// Stitch geometry of a tuple oriented parent -> child.
    struct Splice {
        int p = -1;        // on the parent, in the path
        int bp = -1;       // parent-loop predecessor of p, linked to p in the path
        int q = -1;        // on the child
        int partner = -1;  // child neighbor of q joined to bp
        bool path_enters_p = true;        // path runs bp -> p (else p -> bp)
        std::vector<int> child_sequence;  // partner ... q, covering the whole child loop
    };

    /// Nullopt when p or q is used or the link p-B(p) is gone from the path.
    std::optional<Splice> plan(const StitchingTuple& t) const;
    void apply(const StitchingTuple& t);

    /// Points as (prev, here, next) after applying `s`, for the four stitch points
    /// in the order bp, partner, q, p.
    struct Neighborhood {
        int node;
        int prev;
        int next;
    };
    std::vector<Neighborhood> after(const Splice& s) const;
    /// Loop-local curvature of `node` on its own isoline.
    double loop_curvature(int node) const;
    double path_curvature(const Neighborhood& n) const;

    /// Starts at the entry node and follows the path once around.
    std::vector<int> walk() const;
    CoveragePath path(int robot) const;

private:
    int vertex_of(int node) const;
    int loop_pred(int node) const;
    int loop_succ(int node) const;

    const Isograph& g_;
    std::vector<int> vertices_;
    std::vector<int> offset_;  // per vertex id, -1 when absent
    std::vector<int> owner_;   // node -> vertex id
    std::vector<Point2> pos_;
    std::vector<int> next_;
    std::vector<int> prev_;
    std::vector<std::uint8_t> used_;
    int entry_ = -1;
};

struct DeltaKappa {
    double raw = 0.0;       // over the two tuple points
    double windowed = 0.0;  // over the tuple points and their joined neighbors
};

DeltaKappa delta_kappa(const PathBuilder& builder, const PathBuilder::Splice& s);

/// Uniform pick; throws InvalidInput on an empty set.
std::size_t select_random(const std::vector<StitchingTuple>& tuples, std::mt19937_64& rng);
/// First tuple whose p has loop predecessor `parent_q` (the point through which
/// the parent stitch entered this isoline), else the first tuple.
std::size_t select_cfs(const std::vector<StitchingTuple>& tuples, const Isovertex& u,
                       std::optional<int> parent_q);
/// Smallest windowed curvature change (largest when `maximize`); ties to the
/// lowest p_index.
std::size_t select_mcs(const std::vector<StitchingTuple>& tuples, const PathBuilder& builder, bool maximize);

/// DFS over the tree edges from the root, children by ascending id (descending
/// when `reverse_children`), stitching each child isoline into the path.
/// Throws Error("unstitchable edge ...", "cfs") when an edge has no usable tuple.
CoveragePath unified_cfs(const Isograph& g, const Tree& tree, int entry_index, const SelectorConfig& selector,
                         bool reverse_children = false);

/// Snaps `entry` to the nearest root point and stitches, retrying once with
/// reversed child order when an edge runs out of tuples.
CoveragePath stitch_tree(const Isograph& g, const Tree& tree, Point2 entry, const SelectorConfig& selector);

/// Index of the point of `vertex` nearest to `p` (ties to the lowest index).
int snap_to_vertex(const Isograph& g, int vertex, Point2 p);

}  // namespace mcfs
