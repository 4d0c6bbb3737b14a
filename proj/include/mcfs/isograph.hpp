#pragma once

/// \file
/// \brief Graph of isolines with stitching tuples on its edges.

#include <optional>
#include <string>
#include <vector>

#include "mcfs/isolines.hpp"

namespace mcfs {

/// Identifies one sample of an original (unsplit) isoline.
struct PointRef {
    int vertex = -1;
    int index = -1;
    friend bool operator==(PointRef a, PointRef b) { return a.vertex == b.vertex && a.index == b.index; }
    friend bool operator<(PointRef a, PointRef b) {
        return a.vertex < b.vertex || (a.vertex == b.vertex && a.index < b.index);
    }
};

struct Isovertex {
    int id = -1;
    Isoline isoline;
    /// Provenance of every loop point. Identity for original isolines; split
    /// vertices carry the points they inherited from the two merged loops.
    std::vector<PointRef> origin;
    bool from_split = false;
    bool alive = true;

    int layer() const { return isoline.layer; }
    int weight() const { return static_cast<int>(isoline.points.size()); }
    const std::vector<Point2>& points() const { return isoline.points; }
    int predecessor(int index) const { return (index + weight() - 1) % weight(); }
    int successor(int index) const { return (index + 1) % weight(); }
};

/// Candidate stitch between point p_index of isoline u and q_index of isoline v.
struct StitchingTuple {
    int p_index = -1;
    int q_index = -1;
    int u = -1;
    int v = -1;
    friend bool operator==(const StitchingTuple&, const StitchingTuple&) = default;
};

enum class EdgeKind { original, augmented, bridge };

const char* to_string(EdgeKind kind);

struct IsoEdge {
    int id = -1;
    int u = -1;  // lower vertex id
    int v = -1;
    std::vector<StitchingTuple> tuples;  // oriented u -> v, sorted by p_index
    EdgeKind kind = EdgeKind::original;
    double weight = 0.0;
    std::vector<int> via_path;  // augmented edges: the original-edge path used for chaining
    /// Set on edges created by isovertex splitting whose tuple set came out
    /// empty; `tuples` then holds the single closest point pair as a detour.
    bool nonadjacent = false;
    double penalty = 0.0;
    bool alive = true;

    int other(int x) const { return x == u ? v : u; }
};

struct Isograph {
    std::vector<Isovertex> vertices;
    std::vector<IsoEdge> edges;
    std::vector<std::vector<int>> incident;  // edge ids per vertex
    double step = 0.0;                       // isoline spacing l
    std::vector<Ring> boundary;              // workspace rings, for augmented-edge checks
    bool connected = true;

    std::size_t vertex_count() const;  // alive vertices
    std::size_t edge_count() const;    // alive edges
    std::optional<int> edge_between(int a, int b) const;
    std::vector<int> neighbors(int x) const;  // alive neighbors, ascending
    /// Tuples of edge `e` with `p_index` on `from` and `q_index` on the other end.
    std::vector<StitchingTuple> tuples_from(int e, int from) const;

    int add_vertex(Isovertex vertex);
    int add_edge(IsoEdge edge);
    void kill_edge(int e);
    void kill_vertex(int x);

    /// Number of connected components over alive vertices and edges.
    int component_count() const;
    /// Hop distances over alive original edges only.
    std::vector<int> original_distances(int from) const;
};

/// Minimum distance from `p` to the polyline of `isoline` (continuous segments).
double point_isoline_distance(Point2 p, const std::vector<Point2>& isoline);

/// Index of the sample of `isoline` nearest to `p`; ties go to the lowest index.
int nearest_index(Point2 p, const std::vector<Point2>& isoline);

/// Points of u strictly closer to v than to every other isoline in v's layer.
std::vector<int> connecting_segment_set(const Isovertex& u, const Isovertex& v,
                                        const std::vector<Isovertex>& all_vertices);

/// Mutually nearest pairs drawn from the two connecting sets.
std::vector<StitchingTuple> stitching_tuples(const Isovertex& u, const Isovertex& v,
                                             const std::vector<Isovertex>& all_vertices);

/// One vertex per isoline (ids sorted by layer then first point) and an
/// original edge wherever adjacent-layer isolines have stitching tuples.
Isograph build_isograph(const std::vector<Isoline>& isolines, double step,
                        const std::vector<Ring>& boundary = {}, Exec exec = Exec::parallel);

/// Joins components through same-layer bridge edges between their closest
/// isoline pairs until connected or no same-layer pair remains. Returns the
/// number of bridges added.
int add_bridges(Isograph& g);

/// Adds augmented edges between vertices at original-graph distance 2..delta
/// whose chained stitching tuples survive the segment test.
Isograph augment(const Isograph& g, int delta);

/// Chained tuples (p_1, p_{k+1}) along `path` that pass the segment test.
std::vector<StitchingTuple> chained_tuples(const Isograph& g, const std::vector<int>& path);

/// Lexicographically smallest shortest path over original edges, or empty.
std::vector<int> shortest_original_path(const Isograph& g, int from, int to);

/// {vertices:[{id,layer,weight}], edges:[{u,v,kind,weight,n_tuples}]}
std::string isograph_to_json_text(const Isograph& g);

}  // namespace mcfs
