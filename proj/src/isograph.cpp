#include "mcfs/isograph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>

#include <json.hpp>

namespace mcfs {

const char* to_string(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::original: return "original";
        case EdgeKind::augmented: return "augmented";
        case EdgeKind::bridge: return "bridge";
    }
    return "original";
}

std::size_t Isograph::vertex_count() const {
    return static_cast<std::size_t>(
        std::count_if(vertices.begin(), vertices.end(), [](const Isovertex& v) { return v.alive; }));
}

std::size_t Isograph::edge_count() const {
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [](const IsoEdge& e) { return e.alive; }));
}

std::optional<int> Isograph::edge_between(int a, int b) const {
    for (int e : incident[static_cast<std::size_t>(a)]) {
        const IsoEdge& edge = edges[static_cast<std::size_t>(e)];
        if (edge.alive && edge.other(a) == b) return e;
    }
    return std::nullopt;
}

std::vector<int> Isograph::neighbors(int x) const {
    std::vector<int> out;
    for (int e : incident[static_cast<std::size_t>(x)]) {
        const IsoEdge& edge = edges[static_cast<std::size_t>(e)];
        if (edge.alive) out.push_back(edge.other(x));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<StitchingTuple> Isograph::tuples_from(int e, int from) const {
    const IsoEdge& edge = edges[static_cast<std::size_t>(e)];
    if (from == edge.u) return edge.tuples;
    std::vector<StitchingTuple> out;
    out.reserve(edge.tuples.size());
    for (const StitchingTuple& t : edge.tuples) {
        out.push_back({t.q_index, t.p_index, t.v, t.u});
    }
    std::sort(out.begin(), out.end(), [](const StitchingTuple& a, const StitchingTuple& b) {
        return a.p_index < b.p_index || (a.p_index == b.p_index && a.q_index < b.q_index);
    });
    return out;
}

int Isograph::add_vertex(Isovertex vertex) {
    vertex.id = static_cast<int>(vertices.size());
    if (vertex.origin.empty()) {
        for (int i = 0; i < vertex.weight(); ++i) vertex.origin.push_back({vertex.id, i});
    }
    vertices.push_back(std::move(vertex));
    incident.emplace_back();
    return vertices.back().id;
}

int Isograph::add_edge(IsoEdge edge) {
    if (edge.u > edge.v) {
        std::swap(edge.u, edge.v);
        for (StitchingTuple& t : edge.tuples) {
            std::swap(t.p_index, t.q_index);
            std::swap(t.u, t.v);
        }
    }
    std::sort(edge.tuples.begin(), edge.tuples.end(), [](const StitchingTuple& a, const StitchingTuple& b) {
        return a.p_index < b.p_index || (a.p_index == b.p_index && a.q_index < b.q_index);
    });
    edge.id = static_cast<int>(edges.size());
    incident[static_cast<std::size_t>(edge.u)].push_back(edge.id);
    incident[static_cast<std::size_t>(edge.v)].push_back(edge.id);
    edges.push_back(std::move(edge));
    return edges.back().id;
}

void Isograph::kill_edge(int e) { edges[static_cast<std::size_t>(e)].alive = false; }

void Isograph::kill_vertex(int x) {
    vertices[static_cast<std::size_t>(x)].alive = false;
    for (int e : incident[static_cast<std::size_t>(x)]) kill_edge(e);
}

int Isograph::component_count() const {
    std::vector<int> seen(vertices.size(), 0);
    int components = 0;
    for (const Isovertex& start : vertices) {
        if (!start.alive || seen[static_cast<std::size_t>(start.id)]) continue;
        ++components;
        std::deque<int> queue{start.id};
        seen[static_cast<std::size_t>(start.id)] = 1;
        while (!queue.empty()) {
            const int x = queue.front();
            queue.pop_front();
            for (int y : neighbors(x)) {
                if (!seen[static_cast<std::size_t>(y)]) {
                    seen[static_cast<std::size_t>(y)] = 1;
                    queue.push_back(y);
                }
            }
        }
    }
    return components;
}

std::vector<int> Isograph::original_distances(int from) const {
    std::vector<int> d(vertices.size(), -1);
    d[static_cast<std::size_t>(from)] = 0;
    std::deque<int> queue{from};
    while (!queue.empty()) {
        const int x = queue.front();
        queue.pop_front();
        for (int e : incident[static_cast<std::size_t>(x)]) {
            const IsoEdge& edge = edges[static_cast<std::size_t>(e)];
            if (!edge.alive || edge.kind != EdgeKind::original) continue;
            const int y = edge.other(x);
            if (d[static_cast<std::size_t>(y)] < 0) {
                d[static_cast<std::size_t>(y)] = d[static_cast<std::size_t>(x)] + 1;
                queue.push_back(y);
            }
        }
    }
    return d;
}

double point_isoline_distance(Point2 p, const std::vector<Point2>& isoline) {
    return point_ring_distance(p, isoline);
}

int nearest_index(Point2 p, const std::vector<Point2>& isoline) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(isoline.size()); ++i) {
        const double d = dist(p, isoline[static_cast<std::size_t>(i)]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

std::vector<int> connecting_segment_set(const Isovertex& u, const Isovertex& v,
                                        const std::vector<Isovertex>& all_vertices) {
    std::vector<const Isovertex*> rivals;
    for (const Isovertex& z : all_vertices) {
        if (z.alive && z.id != v.id && z.layer() == v.layer()) rivals.push_back(&z);
    }
    std::vector<int> out;
    for (int i = 0; i < u.weight(); ++i) {
        const Point2 p = u.points()[static_cast<std::size_t>(i)];
        const double to_v = point_isoline_distance(p, v.points());
        bool strictly_closest = true;
        for (const Isovertex* z : rivals) {
            if (!(to_v < point_isoline_distance(p, z->points()))) {
                strictly_closest = false;
                break;
            }
        }
        if (strictly_closest) out.push_back(i);
    }
    return out;
}

std::vector<StitchingTuple> stitching_tuples(const Isovertex& u, const Isovertex& v,
                                             const std::vector<Isovertex>& all_vertices) {
    const std::vector<int> from_u = connecting_segment_set(u, v, all_vertices);
    if (from_u.empty()) return {};
    const std::vector<int> from_v = connecting_segment_set(v, u, all_vertices);
    const std::set<int> in_v(from_v.begin(), from_v.end());
    std::vector<StitchingTuple> out;
    for (int p : from_u) {
        const int q = nearest_index(u.points()[static_cast<std::size_t>(p)], v.points());
        if (!in_v.count(q)) continue;
        if (nearest_index(v.points()[static_cast<std::size_t>(q)], u.points()) != p) continue;
        out.push_back({p, q, u.id, v.id});
    }
    return out;
}

Isograph build_isograph(const std::vector<Isoline>& isolines, double step, const std::vector<Ring>& boundary,
                        Exec exec) {
    Isograph g;
    g.step = step;
    g.boundary = boundary;
    std::vector<Isoline> sorted = isolines;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Isoline& a, const Isoline& b) {
        if (a.layer != b.layer) return a.layer < b.layer;
        return a.points.front() < b.points.front();
    });
    for (Isoline& iso : sorted) {
        if (iso.points.size() < 3) throw InvalidInput("isoline with fewer than 3 points", "isograph");
        Isovertex vertex;
        vertex.isoline = std::move(iso);
        g.add_vertex(std::move(vertex));
    }
    std::vector<std::pair<int, int>> pairs;
    for (const Isovertex& a : g.vertices) {
        for (const Isovertex& b : g.vertices) {
            if (a.id < b.id && std::abs(a.layer() - b.layer()) == 1) pairs.emplace_back(a.id, b.id);
        }
    }
    std::vector<std::vector<StitchingTuple>> found(pairs.size());
    const long n_pairs = static_cast<long>(pairs.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long k = 0; k < n_pairs; ++k) {
            const auto [a, b] = pairs[static_cast<std::size_t>(k)];
            found[static_cast<std::size_t>(k)] =
                stitching_tuples(g.vertices[static_cast<std::size_t>(a)], g.vertices[static_cast<std::size_t>(b)], g.vertices);
        }
    } else {
        for (long k = 0; k < n_pairs; ++k) {
            const auto [a, b] = pairs[static_cast<std::size_t>(k)];
            found[static_cast<std::size_t>(k)] =
                stitching_tuples(g.vertices[static_cast<std::size_t>(a)], g.vertices[static_cast<std::size_t>(b)], g.vertices);
        }
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (found[k].empty()) continue;
        IsoEdge edge;
        edge.u = pairs[k].first;
        edge.v = pairs[k].second;
        edge.tuples = std::move(found[k]);
        g.add_edge(std::move(edge));
    }
    g.connected = g.component_count() <= 1;
    return g;
}

int add_bridges(Isograph& g) {
    int added = 0;
    while (true) {
        // label components
        std::vector<int> comp(g.vertices.size(), -1);
        int n_comp = 0;
        for (const Isovertex& s : g.vertices) {
            if (!s.alive || comp[static_cast<std::size_t>(s.id)] >= 0) continue;
            std::deque<int> queue{s.id};
            comp[static_cast<std::size_t>(s.id)] = n_comp;
            while (!queue.empty()) {
                const int x = queue.front();
                queue.pop_front();
                for (int y : g.neighbors(x)) {
                    if (comp[static_cast<std::size_t>(y)] < 0) {
                        comp[static_cast<std::size_t>(y)] = n_comp;
                        queue.push_back(y);
                    }
                }
            }
            ++n_comp;
        }
        if (n_comp <= 1) break;
        double best = std::numeric_limits<double>::infinity();
        StitchingTuple best_tuple;
        for (const Isovertex& a : g.vertices) {
            if (!a.alive) continue;
            for (const Isovertex& b : g.vertices) {
                if (!b.alive || b.id <= a.id || b.layer() != a.layer()) continue;
                if (comp[static_cast<std::size_t>(a.id)] == comp[static_cast<std::size_t>(b.id)]) continue;
                for (int i = 0; i < a.weight(); ++i) {
                    for (int j = 0; j < b.weight(); ++j) {
                        const double d = dist(a.points()[static_cast<std::size_t>(i)], b.points()[static_cast<std::size_t>(j)]);
                        if (d < best) {
                            best = d;
                            best_tuple = {i, j, a.id, b.id};
                        }
                    }
                }
            }
        }
        if (!std::isfinite(best)) break;
        IsoEdge edge;
        edge.u = best_tuple.u;
        edge.v = best_tuple.v;
        edge.kind = EdgeKind::bridge;
        edge.weight = best;
        edge.tuples = {best_tuple};
        g.add_edge(std::move(edge));
        ++added;
    }
    g.connected = g.component_count() <= 1;
    return added;
}

std::vector<int> shortest_original_path(const Isograph& g, int from, int to) {
    const std::vector<int> to_target = g.original_distances(to);
    if (to_target[static_cast<std::size_t>(from)] < 0) return {};
    std::vector<int> path{from};
    int x = from;
    while (x != to) {
        int next = -1;
        for (int e : g.incident[static_cast<std::size_t>(x)]) {
            const IsoEdge& edge = g.edges[static_cast<std::size_t>(e)];
            if (!edge.alive || edge.kind != EdgeKind::original) continue;
            const int y = edge.other(x);
            if (to_target[static_cast<std::size_t>(y)] == to_target[static_cast<std::size_t>(x)] - 1 &&
                (next < 0 || y < next)) {
                next = y;
            }
        }
        x = next;
        path.push_back(x);
    }
    return path;
}

namespace {

bool segment_admissible(const Isograph& g, Point2 a, Point2 b, int end_u, int end_v, int max_isolines) {
    for (const Ring& ring : g.boundary) {
        if (segment_hits_ring(a, b, ring)) return false;
    }
    const Point2 lo{std::min(a.x, b.x), std::min(a.y, b.y)};
    const Point2 hi{std::max(a.x, b.x), std::max(a.y, b.y)};
    int crossed = 0;
    for (const Isovertex& z : g.vertices) {
        if (!z.alive || z.id == end_u || z.id == end_v) continue;
        const auto& pts = z.points();
        const std::size_t n = pts.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 c = pts[i];
            const Point2 d = pts[(i + 1) % n];
            if (std::max(c.x, d.x) < lo.x || std::min(c.x, d.x) > hi.x || std::max(c.y, d.y) < lo.y ||
                std::min(c.y, d.y) > hi.y) {
                continue;
            }
            if (segments_intersect(a, b, c, d)) {
                ++crossed;
                break;
            }
        }
        if (crossed > max_isolines) return false;
    }
    return true;
}

}  // namespace

std::vector<StitchingTuple> chained_tuples(const Isograph& g, const std::vector<int>& path) {
    if (path.size() < 2) return {};
    // reachable (p_1, p_i) pairs, advanced one edge at a time
    std::set<std::pair<int, int>> reach;
    for (std::size_t s = 0; s + 1 < path.size(); ++s) {
        const auto e = g.edge_between(path[s], path[s + 1]);
        if (!e) return {};
        std::multimap<int, int> step;
        for (const StitchingTuple& t : g.tuples_from(*e, path[s])) step.emplace(t.p_index, t.q_index);
        std::set<std::pair<int, int>> next;
        if (s == 0) {
            for (const auto& [p, q] : step) next.emplace(p, q);
        } else {
            for (const auto& [p1, pi] : reach) {
                auto [lo, hi] = step.equal_range(pi);
                for (auto it = lo; it != hi; ++it) next.emplace(p1, it->second);
            }
        }
        reach = std::move(next);
        if (reach.empty()) return {};
    }
    const int first = path.front();
    const int last = path.back();
    const int k = static_cast<int>(path.size()) - 1;
    const Isovertex& a = g.vertices[static_cast<std::size_t>(first)];
    const Isovertex& b = g.vertices[static_cast<std::size_t>(last)];
    std::vector<StitchingTuple> out;
    for (const auto& [p1, pk] : reach) {
        if (segment_admissible(g, a.points()[static_cast<std::size_t>(p1)], b.points()[static_cast<std::size_t>(pk)],
                               first, last, k - 1)) {
            out.push_back({p1, pk, first, last});
        }
    }
    return out;
}

Isograph augment(const Isograph& g, int delta) {
    if (delta < 2) throw InvalidInput("augmentation level delta must be >= 2", "isograph");
    Isograph out = g;
    const int n = static_cast<int>(g.vertices.size());
    for (int a = 0; a < n; ++a) {
        if (!g.vertices[static_cast<std::size_t>(a)].alive) continue;
        const std::vector<int> d = g.original_distances(a);
        for (int b = a + 1; b < n; ++b) {
            if (!g.vertices[static_cast<std::size_t>(b)].alive) continue;
            const int hops = d[static_cast<std::size_t>(b)];
            if (hops < 2 || hops > delta) continue;
            if (out.edge_between(a, b)) continue;
            const std::vector<int> path = shortest_original_path(g, a, b);
            std::vector<StitchingTuple> tuples = chained_tuples(g, path);
            if (tuples.empty()) continue;
            IsoEdge edge;
            edge.u = a;
            edge.v = b;
            edge.kind = EdgeKind::augmented;
            edge.weight = g.step * std::abs(g.vertices[static_cast<std::size_t>(a)].layer() -
                                            g.vertices[static_cast<std::size_t>(b)].layer());
            edge.tuples = std::move(tuples);
            edge.via_path = path;
            out.add_edge(std::move(edge));
        }
    }
    out.connected = out.component_count() <= 1;
    return out;
}

std::string isograph_to_json_text(const Isograph& g) {
    nlohmann::json j;
    j["step"] = g.step;
    j["connected"] = g.connected;
    j["vertices"] = nlohmann::json::array();
    for (const Isovertex& v : g.vertices) {
        if (!v.alive) continue;
        j["vertices"].push_back({{"id", v.id}, {"layer", v.layer()}, {"weight", v.weight()}});
    }
    j["edges"] = nlohmann::json::array();
    for (const IsoEdge& e : g.edges) {
        if (!e.alive) continue;
        j["edges"].push_back({{"u", e.u},
                              {"v", e.v},
                              {"kind", to_string(e.kind)},
                              {"weight", e.weight},
                              {"n_tuples", e.tuples.size()}});
    }
    return j.dump(1);
}

}  // namespace mcfs
