#pragma once

// Shared fixtures and brute-force oracles for the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "mcfs/app.hpp"

namespace testing {

using namespace mcfs;

inline Isoline circle_isoline(int layer, Point2 c, double r, double spacing) {
    Isoline raw;
    raw.layer = layer;
    for (int i = 0; i < 720; ++i) {
        const double t = 2.0 * std::numbers::pi * i / 720.0;
        raw.points.push_back({c.x + r * std::cos(t), c.y + r * std::sin(t)});
    }
    return resample_equidistant(raw, spacing);
}

inline Isovertex vertex_of(int id, Isoline iso) {
    Isovertex v;
    v.id = id;
    v.isoline = std::move(iso);
    for (int i = 0; i < v.weight(); ++i) v.origin.push_back({id, i});
    return v;
}

// Exhaustive all-pairs mutual-nearest check restricted to the two connecting sets.
inline std::vector<std::pair<int, int>> brute_tuples(const Isovertex& u, const Isovertex& v,
                                                     const std::vector<Isovertex>& all) {
    auto conn = [&](const Isovertex& a, const Isovertex& b) {
        std::vector<int> out;
        for (int i = 0; i < a.weight(); ++i) {
            const Point2 p = a.points()[static_cast<std::size_t>(i)];
            const double db = point_isoline_distance(p, b.points());
            bool keep = true;
            for (const Isovertex& z : all) {
                if (z.id == b.id || z.layer() != b.layer()) continue;
                if (!(db < point_isoline_distance(p, z.points()))) keep = false;
            }
            if (keep) out.push_back(i);
        }
        return out;
    };
    auto nearest = [](Point2 p, const std::vector<Point2>& pts) {
        int best = 0;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (dist(p, pts[i]) < dist(p, pts[static_cast<std::size_t>(best)])) best = static_cast<int>(i);
        }
        return best;
    };
    const auto ou = conn(u, v);
    const auto ov = conn(v, u);
    std::vector<std::pair<int, int>> out;
    for (int p : ou) {
        for (int q : ov) {
            if (nearest(u.points()[static_cast<std::size_t>(p)], v.points()) == q &&
                nearest(v.points()[static_cast<std::size_t>(q)], u.points()) == p) {
                out.emplace_back(p, q);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Cheapest cover by enumerating, per robot, every connected vertex subset
// that holds its root; a subset's cheapest tree is its induced MST.
inline double induced_tree_cost(const MmrtcInstance& inst, unsigned mask) {
    const int n = inst.vertex_count();
    double cost = 0.0;
    int count = 0;
    for (int v = 0; v < n; ++v) {
        if (mask >> v & 1u) {
            cost += inst.vertex_weight[static_cast<std::size_t>(v)];
            ++count;
        }
    }
    // Prim over the induced subgraph
    std::vector<double> best(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    int start = -1;
    for (int v = 0; v < n && start < 0; ++v) {
        if (mask >> v & 1u) start = v;
    }
    best[static_cast<std::size_t>(start)] = 0.0;
    for (int it = 0; it < count; ++it) {
        int pick = -1;
        for (int v = 0; v < n; ++v) {
            if ((mask >> v & 1u) && !in[static_cast<std::size_t>(v)] &&
                (pick < 0 || best[static_cast<std::size_t>(v)] < best[static_cast<std::size_t>(pick)])) {
                pick = v;
            }
        }
        if (!std::isfinite(best[static_cast<std::size_t>(pick)])) return std::numeric_limits<double>::infinity();
        in[static_cast<std::size_t>(pick)] = 1;
        cost += best[static_cast<std::size_t>(pick)];
        for (const GraphEdge& e : inst.edges) {
            if (!((mask >> e.u & 1u) && (mask >> e.v & 1u))) continue;
            const int o = e.u == pick ? e.v : e.v == pick ? e.u : -1;
            if (o >= 0 && !in[static_cast<std::size_t>(o)]) {
                best[static_cast<std::size_t>(o)] = std::min(best[static_cast<std::size_t>(o)], e.weight);
            }
        }
    }
    return cost;
}

inline double exhaustive_tau(const MmrtcInstance& inst) {
    const int n = inst.vertex_count();
    const unsigned full = (1u << n) - 1u;
    std::vector<std::vector<std::pair<unsigned, double>>> options(static_cast<std::size_t>(inst.k()));
    for (int i = 0; i < inst.k(); ++i) {
        const int r = inst.roots[static_cast<std::size_t>(i)];
        for (unsigned mask = 1; mask <= full; ++mask) {
            if (!(mask >> r & 1u)) continue;
            const double c = induced_tree_cost(inst, mask);
            if (std::isfinite(c)) options[static_cast<std::size_t>(i)].emplace_back(mask, c);
        }
    }
    double best = std::numeric_limits<double>::infinity();
    std::function<void(int, unsigned, double)> rec = [&](int i, unsigned covered, double peak) {
        if (peak >= best) return;
        if (i == inst.k()) {
            if (covered == full) best = peak;
            return;
        }
        for (const auto& [mask, c] : options[static_cast<std::size_t>(i)]) rec(i + 1, covered | mask, std::max(peak, c));
    };
    rec(0, 0u, 0.0);
    return best;
}

// Random connected graph: a random spanning tree plus extra edges.
inline MmrtcInstance random_instance(std::mt19937_64& rng, int n, int k, double extra_density, bool weighted_edges) {
    MmrtcInstance inst;
    std::uniform_int_distribution<int> wv(1, 20);
    for (int v = 0; v < n; ++v) inst.vertex_weight.push_back(wv(rng));
    std::set<std::pair<int, int>> seen;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> we(1, 3);
    // spanning edges stay original, as in an isograph where augmented edges
    // always shortcut an original path
    auto add = [&](int a, int b, bool spanning) {
        if (a > b) std::swap(a, b);
        if (a == b || !seen.insert({a, b}).second) return;
        GraphEdge e{a, b, 0.0, false};
        if (weighted_edges && !spanning && coin(rng) < 0.4) {
            e.augmented = true;
            e.weight = we(rng);
        }
        inst.edges.push_back(e);
    };
    for (int v = 1; v < n; ++v) add(v, std::uniform_int_distribution<int>(0, v - 1)(rng), true);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (coin(rng) < extra_density) add(a, b, false);
        }
    }
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int i = 0; i < k; ++i) inst.roots.push_back(pick(rng));
    return inst;
}

inline Workspace random_blob(std::mt19937_64& rng, bool with_hole) {
    std::uniform_real_distribution<double> amp(0.0, 0.12);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double a2 = amp(rng), a3 = amp(rng), p2 = phase(rng), p3 = phase(rng);
    Ring outer;
    for (int i = 0; i < 200; ++i) {
        const double t = 2.0 * std::numbers::pi * i / 200.0;
        const double r = 1.5 * (1.0 + a2 * std::cos(2 * t + p2) + a3 * std::cos(3 * t + p3));
        outer.push_back({r * std::cos(t), r * std::sin(t)});
    }
    std::vector<Ring> holes;
    if (with_hole) {
        std::uniform_real_distribution<double> off(-0.3, 0.3);
        const Point2 c{off(rng), off(rng)};
        Ring h;
        for (int i = 0; i < 48; ++i) {
            const double t = 2.0 * std::numbers::pi * i / 48.0;
            h.push_back({c.x + 0.3 * std::cos(t), c.y + 0.3 * std::sin(t)});
        }
        holes.push_back(h);
    }
    return Workspace::make("blob", outer, holes);
}

inline std::vector<PointRef> sorted_sources(const CoveragePath& p) {
    std::vector<PointRef> s = p.sources;
    std::sort(s.begin(), s.end());
    return s;
}

// Every original point carried by the tree's (possibly split) vertices.
inline std::vector<PointRef> tree_origin_points(const Isograph& g, const Tree& t) {
    std::vector<PointRef> out;
    for (int v : t.vertices) {
        const auto& o = g.vertices[static_cast<std::size_t>(v)].origin;
        out.insert(out.end(), o.begin(), o.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Random feasible cover over original edges: trees grow from their roots by
// random frontier steps until every vertex is held, then a few extra steps
// add repetitions.
inline TreeCover random_cover(std::mt19937_64& rng, const Isograph& g, const std::vector<int>& roots,
                              int extra_steps) {
    TreeCover c;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        Tree t;
        t.robot = static_cast<int>(i);
        t.root = roots[i];
        t.vertices = {roots[i]};
        c.trees.push_back(t);
    }
    std::set<int> held(roots.begin(), roots.end());
    auto step = [&](Tree& t, bool want_new) {
        std::vector<std::pair<int, int>> frontier;  // (vertex, edge)
        for (const IsoEdge& e : g.edges) {
            if (!e.alive || e.kind != EdgeKind::original) continue;
            const bool hu = t.contains(e.u), hv = t.contains(e.v);
            if (hu == hv) continue;
            const int x = hu ? e.v : e.u;
            if (want_new && held.count(x)) continue;
            frontier.emplace_back(x, e.id);
        }
        if (frontier.empty()) return false;
        const auto [x, e] = frontier[std::uniform_int_distribution<std::size_t>(0, frontier.size() - 1)(rng)];
        t.vertices.insert(std::upper_bound(t.vertices.begin(), t.vertices.end(), x), x);
        t.edges.insert(std::upper_bound(t.edges.begin(), t.edges.end(), e), e);
        held.insert(x);
        return true;
    };
    std::uniform_int_distribution<std::size_t> robot(0, roots.size() - 1);
    while (held.size() < g.vertex_count()) {
        bool grown = false;
        const std::size_t first = robot(rng);
        for (std::size_t j = 0; j < roots.size() && !grown; ++j) grown = step(c.trees[(first + j) % roots.size()], true);
        if (!grown) {
            for (std::size_t j = 0; j < roots.size() && !grown; ++j) grown = step(c.trees[(first + j) % roots.size()], false);
        }
        if (!grown) break;
    }
    for (int s = 0; s < extra_steps; ++s) step(c.trees[robot(rng)], false);
    recompute_costs(g, c);
    return c;
}

// Alive original points held by the cover's vertices, deduplicated.
inline std::set<PointRef> covered_points(const Isograph& g, const TreeCover& c) {
    std::set<PointRef> out;
    for (const Tree& t : c.trees) {
        for (int v : t.vertices) {
            const auto& o = g.vertices[static_cast<std::size_t>(v)].origin;
            out.insert(o.begin(), o.end());
        }
    }
    return out;
}

inline std::vector<int> cover_roots(const TreeCover& c) {
    std::vector<int> r;
    for (const Tree& t : c.trees) r.push_back(t.root);
    return r;
}

inline Isograph suite_graph(const std::string& name, double divisions) {
    const Workspace ws = suite_workspace(name);
    const double l = ws.diameter() / divisions;
    return build_isograph(extract_isolines(build_distance_field(ws, l / 4), l), l);
}

inline double max_gap(const CoveragePath& p) {
    double gap = 0.0;
    for (std::size_t i = 0; i + 1 < p.points.size(); ++i) gap = std::max(gap, dist(p.points[i], p.points[i + 1]));
    return gap;
}

}  // namespace testing
