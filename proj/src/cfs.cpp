#include "mcfs/cfs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace mcfs {

double CoveragePath::length() const {
    double total = 0.0;
    const std::size_t n = points.size();
    if (n < 2) return 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) total += dist(points[i], points[i + 1]);
    if (closed) total += dist(points[n - 1], points[0]);
    return total;
}

const char* to_string(SelectorKind kind) {
    switch (kind) {
        case SelectorKind::random: return "random";
        case SelectorKind::cfs: return "cfs";
        case SelectorKind::mcs: return "mcs";
    }
    return "mcs";
}

SelectorKind selector_from_string(const std::string& name) {
    if (name == "random") return SelectorKind::random;
    if (name == "cfs") return SelectorKind::cfs;
    if (name == "mcs") return SelectorKind::mcs;
    throw InvalidInput("unknown selector: " + name, "cfs");
}

PathBuilder::PathBuilder(const Isograph& g, const std::vector<int>& vertices, int root, int entry_index)
    : g_(g), vertices_(vertices), offset_(g.vertices.size(), -1) {
    int total = 0;
    for (int v : vertices_) {
        const Isovertex& iv = g.vertices[static_cast<std::size_t>(v)];
        offset_[static_cast<std::size_t>(v)] = total;
        for (int i = 0; i < iv.weight(); ++i) {
            owner_.push_back(v);
            pos_.push_back(iv.points()[static_cast<std::size_t>(i)]);
        }
        total += iv.weight();
    }
    next_.assign(static_cast<std::size_t>(total), -1);
    prev_.assign(static_cast<std::size_t>(total), -1);
    used_.assign(static_cast<std::size_t>(total), 0);
    if (root < 0 || offset_[static_cast<std::size_t>(root)] < 0) throw InvalidInput("root is not a tree vertex", "cfs");
    const int n = g.vertices[static_cast<std::size_t>(root)].weight();
    if (entry_index < 0 || entry_index >= n) throw InvalidInput("entry index outside the root isoline", "cfs");
    for (int i = 0; i < n; ++i) {
        const int a = node(root, i);
        next_[static_cast<std::size_t>(a)] = node(root, (i + 1) % n);
        prev_[static_cast<std::size_t>(a)] = node(root, (i + n - 1) % n);
    }
    entry_ = node(root, entry_index);
}

int PathBuilder::node(int vertex, int index) const { return offset_[static_cast<std::size_t>(vertex)] + index; }

int PathBuilder::vertex_of(int node) const { return owner_[static_cast<std::size_t>(node)]; }

int PathBuilder::loop_pred(int node) const {
    const int v = vertex_of(node);
    const int base = offset_[static_cast<std::size_t>(v)];
    return base + g_.vertices[static_cast<std::size_t>(v)].predecessor(node - base);
}

int PathBuilder::loop_succ(int node) const {
    const int v = vertex_of(node);
    const int base = offset_[static_cast<std::size_t>(v)];
    return base + g_.vertices[static_cast<std::size_t>(v)].successor(node - base);
}

std::optional<PathBuilder::Splice> PathBuilder::plan(const StitchingTuple& t) const {
    if (t.u < 0 || t.v < 0 || offset_[static_cast<std::size_t>(t.u)] < 0 || offset_[static_cast<std::size_t>(t.v)] < 0) {
        return std::nullopt;
    }
    Splice s;
    s.p = node(t.u, t.p_index);
    s.q = node(t.v, t.q_index);
    if (used(s.p) || used(s.q) || !in_path(s.p) || in_path(s.q)) return std::nullopt;
    s.bp = loop_pred(s.p);
    if (prev_[static_cast<std::size_t>(s.p)] == s.bp) {
        s.path_enters_p = true;
    } else if (next_[static_cast<std::size_t>(s.p)] == s.bp) {
        s.path_enters_p = false;
    } else {
        return std::nullopt;
    }
    const int bq = loop_pred(s.q);
    const int fq = loop_succ(s.q);
    const Point2 anchor = position(s.bp);
    s.partner = dist(position(bq), anchor) <= dist(position(fq), anchor) ? bq : fq;
    const bool backward = s.partner == bq;
    for (int x = s.partner;; x = backward ? loop_pred(x) : loop_succ(x)) {
        s.child_sequence.push_back(x);
        if (x == s.q) break;
    }
    return s;
}

void PathBuilder::apply(const StitchingTuple& t) {
    const auto s = plan(t);
    if (!s) throw Error("stitching tuple is not applicable to the current path", "cfs");
    const auto& seq = s->child_sequence;
    auto link = [&](int a, int b) {
        next_[static_cast<std::size_t>(a)] = b;
        prev_[static_cast<std::size_t>(b)] = a;
    };
    if (s->path_enters_p) {
        link(s->bp, seq.front());
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) link(seq[i], seq[i + 1]);
        link(seq.back(), s->p);
    } else {
        link(s->p, seq.back());
        for (std::size_t i = seq.size() - 1; i > 0; --i) link(seq[i], seq[i - 1]);
        link(seq.front(), s->bp);
    }
    used_[static_cast<std::size_t>(s->p)] = 1;
    used_[static_cast<std::size_t>(s->q)] = 1;
}

std::vector<PathBuilder::Neighborhood> PathBuilder::after(const Splice& s) const {
    const auto& seq = s.child_sequence;
    const std::size_t n = seq.size();
    if (s.path_enters_p) {
        return {{s.bp, prev_[static_cast<std::size_t>(s.bp)], seq[0]},
                {seq[0], s.bp, seq[1]},
                {seq[n - 1], seq[n - 2], s.p},
                {s.p, seq[n - 1], next_[static_cast<std::size_t>(s.p)]}};
    }
    return {{s.bp, seq[0], next_[static_cast<std::size_t>(s.bp)]},
            {seq[0], seq[1], s.bp},
            {seq[n - 1], s.p, seq[n - 2]},
            {s.p, prev_[static_cast<std::size_t>(s.p)], seq[n - 1]}};
}

double PathBuilder::loop_curvature(int node) const {
    return turning_curvature(position(loop_pred(node)), position(node), position(loop_succ(node)));
}

double PathBuilder::path_curvature(const Neighborhood& n) const {
    return turning_curvature(position(n.prev), position(n.node), position(n.next));
}

std::vector<int> PathBuilder::walk() const {
    std::vector<int> order;
    int x = entry_;
    do {
        order.push_back(x);
        x = next_[static_cast<std::size_t>(x)];
    } while (x != entry_ && x >= 0);
    return order;
}

CoveragePath PathBuilder::path(int robot) const {
    CoveragePath out;
    out.robot = robot;
    for (int x : walk()) {
        const int v = vertex_of(x);
        const int index = x - offset_[static_cast<std::size_t>(v)];
        out.points.push_back(position(x));
        out.sources.push_back(g_.vertices[static_cast<std::size_t>(v)].origin[static_cast<std::size_t>(index)]);
    }
    return out;
}

DeltaKappa delta_kappa(const PathBuilder& builder, const PathBuilder::Splice& s) {
    DeltaKappa d;
    for (const auto& n : builder.after(s)) {
        const double change = builder.path_curvature(n) - builder.loop_curvature(n.node);
        d.windowed += change;
        if (n.node == s.p || n.node == s.q) d.raw += change;
    }
    return d;
}

std::size_t select_random(const std::vector<StitchingTuple>& tuples, std::mt19937_64& rng) {
    if (tuples.empty()) throw InvalidInput("no stitching tuple to select from", "cfs");
    std::uniform_int_distribution<std::size_t> pick(0, tuples.size() - 1);
    return pick(rng);
}

std::size_t select_cfs(const std::vector<StitchingTuple>& tuples, const Isovertex& u, std::optional<int> parent_q) {
    if (tuples.empty()) throw InvalidInput("no stitching tuple to select from", "cfs");
    if (parent_q) {
        for (std::size_t i = 0; i < tuples.size(); ++i) {
            if (u.predecessor(tuples[i].p_index) == *parent_q) return i;
        }
    }
    return 0;
}

std::size_t select_mcs(const std::vector<StitchingTuple>& tuples, const PathBuilder& builder, bool maximize) {
    if (tuples.empty()) throw InvalidInput("no stitching tuple to select from", "cfs");
    std::size_t best = 0;
    double best_value = 0.0;
    bool have = false;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        const auto s = builder.plan(tuples[i]);
        if (!s) continue;
        const double value = delta_kappa(builder, *s).windowed;
        const double tol = 1e-9 * std::max(1.0, std::abs(best_value));
        const bool better = maximize ? value > best_value + tol : value < best_value - tol;
        if (!have || better) {
            best = i;
            best_value = value;
            have = true;
        }
    }
    return best;
}

namespace {

// Longest preferred splice link, in isoline steps.
constexpr double kMaxLink = 2.5;

bool smooth_splice(const Isograph& g, const PathBuilder& builder, const StitchingTuple& t) {
    const auto s = builder.plan(t);
    return s && dist(builder.position(s->p), builder.position(s->q)) <= kMaxLink * g.step &&
           dist(builder.position(s->bp), builder.position(s->partner)) <= kMaxLink * g.step;
}

// Closest point pair between the two loops that the builder can still splice
// (and splice smoothly, when asked).
std::vector<StitchingTuple> proximity_tuples(const Isograph& g, const PathBuilder& builder, int u, int v,
                                             bool smooth_only) {
    const auto& pu = g.vertices[static_cast<std::size_t>(u)].points();
    const auto& pv = g.vertices[static_cast<std::size_t>(v)].points();
    std::vector<std::pair<double, StitchingTuple>> all;
    for (std::size_t a = 0; a < pu.size(); ++a) {
        for (std::size_t b = 0; b < pv.size(); ++b) {
            all.push_back({dist(pu[a], pv[b]), {static_cast<int>(a), static_cast<int>(b), u, v}});
        }
    }
    std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [d, t] : all) {
        if (smooth_only ? smooth_splice(g, builder, t) : builder.plan(t).has_value()) return {t};
    }
    return {};
}

}  // namespace

CoveragePath unified_cfs(const Isograph& g, const Tree& tree, int entry_index, const SelectorConfig& selector,
                         bool reverse_children) {
    std::vector<std::vector<std::pair<int, int>>> adj(g.vertices.size());
    for (int e : tree.edges) {
        const IsoEdge& edge = g.edges[static_cast<std::size_t>(e)];
        adj[static_cast<std::size_t>(edge.u)].emplace_back(edge.v, e);
        adj[static_cast<std::size_t>(edge.v)].emplace_back(edge.u, e);
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        if (reverse_children) std::reverse(list.begin(), list.end());
    }
    struct DfsEdge {
        int u;
        int v;
        int e;
    };
    std::vector<DfsEdge> order;
    std::vector<std::uint8_t> seen(g.vertices.size(), 0);
    std::function<void(int)> visit = [&](int u) {
        seen[static_cast<std::size_t>(u)] = 1;
        for (auto [v, e] : adj[static_cast<std::size_t>(u)]) {
            if (seen[static_cast<std::size_t>(v)]) continue;
            order.push_back({u, v, e});
            visit(v);
        }
    };
    visit(tree.root);

    PathBuilder builder(g, tree.vertices, tree.root, entry_index);
    std::seed_seq seq{static_cast<std::uint32_t>(selector.seed), static_cast<std::uint32_t>(selector.seed >> 32),
                      static_cast<std::uint32_t>(tree.robot)};
    std::mt19937_64 rng(seq);
    std::vector<std::optional<int>> entered(g.vertices.size());

    for (const DfsEdge& d : order) {
        std::vector<StitchingTuple> usable;
        for (const StitchingTuple& t : g.tuples_from(d.e, d.u)) {
            if (builder.plan(t)) usable.push_back(t);
        }
        // keep splices whose two new links stay short when there is a choice
        std::vector<StitchingTuple> smooth;
        for (const StitchingTuple& t : usable) {
            if (smooth_splice(g, builder, t)) smooth.push_back(t);
        }
        const IsoEdge& edge = g.edges[static_cast<std::size_t>(d.e)];
        const bool refine_made = edge.nonadjacent || g.vertices[static_cast<std::size_t>(d.u)].from_split ||
                                 g.vertices[static_cast<std::size_t>(d.v)].from_split;
        if (smooth.empty() && refine_made) smooth = proximity_tuples(g, builder, d.u, d.v, true);
        if (!smooth.empty()) usable = std::move(smooth);
        if (usable.empty() && !edge.tuples.empty()) {
            // every tuple already taken by earlier splices: closest free pair
            usable = proximity_tuples(g, builder, d.u, d.v, false);
        }
        if (usable.empty()) {
            throw Error("unstitchable edge " + std::to_string(d.u) + "-" + std::to_string(d.v), "cfs");
        }
        std::size_t pick = 0;
        switch (selector.kind) {
            case SelectorKind::random: pick = select_random(usable, rng); break;
            case SelectorKind::cfs:
                pick = select_cfs(usable, g.vertices[static_cast<std::size_t>(d.u)], entered[static_cast<std::size_t>(d.u)]);
                break;
            case SelectorKind::mcs: pick = select_mcs(usable, builder, selector.maximize); break;
        }
        builder.apply(usable[pick]);
        entered[static_cast<std::size_t>(d.v)] = usable[pick].q_index;
    }
    return builder.path(tree.robot);
}

int snap_to_vertex(const Isograph& g, int vertex, Point2 p) {
    return nearest_index(p, g.vertices[static_cast<std::size_t>(vertex)].points());
}

CoveragePath stitch_tree(const Isograph& g, const Tree& tree, Point2 entry, const SelectorConfig& selector) {
    const int entry_index = snap_to_vertex(g, tree.root, entry);
    try {
        return unified_cfs(g, tree, entry_index, selector, false);
    } catch (const Error& e) {
        if (e.stage() != "cfs") throw;
        return unified_cfs(g, tree, entry_index, selector, true);
    }
}

}  // namespace mcfs
