#include "mcfs/refine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

namespace mcfs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Longest admissible nonadjacent link and cut link, in isoline steps.
constexpr double kMaxJump = 2.0;
constexpr double kMaxLink = 2.5;

double population_stddev(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    return std::sqrt(var / static_cast<double>(xs.size()));
}

int occurrences(const TreeCover& cover, int v) {
    int n = 0;
    for (const Tree& t : cover.trees) n += t.contains(v) ? 1 : 0;
    return n;
}

/// Largest s with s^m <= budget.
std::size_t per_slot_limit(std::size_t budget, std::size_t m) {
    std::size_t s = 1;
    while (true) {
        double p = 1.0;
        for (std::size_t i = 0; i < m; ++i) p *= static_cast<double>(s + 1);
        if (p > static_cast<double>(budget)) return s;
        ++s;
    }
}

struct CandidateEdge {
    int a = -1;
    int b = -1;
    double weight = 0.0;
    int existing = -1;  // id in the current graph, or -1 for a new edge
    int fresh = -1;     // index into Plan::fresh
};

struct FreshEdge {
    int z = -1;
    int x = -1;
    std::vector<StitchingTuple> tuples;  // oriented z -> x
    EdgeKind kind = EdgeKind::original;
    double weight = 0.0;
    bool nonadjacent = false;
    double penalty = 0.0;
    bool blocked = false;  // nonadjacent and too far apart to stitch continuously
};

struct Plan {
    double h = kInf;
    std::vector<SplitLoop> loops;
    std::vector<FreshEdge> fresh;
    std::vector<Tree> trees;                     // rewired trees, fresh edges as -1 - index
    std::vector<int> slots;                      // cover index per loop
    std::vector<StitchingTuple> cuts;
    std::vector<int> slot_u, idx_u, slot_v, idx_v;  // loop slot and position of each input point
    std::map<std::pair<int, int>, int> fresh_index;
};

class Splitter {
public:
    Splitter(const Isograph& g, const TreeCover& cover, int u, int v, std::vector<int> slots)
        : g_(g), cover_(cover), u_(u), v_(v), slots_(std::move(slots)) {
        const auto uv = g.edge_between(u, v);
        uv_ = uv ? *uv : -1;
        base_ = static_cast<int>(g.vertices.size());
        for (int x : g.neighbors(u)) {
            if (x != v) neighbors_.insert(x);
        }
        for (int x : g.neighbors(v)) {
            if (x != u) neighbors_.insert(x);
        }
    }

    /// Index of the (loop j, x) edge in plan.fresh, building it on first use.
    int fresh(Plan& plan, int j, int x) const {
        const auto found = plan.fresh_index.find({j, x});
        if (found != plan.fresh_index.end()) return found->second;
        const int z = base_ + j;
        FreshEdge fe;
        fe.z = z;
        fe.x = x;
        bool have_source = false;
        bool any_original = false;
        double weight = kInf;
        EdgeKind kind = EdgeKind::original;
        for (int side : {u_, v_}) {
            const auto e = g_.edge_between(side, x);
            if (!e) continue;
            const IsoEdge& edge = g_.edges[static_cast<std::size_t>(*e)];
            if (!have_source || edge.weight < weight) {
                weight = edge.weight;
                kind = edge.kind;
            }
            have_source = true;
            any_original = any_original || edge.kind == EdgeKind::original;
            const auto& slot = side == u_ ? plan.slot_u : plan.slot_v;
            const auto& idx = side == u_ ? plan.idx_u : plan.idx_v;
            const Isovertex& sv = g_.vertices[static_cast<std::size_t>(side)];
            const auto& src = plan.loops[static_cast<std::size_t>(j)].source;
            const int len = static_cast<int>(src.size());
            // a tuple at a cut would splice across the other isoline
            auto intact = [&](int p) {
                const int k = idx[static_cast<std::size_t>(p)];
                const std::set<std::pair<int, int>> around{src[static_cast<std::size_t>((k + len - 1) % len)],
                                                           src[static_cast<std::size_t>((k + 1) % len)]};
                return around == std::set<std::pair<int, int>>{{side, sv.predecessor(p)}, {side, sv.successor(p)}};
            };
            for (const StitchingTuple& t : g_.tuples_from(*e, side)) {
                if (slot[static_cast<std::size_t>(t.p_index)] == j && intact(t.p_index)) {
                    fe.tuples.push_back({idx[static_cast<std::size_t>(t.p_index)], t.q_index, z, x});
                }
            }
        }
        fe.kind = any_original ? EdgeKind::original : kind;
        fe.weight = any_original ? 0.0 : weight;
        std::sort(fe.tuples.begin(), fe.tuples.end(), [](const StitchingTuple& a, const StitchingTuple& b) {
            return a.p_index < b.p_index || (a.p_index == b.p_index && a.q_index < b.q_index);
        });
        fe.tuples.erase(std::unique(fe.tuples.begin(), fe.tuples.end()), fe.tuples.end());
        if (fe.tuples.empty()) {
            fe.nonadjacent = true;
            const auto& loop = plan.loops[static_cast<std::size_t>(j)].points;
            const auto& other = g_.vertices[static_cast<std::size_t>(x)].points();
            double best = kInf;
            StitchingTuple closest;
            for (std::size_t a = 0; a < loop.size(); ++a) {
                for (std::size_t b = 0; b < other.size(); ++b) {
                    const double d = dist(loop[a], other[b]);
                    if (d < best) {
                        best = d;
                        closest = {static_cast<int>(a), static_cast<int>(b), z, x};
                    }
                }
            }
            fe.penalty = best;
            fe.tuples = {closest};
            fe.blocked = best > kMaxJump * g_.step;
        }
        const int index = static_cast<int>(plan.fresh.size());
        plan.fresh_index[{j, x}] = index;
        plan.fresh.push_back(std::move(fe));
        return index;
    }

    std::optional<Plan> evaluate(const std::vector<StitchingTuple>& cuts) const {
        const Isovertex& iu = g_.vertices[static_cast<std::size_t>(u_)];
        const Isovertex& iv = g_.vertices[static_cast<std::size_t>(v_)];
        for (const StitchingTuple& t : cuts) {
            const Point2 bp = iu.points()[static_cast<std::size_t>(iu.predecessor(t.p_index))];
            const Point2 bq = iv.points()[static_cast<std::size_t>(iv.predecessor(t.q_index))];
            if (dist(bp, bq) > kMaxLink * g_.step) return std::nullopt;
        }
        auto loops = split_loops(g_, u_, v_, cuts);
        if (!loops) return std::nullopt;
        const int nu = g_.vertices[static_cast<std::size_t>(u_)].weight();
        const int nv = g_.vertices[static_cast<std::size_t>(v_)].weight();
        std::vector<int> slot_u(static_cast<std::size_t>(nu)), idx_u(static_cast<std::size_t>(nu));
        std::vector<int> slot_v(static_cast<std::size_t>(nv)), idx_v(static_cast<std::size_t>(nv));
        for (std::size_t j = 0; j < loops->size(); ++j) {
            const auto& src = (*loops)[j].source;
            for (std::size_t k = 0; k < src.size(); ++k) {
                const auto [vertex, index] = src[k];
                if (vertex == u_) {
                    slot_u[static_cast<std::size_t>(index)] = static_cast<int>(j);
                    idx_u[static_cast<std::size_t>(index)] = static_cast<int>(k);
                } else {
                    slot_v[static_cast<std::size_t>(index)] = static_cast<int>(j);
                    idx_v[static_cast<std::size_t>(index)] = static_cast<int>(k);
                }
            }
        }

        Plan plan;
        plan.loops = std::move(*loops);
        plan.slots = slots_;
        plan.cuts = cuts;

        plan.slot_u = std::move(slot_u);
        plan.idx_u = std::move(idx_u);
        plan.slot_v = std::move(slot_v);
        plan.idx_v = std::move(idx_v);

        std::vector<double> costs;
        double penalties = 0.0;
        for (std::size_t j = 0; j < slots_.size(); ++j) {
            const Tree& t = cover_.trees[static_cast<std::size_t>(slots_[j])];
            const int z = base_ + static_cast<int>(j);
            std::vector<int> verts;
            for (int x : t.vertices) {
                if (x != u_ && x != v_) verts.push_back(x);
            }
            verts.push_back(z);
            std::vector<CandidateEdge> cands;
            std::set<int> linked;
            for (int e : t.edges) {
                const IsoEdge& edge = g_.edges[static_cast<std::size_t>(e)];
                const bool touches = edge.u == u_ || edge.v == u_ || edge.u == v_ || edge.v == v_;
                if (!touches) {
                    cands.push_back({edge.u, edge.v, edge.weight, e, -1});
                    continue;
                }
                if (e == uv_) continue;
                const int x = (edge.u == u_ || edge.u == v_) ? edge.v : edge.u;
                if (x == u_ || x == v_ || !linked.insert(x).second) continue;
                const int f = fresh(plan, static_cast<int>(j), x);
                if (plan.fresh[static_cast<std::size_t>(f)].blocked) continue;
                cands.push_back({z, x, plan.fresh[static_cast<std::size_t>(f)].weight, -1, f});
            }
            const int root = (t.root == u_ || t.root == v_) ? z : t.root;
            // BFS spanning tree, neighbors by ascending vertex id
            std::map<int, std::vector<std::pair<int, int>>> adj;
            for (std::size_t c = 0; c < cands.size(); ++c) {
                adj[cands[c].a].emplace_back(cands[c].b, static_cast<int>(c));
                adj[cands[c].b].emplace_back(cands[c].a, static_cast<int>(c));
            }
            for (auto& [x, list] : adj) std::sort(list.begin(), list.end());
            std::set<int> reached{root};
            std::deque<int> queue{root};
            Tree nt;
            nt.robot = t.robot;
            nt.root = root;
            double cost = 0.0;
            while (!queue.empty()) {
                const int x = queue.front();
                queue.pop_front();
                for (auto [y, c] : adj[x]) {
                    if (reached.count(y)) continue;
                    reached.insert(y);
                    queue.push_back(y);
                    const CandidateEdge& ce = cands[static_cast<std::size_t>(c)];
                    nt.edges.push_back(ce.existing >= 0 ? ce.existing : -1 - ce.fresh);
                    cost += ce.weight;
                    if (ce.fresh >= 0 && plan.fresh[static_cast<std::size_t>(ce.fresh)].nonadjacent) {
                        penalties += plan.fresh[static_cast<std::size_t>(ce.fresh)].penalty;
                    }
                }
            }
            if (reached.size() != verts.size()) return std::nullopt;
            std::sort(verts.begin(), verts.end());
            nt.vertices = verts;
            for (int x : verts) {
                cost += x == z ? static_cast<double>(plan.loops[j].points.size())
                               : static_cast<double>(g_.vertices[static_cast<std::size_t>(x)].weight());
            }
            nt.cost = cost;
            costs.push_back(cost);
            plan.trees.push_back(std::move(nt));
        }
        plan.h = population_stddev(costs) + penalties;
        return plan;
    }

    PisResult materialize(Plan plan) const {
        for (std::size_t j = 0; j < plan.loops.size(); ++j) {
            for (int x : neighbors_) fresh(plan, static_cast<int>(j), x);
        }
        PisResult out;
        out.h = plan.h;
        out.cuts = plan.cuts;
        out.graph = g_;
        out.cover = cover_;
        const Isovertex& iu = g_.vertices[static_cast<std::size_t>(u_)];
        const Isovertex& iv = g_.vertices[static_cast<std::size_t>(v_)];
        for (const SplitLoop& loop : plan.loops) {
            Isovertex z;
            z.isoline.layer = std::min(iu.layer(), iv.layer());
            z.isoline.points = loop.points;
            z.isoline.spacing = iu.isoline.spacing;
            z.origin = loop.origin;
            z.from_split = true;
            out.new_vertices.push_back(out.graph.add_vertex(std::move(z)));
        }
        // fresh edges in use by a rewired tree
        std::set<int> used;
        for (const Tree& t : plan.trees) {
            for (int e : t.edges) {
                if (e < 0) used.insert(-1 - e);
            }
        }
        std::vector<int> fresh_id(plan.fresh.size(), -1);
        for (std::size_t f = 0; f < plan.fresh.size(); ++f) {
            const FreshEdge& fe = plan.fresh[f];
            if (fe.nonadjacent && !used.count(static_cast<int>(f))) continue;
            IsoEdge edge;
            edge.u = fe.z;
            edge.v = fe.x;
            edge.tuples = fe.tuples;
            edge.kind = fe.kind;
            edge.weight = fe.weight;
            edge.nonadjacent = fe.nonadjacent;
            edge.penalty = fe.penalty;
            fresh_id[f] = out.graph.add_edge(std::move(edge));
        }
        out.graph.kill_vertex(u_);
        out.graph.kill_vertex(v_);
        for (std::size_t j = 0; j < plan.trees.size(); ++j) {
            Tree t = plan.trees[j];
            for (int& e : t.edges) {
                if (e < 0) e = fresh_id[static_cast<std::size_t>(-1 - e)];
            }
            std::sort(t.edges.begin(), t.edges.end());
            out.cover.trees[static_cast<std::size_t>(plan.slots[j])] = std::move(t);
        }
        recompute_costs(out.graph, out.cover);
        return out;
    }

private:
    const Isograph& g_;
    const TreeCover& cover_;
    int u_;
    int v_;
    int uv_ = -1;
    int base_ = 0;
    std::vector<int> slots_;
    std::set<int> neighbors_;
};

}  // namespace

std::optional<std::vector<SplitLoop>> split_loops(const Isograph& g, int u, int v,
                                                  const std::vector<StitchingTuple>& cuts) {
    const Isovertex& iu = g.vertices[static_cast<std::size_t>(u)];
    const Isovertex& iv = g.vertices[static_cast<std::size_t>(v)];
    const int nu = iu.weight();
    const int nv = iv.weight();
    const std::size_t m = cuts.size();
    if (m == 0) return std::nullopt;
    std::set<int> ps, qs;
    for (const StitchingTuple& t : cuts) {
        if (t.p_index < 0 || t.p_index >= nu || t.q_index < 0 || t.q_index >= nv) return std::nullopt;
        if (!ps.insert(t.p_index).second || !qs.insert(t.q_index).second) return std::nullopt;
    }
    // nodes: u points 0..nu-1, v points nu..nu+nv-1
    const int n = nu + nv;
    std::vector<std::pair<int, int>> links;
    std::vector<std::uint8_t> cut_u(static_cast<std::size_t>(nu), 0), cut_v(static_cast<std::size_t>(nv), 0);
    for (const StitchingTuple& t : cuts) {
        cut_u[static_cast<std::size_t>(iu.predecessor(t.p_index))] = 1;
        cut_v[static_cast<std::size_t>(iv.predecessor(t.q_index))] = 1;
    }
    for (int a = 0; a < nu; ++a) {
        if (!cut_u[static_cast<std::size_t>(a)]) links.emplace_back(a, iu.successor(a));
    }
    for (int b = 0; b < nv; ++b) {
        if (!cut_v[static_cast<std::size_t>(b)]) links.emplace_back(nu + b, nu + iv.successor(b));
    }
    for (const StitchingTuple& t : cuts) {
        links.emplace_back(t.p_index, nu + t.q_index);
        links.emplace_back(iu.predecessor(t.p_index), nu + iv.predecessor(t.q_index));
    }
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));
    for (std::size_t l = 0; l < links.size(); ++l) {
        adj[static_cast<std::size_t>(links[l].first)].emplace_back(links[l].second, static_cast<int>(l));
        adj[static_cast<std::size_t>(links[l].second)].emplace_back(links[l].first, static_cast<int>(l));
    }
    for (const auto& a : adj) {
        if (a.size() != 2) return std::nullopt;
    }
    std::vector<std::uint8_t> link_used(links.size(), 0);
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> cycles;
    for (int s = 0; s < n; ++s) {
        if (seen[static_cast<std::size_t>(s)]) continue;
        std::vector<int> cycle;
        int x = s;
        while (true) {
            seen[static_cast<std::size_t>(x)] = 1;
            cycle.push_back(x);
            int next = -1;
            for (auto [y, l] : adj[static_cast<std::size_t>(x)]) {
                if (!link_used[static_cast<std::size_t>(l)]) {
                    link_used[static_cast<std::size_t>(l)] = 1;
                    next = y;
                    break;
                }
            }
            if (next < 0 || next == s) break;
            x = next;
        }
        cycles.push_back(std::move(cycle));
    }
    if (cycles.size() != m) return std::nullopt;
    std::vector<SplitLoop> loops(m);
    std::vector<std::uint8_t> filled(m, 0);
    for (const auto& cycle : cycles) {
        if (cycle.size() < 3) return std::nullopt;
        int slot = -1;
        for (std::size_t j = 0; j < m; ++j) {
            if (std::find(cycle.begin(), cycle.end(), cuts[j].p_index) != cycle.end()) {
                if (slot >= 0) return std::nullopt;
                slot = static_cast<int>(j);
            }
        }
        if (slot < 0 || filled[static_cast<std::size_t>(slot)]) return std::nullopt;
        filled[static_cast<std::size_t>(slot)] = 1;
        std::vector<int> order = cycle;
        std::vector<Point2> pts;
        auto point_of = [&](int node) {
            return node < nu ? iu.points()[static_cast<std::size_t>(node)]
                             : iv.points()[static_cast<std::size_t>(node - nu)];
        };
        for (int node : order) pts.push_back(point_of(node));
        if (signed_area(pts) < 0.0) {
            std::reverse(order.begin(), order.end());
            std::reverse(pts.begin(), pts.end());
        }
        const auto first = std::min_element(pts.begin(), pts.end()) - pts.begin();
        std::rotate(order.begin(), order.begin() + first, order.end());
        SplitLoop& loop = loops[static_cast<std::size_t>(slot)];
        for (int node : order) {
            loop.points.push_back(point_of(node));
            if (node < nu) {
                loop.source.emplace_back(u, node);
                loop.origin.push_back(iu.origin[static_cast<std::size_t>(node)]);
            } else {
                loop.source.emplace_back(v, node - nu);
                loop.origin.push_back(iv.origin[static_cast<std::size_t>(node - nu)]);
            }
        }
    }
    return loops;
}

double tree_cost(const Isograph& g, const Tree& tree) {
    double c = 0.0;
    for (int v : tree.vertices) c += static_cast<double>(g.vertices[static_cast<std::size_t>(v)].weight());
    for (int e : tree.edges) c += g.edges[static_cast<std::size_t>(e)].weight;
    return c;
}

void recompute_costs(const Isograph& g, TreeCover& cover) {
    for (Tree& t : cover.trees) t.cost = tree_cost(g, t);
}

PisResult pis(const Isograph& g, const TreeCover& cover, int u, int v, const RefineOptions& options) {
    PisResult none;
    std::vector<int> slots;
    for (std::size_t i = 0; i < cover.trees.size(); ++i) {
        if (cover.trees[i].contains(u)) slots.push_back(static_cast<int>(i));
    }
    if (slots.empty()) return none;
    // every tree holding v must also hold u, or v's points would be orphaned
    for (const Tree& t : cover.trees) {
        if (t.contains(v) && !t.contains(u)) return none;
    }
    const auto uv = g.edge_between(u, v);
    if (!uv) return none;
    const std::vector<StitchingTuple> all = g.tuples_from(*uv, u);
    const std::size_t m = slots.size();
    if (all.size() < m) return none;

    std::vector<StitchingTuple> pool = all;
    const std::size_t s = per_slot_limit(options.budget, m);
    if (pool.size() > s) {
        pool.clear();
        for (std::size_t i = 0; i < s; ++i) pool.push_back(all[i * all.size() / s]);
    }

    const Splitter splitter(g, cover, u, v, slots);
    std::optional<Plan> best;
    std::vector<std::size_t> counter(m, 0);
    while (true) {
        std::vector<StitchingTuple> cuts;
        for (std::size_t j = 0; j < m; ++j) cuts.push_back(pool[counter[j]]);
        auto plan = splitter.evaluate(cuts);
        if (plan && (!best || plan->h < best->h)) best = std::move(plan);
        std::size_t j = 0;
        while (j < m && ++counter[j] == pool.size()) counter[j++] = 0;
        if (j == m) break;
    }
    if (!best) return none;
    return splitter.materialize(std::move(*best));
}

int air(const Isograph& g, TreeCover& cover, const std::set<int>& used) {
    if (cover.trees.empty()) return -1;
    std::size_t hi = 0;
    for (std::size_t i = 1; i < cover.trees.size(); ++i) {
        if (cover.trees[i].cost > cover.trees[hi].cost) hi = i;
    }
    const Tree& top = cover.trees[hi];
    std::map<int, int> degree;
    for (int e : top.edges) {
        ++degree[g.edges[static_cast<std::size_t>(e)].u];
        ++degree[g.edges[static_cast<std::size_t>(e)].v];
    }
    std::vector<int> leaves;
    for (int x : top.vertices) {
        if (degree[x] == 1 && !used.count(x) && !g.vertices[static_cast<std::size_t>(x)].from_split) leaves.push_back(x);
    }
    std::vector<std::size_t> order(cover.trees.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cover.trees[a].cost < cover.trees[b].cost; });
    for (std::size_t ti : order) {
        Tree& t = cover.trees[ti];
        for (int leaf : leaves) {
            if (t.contains(leaf)) continue;
            for (int x : t.vertices) {
                if (used.count(x)) continue;
                const auto e = g.edge_between(leaf, x);
                if (!e) continue;
                t.vertices.insert(std::upper_bound(t.vertices.begin(), t.vertices.end(), leaf), leaf);
                t.edges.insert(std::upper_bound(t.edges.begin(), t.edges.end(), *e), *e);
                t.cost = tree_cost(g, t);
                return leaf;
            }
        }
    }
    return -1;
}

RefineResult refine(const Isograph& g, const TreeCover& sol, const RefineOptions& options) {
    RefineResult current{g, sol, {}, 0};
    recompute_costs(current.graph, current.cover);
    RefineResult best = current;
    std::set<int> used;
    std::set<int> pending;  // M
    for (const Isovertex& x : g.vertices) {
        if (x.alive && occurrences(current.cover, x.id) >= 2) pending.insert(x.id);
    }
    auto call_air = [&](int iteration) {
        const double before = current.cover.makespan();
        const int added = air(current.graph, current.cover, used);
        if (added < 0) return;
        pending.insert(added);
        int robot = -1;
        for (const Tree& t : current.cover.trees) {
            if (t.contains(added)) robot = t.robot;
        }
        current.trace.push_back({iteration, true, added, robot, 0.0, before, current.cover.makespan()});
    };
    if (pending.empty()) call_air(0);
    while (!pending.empty()) {
        int u = *pending.begin();
        for (int x : pending) {
            if (occurrences(current.cover, x) > occurrences(current.cover, u)) u = x;
        }
        pending.erase(u);
        used.insert(u);
        std::vector<int> candidates;
        for (int v : current.graph.neighbors(u)) {
            if (!used.count(v)) candidates.push_back(v);
        }
        if (candidates.empty()) {
            // nothing to pair with: not an iteration
            if (pending.empty()) call_air(current.iterations);
            continue;
        }
        ++current.iterations;
        const double before = current.cover.makespan();
        std::optional<PisResult> chosen;
        int chosen_v = -1;
        for (int v : candidates) {
            PisResult r = pis(current.graph, current.cover, u, v, options);
            if (r.h < (chosen ? chosen->h : kInf)) {
                chosen = std::move(r);
                chosen_v = v;
            }
        }
        const int v = chosen_v >= 0 ? chosen_v : candidates.back();
        const double h = chosen ? chosen->h : kInf;
        if (chosen) {
            current.graph = std::move(chosen->graph);
            current.cover = std::move(chosen->cover);
            // split loops stand in for u and v
            used.insert(chosen->new_vertices.begin(), chosen->new_vertices.end());
        }
        used.insert(v);
        pending.erase(v);
        current.trace.push_back({current.iterations, false, u, v, h, before, current.cover.makespan()});
        if (current.cover.makespan() < best.cover.makespan()) {
            best.graph = current.graph;
            best.cover = current.cover;
        }
        if (pending.empty()) call_air(current.iterations);
    }
    best.trace = std::move(current.trace);
    best.iterations = current.iterations;
    return best;
}

std::string trace_to_jsonl(const std::vector<RefineTraceRecord>& trace) {
    std::ostringstream out;
    for (const RefineTraceRecord& r : trace) {
        nlohmann::json j;
        j["iteration"] = r.iteration;
        if (r.air) {
            j["air"] = r.popped;
            j["robot"] = r.neighbor;
        } else {
            j["popped"] = r.popped;
            j["neighbor"] = r.neighbor;
            j["h"] = std::isfinite(r.h) ? nlohmann::json(r.h) : nlohmann::json(nullptr);
        }
        j["makespan_before"] = r.makespan_before;
        j["makespan_after"] = r.makespan_after;
        out << j.dump() << '\n';
    }
    return out.str();
}

}  // namespace mcfs
