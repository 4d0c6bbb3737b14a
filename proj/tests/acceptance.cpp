// Acceptance run: one [PASS]/[FAIL] line per criterion; nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include "support.hpp"

using namespace mcfs;
using namespace testing;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PlanConfig config(double l, std::vector<Point2> robots, Variant v) {
    PlanConfig cfg;
    cfg.l = l;
    cfg.robots = std::move(robots);
    cfg.set_variant(v);
    cfg.bridge = true;
    cfg.solver.time_limit = 120;
    return cfg;
}

// ---------------------------------------------------------------- 1

bool solver_matches(const MmrtcInstance& inst, std::string& why) {
    SolverOptions opts;
    opts.time_limit = 120;
    const SolveResult r = solve(build_model(inst), inst, warm_start(inst), opts);
    const double oracle = exhaustive_tau(inst);
    if (r.status != SolveStatus::optimal || r.cover.makespan() != oracle || !cover_violation(inst, r.cover).empty()) {
        why = fmt("n=%g k=%g solver=%g oracle=%g", inst.vertex_count(), inst.k(), r.cover.makespan(), oracle);
        return false;
    }
    return true;
}

Outcome criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> wv(1, 20);
    int small = 0, large = 0, triple = 0;
    std::string why;
    // every connected labeled graph on up to 4 vertices, every root choice with k <= 2
    for (int n = 1; n <= 4; ++n) {
        std::vector<std::pair<int, int>> all;
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) all.emplace_back(a, b);
        }
        for (unsigned mask = 0; mask < (1u << all.size()); ++mask) {
            MmrtcInstance base;
            for (int v = 0; v < n; ++v) base.vertex_weight.push_back(wv(rng));
            for (std::size_t i = 0; i < all.size(); ++i) {
                if (mask >> i & 1u) base.edges.push_back({all[i].first, all[i].second, 0.0, false});
            }
            // connectivity by union of reachability
            std::vector<int> comp(static_cast<std::size_t>(n));
            for (int v = 0; v < n; ++v) comp[static_cast<std::size_t>(v)] = v;
            for (int it = 0; it < n; ++it) {
                for (const GraphEdge& e : base.edges) {
                    const int m = std::min(comp[static_cast<std::size_t>(e.u)], comp[static_cast<std::size_t>(e.v)]);
                    comp[static_cast<std::size_t>(e.u)] = comp[static_cast<std::size_t>(e.v)] = m;
                }
            }
            if (std::any_of(comp.begin(), comp.end(), [](int c) { return c != 0; })) continue;
            for (int r1 = 0; r1 < n; ++r1) {
                for (int r2 = -1; r2 < n; ++r2) {
                    if (r2 >= 0 && r2 < r1) continue;
                    MmrtcInstance inst = base;
                    inst.roots = r2 < 0 ? std::vector<int>{r1} : std::vector<int>{r1, r2};
                    if (!solver_matches(inst, why)) return {false, "sweep: " + why};
                    ++small;
                }
            }
        }
    }
    for (int i = 0; i < 200; ++i) {
        const MmrtcInstance inst = random_instance(rng, 5 + i % 3, 1 + i % 2, 0.3, i % 2 == 0);
        if (!solver_matches(inst, why)) return {false, "random: " + why};
        ++large;
    }
    for (int i = 0; i < 50; ++i) {
        const MmrtcInstance inst = random_instance(rng, 4 + i % 3, 3, 0.35, i % 2 == 0);
        if (!solver_matches(inst, why)) return {false, "k=3: " + why};
        ++triple;
    }
    const double secs = seconds_since(t0);
    return {secs < 300, fmt("%g swept + %g random (k<=2, |V|<=7), %g with k=3, all equal to the oracle; %.1fs",
                            small, large, triple, secs)};
}

// ---------------------------------------------------------------- 2

Outcome criterion_2() {
    std::mt19937_64 rng(99);
    int robots = 0;
    for (int trial = 0; trial < 20; ++trial) {
        Workspace ws = random_blob(rng, trial % 2 == 1);
        if (trial % 5 == 0) ws = suite_workspace("disc");
        const double l = ws.diameter() / std::uniform_real_distribution<double>(14, 30)(rng);
        std::vector<Point2> starts;
        const int k = 1 + trial % 3;
        for (int i = 0; i < k; ++i) {
            starts.push_back(ws.exterior[std::uniform_int_distribution<std::size_t>(0, ws.exterior.size() - 1)(rng)]);
        }
        const PlanResult r = plan(ws, config(l, starts, Variant::none));
        for (std::size_t i = 0; i < r.paths.size(); ++i) {
            const Tree& t = r.cover.trees[i];
            std::size_t sum = 0;
            for (int v : t.vertices) sum += static_cast<std::size_t>(r.graph.vertices[static_cast<std::size_t>(v)].weight());
            if (r.paths[i].points.size() != sum) {
                return {false, fmt("trial %g robot %g: |path| %g vs %g", trial, static_cast<double>(i),
                                   static_cast<double>(r.paths[i].points.size()), static_cast<double>(sum))};
            }
            ++robots;
        }
    }
    return {true, fmt("20 workspaces, %g robots, |path| = sum of tree isoline sizes", robots)};
}

// ---------------------------------------------------------------- 3, 7

struct SuiteRun {
    std::string name;
    Variant variant;
    double l;
    PlanResult result;
};

std::vector<SuiteRun> run_suite() {
    std::vector<SuiteRun> runs;
    for (const std::string& name : suite_names()) {
        const Workspace ws = suite_workspace(name);
        const double l = ws.diameter() / 40;
        const std::vector<Point2> two(2, ws.exterior[0]);
        for (Variant v : {Variant::none, Variant::ref, Variant::aug, Variant::both}) {
            runs.push_back({name, v, l, plan(ws, config(l, two, v))});
        }
    }
    return runs;
}

Outcome criterion_3(const std::vector<SuiteRun>& runs) {
    double worst_gap = 0, worst_close = 0;
    std::string gap_at;
    std::size_t paths = 0;
    for (const SuiteRun& run : runs) {
        const PlanResult& r = run.result;
        for (std::size_t i = 0; i < r.paths.size(); ++i) {
            const CoveragePath& p = r.paths[i];
            const std::string where = run.name + "/" + to_string(run.variant);
            if (sorted_sources(p) != tree_origin_points(r.graph, r.cover.trees[i])) {
                return {false, where + ": source multiset differs from the tree's isoline points"};
            }
            if (max_gap(p) / run.l > worst_gap) {
                worst_gap = max_gap(p) / run.l;
                gap_at = where;
            }
            worst_close = std::max(worst_close, dist(p.points.front(), p.points.back()) / run.l);
            ++paths;
        }
    }
    return {worst_gap <= 2.5 && worst_close <= 2.0,
            fmt("%g paths over 7 shapes x 4 variants; max gap %.3f l (<= 2.5, ", static_cast<double>(paths), worst_gap) +
                gap_at + fmt("), max entry-exit %.3f l (<= 2)", worst_close)};
}

Outcome criterion_7(const std::vector<SuiteRun>& runs) {
    double min_cov = 1, max_overlap_both = 0;
    std::string min_at, overlap_at;
    for (const SuiteRun& run : runs) {
        if (run.variant != Variant::none && run.variant != Variant::both) continue;
        const PlanReport& rep = run.result.report;
        if (rep.coverage_ratio < min_cov) {
            min_cov = rep.coverage_ratio;
            min_at = run.name + "/" + to_string(run.variant);
        }
        if (run.variant == Variant::both && rep.overlap_ratio > max_overlap_both) {
            max_overlap_both = rep.overlap_ratio;
            overlap_at = run.name;
        }
    }
    return {min_cov >= 0.85 && max_overlap_both <= 0.15,
            fmt("min coverage %.3f", min_cov) + " (" + min_at + ")" +
                fmt(", max overlap(both) %.3f", max_overlap_both) + " (" + overlap_at + ")"};
}

// ---------------------------------------------------------------- 4

Outcome criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    const Workspace ws = suite_workspace("disc_two_obstacles");
    const double l = ws.diameter() / 40;
    std::map<SelectorKind, double> mean;
    for (SelectorKind kind : {SelectorKind::random, SelectorKind::cfs, SelectorKind::mcs}) {
        double sum = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            PlanConfig cfg = config(l, {ws.exterior[0]}, Variant::none);
            cfg.selector = {kind, seed, false};
            sum += plan(ws, cfg).report.curvature;
        }
        mean[kind] = sum / 20;
    }
    const double rc = mean[SelectorKind::cfs] / mean[SelectorKind::random];
    const double rm = mean[SelectorKind::mcs] / mean[SelectorKind::random];
    const double secs = seconds_since(t0);
    return {rc <= 0.9 && rm <= 0.9 && secs < 120,
            fmt("mean curvature random %.3f; cfs/random %.3f, mcs/random %.3f (<= 0.90); %.1fs",
                mean[SelectorKind::random], rc, rm, secs)};
}

// ---------------------------------------------------------------- 5

Outcome criterion_5() {
    std::mt19937_64 rng(5);
    const std::vector<std::string> names = suite_names();
    int worst_slack = -1000;
    double worst_ratio = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Isograph g = trial % 3 == 2
                               ? [&] {
                                     const Workspace ws = random_blob(rng, true);
                                     const double l = ws.diameter() / 14;
                                     return build_isograph(extract_isolines(build_distance_field(ws, l / 4), l), l);
                                 }()
                               : suite_graph(names[static_cast<std::size_t>(trial) % names.size()], 14 + trial % 5);
        if (g.component_count() != 1) continue;
        std::vector<int> roots;
        const int k = 2 + trial % 3;
        for (int i = 0; i < k; ++i) {
            roots.push_back(std::uniform_int_distribution<int>(0, static_cast<int>(g.vertices.size()) - 1)(rng));
        }
        const TreeCover c = random_cover(rng, g, roots, trial % 5);
        if (!cover_violation(instance_from_isograph(g, roots), c).empty()) {
            return {false, fmt("trial %g: generator produced an infeasible cover", trial)};
        }
        const RefineResult r = refine(g, c);
        const double before = c.makespan();
        const double after = r.cover.makespan();
        if (after > before) return {false, fmt("trial %g: makespan %g -> %g", trial, before, after)};
        int splits = 0, max_iter = 0;
        for (const RefineTraceRecord& rec : r.trace) {
            if (!rec.air) ++splits;
            max_iter = std::max(max_iter, rec.iteration);
        }
        const int bound = static_cast<int>((g.vertex_count() + 1) / 2);
        if (splits > bound || max_iter > bound) {
            return {false, fmt("trial %g: %g iterations > bound %g", trial, std::max(splits, max_iter), bound)};
        }
        worst_slack = std::max(worst_slack, std::max(splits, max_iter) - bound);
        worst_ratio = std::max(worst_ratio, after / before);
    }
    return {true, fmt("100 random covers: never worse (max after/before %.3f), iterations <= ceil(|V|/2) "
                      "(closest: bound %+g)",
                      worst_ratio, worst_slack)};
}

// ---------------------------------------------------------------- 6

Outcome criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    const Workspace ws = suite_workspace("letter_p");
    const double l = ws.diameter() / 60;
    const std::vector<Point2> four(4, ws.exterior[0]);
    const PlanResult none = plan(ws, config(l, four, Variant::none));
    const PlanResult both = plan(ws, config(l, four, Variant::both));
    const double mr = both.report.makespan / none.report.makespan;
    const double orat = both.report.overlap_ratio / none.report.overlap_ratio;
    const double secs = seconds_since(t0);
    return {none.report.vertices <= 20 && mr <= 0.7 && orat <= 0.5 && secs < 600,
            fmt("|V| %g; makespan %.2f -> %.2f (x%.3f <= 0.7); ", none.report.vertices, none.report.makespan,
                both.report.makespan, mr) +
                fmt("overlap %.3f -> %.3f (x%.3f <= 0.5); %.1fs", none.report.overlap_ratio,
                    both.report.overlap_ratio, orat, secs)};
}

// ---------------------------------------------------------------- 8

int orient(Point2 a, Point2 b, Point2 c) {
    const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    return (v > 0) - (v < 0);
}

bool on_box(Point2 a, Point2 b, Point2 c) {
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
           c.y <= std::max(a.y, b.y);
}

bool crosses(Point2 a, Point2 b, Point2 c, Point2 d) {
    const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    return (o1 == 0 && on_box(a, b, c)) || (o2 == 0 && on_box(a, b, d)) || (o3 == 0 && on_box(c, d, a)) ||
           (o4 == 0 && on_box(c, d, b));
}

bool crosses_loop(Point2 a, Point2 b, const std::vector<Point2>& loop) {
    for (std::size_t i = 0; i < loop.size(); ++i) {
        if (crosses(a, b, loop[i], loop[(i + 1) % loop.size()])) return true;
    }
    return false;
}

// Expected augmented edges: lexicographically smallest shortest path by
// enumeration, tuple chains by depth-first search, segment checks from scratch.
std::map<std::pair<int, int>, std::set<std::pair<int, int>>> augment_oracle(const Isograph& g, const Workspace& ws,
                                                                             int delta) {
    const int n = static_cast<int>(g.vertices.size());
    std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
    for (const IsoEdge& e : g.edges) {
        if (e.kind != EdgeKind::original) continue;
        adj[static_cast<std::size_t>(e.u)].insert(e.v);
        adj[static_cast<std::size_t>(e.v)].insert(e.u);
    }
    auto tuples = [&](int a, int b) {
        std::vector<std::pair<int, int>> out;
        for (const IsoEdge& e : g.edges) {
            if (e.kind != EdgeKind::original) continue;
            if (e.u == a && e.v == b) {
                for (const auto& t : e.tuples) out.emplace_back(t.p_index, t.q_index);
            } else if (e.u == b && e.v == a) {
                for (const auto& t : e.tuples) out.emplace_back(t.q_index, t.p_index);
            }
        }
        return out;
    };
    std::map<std::pair<int, int>, std::set<std::pair<int, int>>> expected;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            // all simple paths a -> b, keep the shortest, lexicographically first
            std::vector<std::vector<int>> found;
            std::vector<int> cur{a};
            std::function<void()> walk = [&] {
                if (cur.back() == b) {
                    found.push_back(cur);
                    return;
                }
                if (static_cast<int>(cur.size()) > delta) return;
                for (int y : adj[static_cast<std::size_t>(cur.back())]) {
                    if (std::find(cur.begin(), cur.end(), y) != cur.end()) continue;
                    cur.push_back(y);
                    walk();
                    cur.pop_back();
                }
            };
            walk();
            if (found.empty()) continue;
            std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
                return x.size() != y.size() ? x.size() < y.size() : x < y;
            });
            const std::vector<int> path = found.front();
            const int hops = static_cast<int>(path.size()) - 1;
            if (hops < 2 || hops > delta) continue;
            std::set<std::pair<int, int>> chains;
            std::function<void(std::size_t, int, int)> chain = [&](std::size_t s, int p1, int at) {
                if (s + 1 == path.size()) {
                    chains.emplace(p1, at);
                    return;
                }
                for (auto [p, q] : tuples(path[s], path[s + 1])) {
                    if (s == 0 || p == at) chain(s + 1, s == 0 ? p : p1, q);
                }
            };
            chain(0, -1, -1);
            std::set<std::pair<int, int>> ok;
            for (auto [p1, pk] : chains) {
                const Point2 x = g.vertices[static_cast<std::size_t>(a)].points()[static_cast<std::size_t>(p1)];
                const Point2 y = g.vertices[static_cast<std::size_t>(b)].points()[static_cast<std::size_t>(pk)];
                bool blocked = false;
                for (const Ring* ring : ws.rings()) blocked = blocked || crosses_loop(x, y, *ring);
                int crossed = 0;
                for (const Isovertex& z : g.vertices) {
                    if (z.id != a && z.id != b && crosses_loop(x, y, z.points())) ++crossed;
                }
                if (!blocked && crossed <= hops - 1) ok.emplace(p1, pk);
            }
            if (!ok.empty()) expected[{a, b}] = ok;
        }
    }
    return expected;
}

Outcome criterion_8() {
    const Workspace ws = suite_workspace("disc");
    int checked_edges = 0;
    for (double l : {0.18, 0.12}) {
        const Isograph g = build_isograph(extract_isolines(build_distance_field(ws, l / 4), l), l);
        std::size_t prev_edges = g.edge_count();
        for (int delta : {2, 3, 4}) {
            const Isograph aug = augment(g, delta);
            std::map<std::pair<int, int>, std::set<std::pair<int, int>>> got;
            for (const IsoEdge& e : aug.edges) {
                if (e.kind != EdgeKind::augmented) continue;
                auto& s = got[{e.u, e.v}];
                for (const auto& t : e.tuples) s.emplace(t.p_index, t.q_index);
            }
            if (got != augment_oracle(g, ws, delta)) {
                return {false, fmt("l=%g delta=%g: augmented edges differ from the chain oracle", l, delta)};
            }
            for (const IsoEdge& e : g.edges) {
                if (!aug.edge_between(e.u, e.v)) return {false, fmt("l=%g delta=%g: original edge lost", l, delta)};
            }
            if (aug.edge_count() < prev_edges) return {false, fmt("l=%g delta=%g: not monotone in delta", l, delta)};
            prev_edges = aug.edge_count();
            if (isograph_to_json_text(augment(aug, delta)) != isograph_to_json_text(aug)) {
                return {false, fmt("l=%g delta=%g: not idempotent", l, delta)};
            }
            checked_edges += static_cast<int>(got.size());
        }
    }
    return {true, fmt("disc at l=0.18 and 0.12, delta 2..4: %g augmented edges match the oracle; monotone, "
                      "idempotent",
                      checked_edges)};
}

// ---------------------------------------------------------------- 9

Outcome criterion_9() {
    std::mt19937_64 rng(9);
    const std::vector<std::string> names = suite_names();
    int done = 0, attempts = 0;
    while (done < 50 && attempts < 5000) {
        ++attempts;
        const Isograph g = suite_graph(names[static_cast<std::size_t>(attempts) % names.size()], 16 + attempts % 9);
        std::vector<const IsoEdge*> edges;
        for (const IsoEdge& e : g.edges) {
            if (e.tuples.size() >= 2) edges.push_back(&e);
        }
        if (edges.empty()) continue;
        const IsoEdge& e = *edges[std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng)];
        std::vector<StitchingTuple> pick = g.tuples_from(e.id, e.u);
        std::shuffle(pick.begin(), pick.end(), rng);
        pick.resize(std::min<std::size_t>(pick.size(), 2 + attempts % 3));
        const auto loops = split_loops(g, e.u, e.v, pick);
        if (!loops) continue;
        std::set<std::pair<int, int>> seen;
        std::size_t total = 0;
        for (const SplitLoop& loop : *loops) {
            total += loop.points.size();
            for (const auto& s : loop.source) {
                if (!seen.insert(s).second) return {false, "split loops share a point"};
            }
        }
        const std::size_t expect = static_cast<std::size_t>(g.vertices[static_cast<std::size_t>(e.u)].weight() +
                                                            g.vertices[static_cast<std::size_t>(e.v)].weight());
        if (total != expect || seen.size() != expect) {
            return {false, fmt("split sizes %g vs %g", static_cast<double>(total), static_cast<double>(expect))};
        }
        ++done;
    }
    return {done == 50, fmt("%g random splits (%g attempts): sizes sum to |I_u|+|I_v|, loops disjoint", done, attempts)};
}

// ---------------------------------------------------------------- 10

double ring_distance(Point2 p, const Ring& r) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.size(); ++i) {
        const Point2 a = r[i], b = r[(i + 1) % r.size()];
        const double dx = b.x - a.x, dy = b.y - a.y;
        const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
        best = std::min(best, std::hypot(p.x - a.x - t * dx, p.y - a.y - t * dy));
    }
    return best;
}

Outcome criterion_10() {
    double worst = 0;
    std::string at;
    long points = 0;
    for (const std::string& name : suite_names()) {
        const Workspace ws = suite_workspace(name);
        const double l = ws.diameter() / 40;
        for (const Isoline& iso : extract_isolines(build_distance_field(ws, l / 4), l)) {
            for (const Point2& p : iso.points) {
                double d = std::numeric_limits<double>::infinity();
                for (const Ring* ring : ws.rings()) d = std::min(d, ring_distance(p, *ring));
                const double err = std::abs(d - iso.layer * l) / l;
                if (err > worst) {
                    worst = err;
                    at = name;
                }
                ++points;
            }
        }
    }
    double radius_err = 0;
    const Workspace disc = suite_workspace("disc");
    for (double l : {0.3, 0.2, 0.1, disc.diameter() / 40}) {
        for (const Isoline& iso : extract_isolines(build_distance_field(disc, l / 4), l)) {
            for (const Point2& p : iso.points) {
                radius_err = std::max(radius_err, std::abs(std::hypot(p.x, p.y) - (1.0 - iso.layer * l)));
            }
        }
    }
    return {worst <= 0.25 && radius_err <= 0.05,
            fmt("%g isoline points, max |d - L l| = %.4f l (<= 0.25, ", static_cast<double>(points), worst) + at +
                fmt("); disc radius error %.4f (<= 0.05)", radius_err)};
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<SuiteRun> runs = run_suite();
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"MMRTC exactness", criterion_1},
        {"reduction identity", criterion_2},
        {"path conservation and continuity", [&] { return criterion_3(runs); }},
        {"selector curvature ordering", criterion_4},
        {"refinement monotonicity and termination", criterion_5},
        {"shared-root improvement", criterion_6},
        {"coverage floor", [&] { return criterion_7(runs); }},
        {"augmentation soundness", criterion_8},
        {"PIS conservation", criterion_9},
        {"geometry fidelity", criterion_10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << i + 1 << ' ' << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << '/' << criteria.size() << " criteria passed in "
              << fmt("%.1fs", seconds_since(t0)) << std::endl;
    return failed == 0 ? 0 : 1;
}
