#include "mcfs/mmrtc.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mcfs {

namespace {

constexpr double kEps = 1e-9;

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Union-find for Kruskal.
struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        return true;
    }
};

/// Kruskal over `candidates` (edge ids) by (weight, min endpoint, max endpoint).
std::vector<int> kruskal(const MmrtcInstance& inst, std::vector<int> candidates) {
    auto key = [&](int e) {
        const GraphEdge& ge = inst.edges[static_cast<std::size_t>(e)];
        return std::make_tuple(ge.weight, std::min(ge.u, ge.v), std::max(ge.u, ge.v), e);
    };
    std::sort(candidates.begin(), candidates.end(), [&](int a, int b) { return key(a) < key(b); });
    Dsu dsu(inst.vertex_count());
    std::vector<int> chosen;
    for (int e : candidates) {
        const GraphEdge& ge = inst.edges[static_cast<std::size_t>(e)];
        if (dsu.unite(ge.u, ge.v)) chosen.push_back(e);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

std::vector<std::vector<std::pair<int, int>>> adjacency(const MmrtcInstance& inst) {
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(inst.vertex_count()));
    for (int e = 0; e < inst.edge_count(); ++e) {
        if (!inst.has_edge(e)) continue;
        const GraphEdge& ge = inst.edges[static_cast<std::size_t>(e)];
        adj[static_cast<std::size_t>(ge.u)].emplace_back(ge.v, e);
        adj[static_cast<std::size_t>(ge.v)].emplace_back(ge.u, e);
    }
    for (auto& list : adj) std::sort(list.begin(), list.end());
    return adj;
}

}  // namespace

bool MmrtcInstance::all_present() const {
    return std::all_of(vertex_present.begin(), vertex_present.end(), [](std::uint8_t f) { return f != 0; }) &&
           std::all_of(edge_present.begin(), edge_present.end(), [](std::uint8_t f) { return f != 0; });
}

void MmrtcInstance::validate() const {
    if (roots.empty()) throw InvalidInput("at least one robot is required", "mmrtc");
    for (int r : roots) {
        if (r < 0 || r >= vertex_count() || !has_vertex(r)) {
            throw InvalidInput("root " + std::to_string(r) + " is not a vertex", "mmrtc");
        }
    }
    for (double w : vertex_weight) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("vertex weights must be finite and >= 0", "mmrtc");
    }
    for (int e = 0; e < edge_count(); ++e) {
        if (!has_edge(e)) continue;
        const GraphEdge& ge = edges[static_cast<std::size_t>(e)];
        if (ge.u < 0 || ge.v < 0 || ge.u >= vertex_count() || ge.v >= vertex_count() || ge.u == ge.v) {
            throw InvalidInput("edge " + std::to_string(e) + " has invalid endpoints", "mmrtc");
        }
        if (!has_vertex(ge.u) || !has_vertex(ge.v)) {
            throw InvalidInput("edge " + std::to_string(e) + " touches an absent vertex", "mmrtc");
        }
        if (!(ge.weight >= 0.0) || !std::isfinite(ge.weight)) {
            throw InvalidInput("edge weights must be finite and >= 0", "mmrtc");
        }
    }
}

MmrtcInstance instance_from_isograph(const Isograph& g, std::vector<int> roots) {
    MmrtcInstance inst;
    for (const Isovertex& v : g.vertices) {
        inst.vertex_weight.push_back(static_cast<double>(v.weight()));
        inst.vertex_present.push_back(v.alive ? 1 : 0);
    }
    for (const IsoEdge& e : g.edges) {
        inst.edges.push_back({e.u, e.v, e.weight, e.kind == EdgeKind::augmented});
        inst.edge_present.push_back(e.alive ? 1 : 0);
    }
    inst.roots = std::move(roots);
    inst.validate();
    return inst;
}

bool Tree::contains(int v) const { return std::binary_search(vertices.begin(), vertices.end(), v); }

double TreeCover::makespan() const {
    double best = 0.0;
    for (const Tree& t : trees) best = std::max(best, t.cost);
    return best;
}

double tree_cost(const MmrtcInstance& inst, const Tree& tree) {
    double c = 0.0;
    for (int v : tree.vertices) c += inst.vertex_weight[static_cast<std::size_t>(v)];
    for (int e : tree.edges) c += inst.edges[static_cast<std::size_t>(e)].weight;
    return c;
}

void recompute_costs(const MmrtcInstance& inst, TreeCover& cover) {
    for (Tree& t : cover.trees) t.cost = tree_cost(inst, t);
}

std::string cover_violation(const MmrtcInstance& inst, const TreeCover& cover) {
    if (static_cast<int>(cover.trees.size()) != inst.k()) return "expected one tree per robot";
    std::vector<std::uint8_t> covered(static_cast<std::size_t>(inst.vertex_count()), 0);
    for (std::size_t i = 0; i < cover.trees.size(); ++i) {
        const Tree& t = cover.trees[i];
        const std::string name = "tree " + std::to_string(i);
        if (t.root != inst.roots[i]) return name + " has the wrong root";
        if (!std::is_sorted(t.vertices.begin(), t.vertices.end()) ||
            std::adjacent_find(t.vertices.begin(), t.vertices.end()) != t.vertices.end()) {
            return name + " vertex list is not strictly ascending";
        }
        if (!t.contains(t.root)) return name + " misses its root";
        for (int v : t.vertices) {
            if (v < 0 || v >= inst.vertex_count() || !inst.has_vertex(v)) return name + " uses an absent vertex";
            covered[static_cast<std::size_t>(v)] = 1;
        }
        if (t.edges.size() + 1 != t.vertices.size()) return name + " is not a tree (|E| != |V|-1)";
        std::set<int> seen_edges;
        Dsu dsu(inst.vertex_count());
        for (int e : t.edges) {
            if (e < 0 || e >= inst.edge_count() || !inst.has_edge(e)) return name + " uses an absent edge";
            if (!seen_edges.insert(e).second) return name + " repeats an edge";
            const GraphEdge& ge = inst.edges[static_cast<std::size_t>(e)];
            if (!t.contains(ge.u) || !t.contains(ge.v)) return name + " has an edge leaving its vertex set";
            if (!dsu.unite(ge.u, ge.v)) return name + " contains a cycle";
        }
    }
    for (int v = 0; v < inst.vertex_count(); ++v) {
        if (inst.has_vertex(v) && !covered[static_cast<std::size_t>(v)]) {
            return "vertex " + std::to_string(v) + " is not covered";
        }
    }
    return {};
}

void validate_cover(const MmrtcInstance& inst, const TreeCover& cover) {
    const std::string why = cover_violation(inst, cover);
    if (!why.empty()) throw Error("integrity: " + why, "mmrtc");
}

// ---------------------------------------------------------------------------
// MIP model

std::size_t MipModel::count_group(std::string_view group) const {
    return static_cast<std::size_t>(
        std::count_if(constraints.begin(), constraints.end(), [&](const Constraint& c) { return c.group == group; }));
}

MipModel build_model(const MmrtcInstance& inst) {
    inst.validate();
    if (!inst.all_present()) throw InvalidInput("model requires a graph without removed vertices or edges", "mmrtc");
    MipModel m;
    m.k = inst.k();
    m.n_vertices = inst.vertex_count();
    m.n_edges = inst.edge_count();
    const int nv = m.n_vertices;
    const int ne = m.n_edges;
    for (int i = 0; i < m.k; ++i) {
        const std::string ri = std::to_string(i);
        for (int e = 0; e < ne; ++e) m.variables.push_back({"x_" + ri + "_" + std::to_string(e), VarType::binary, 0, 1});
        for (int v = 0; v < nv; ++v) m.variables.push_back({"y_" + ri + "_" + std::to_string(v), VarType::binary, 0, 1});
        for (int e = 0; e < ne; ++e) {
            m.variables.push_back({"fu_" + ri + "_" + std::to_string(e), VarType::continuous, 0, 1});
        }
        for (int e = 0; e < ne; ++e) {
            m.variables.push_back({"fv_" + ri + "_" + std::to_string(e), VarType::continuous, 0, 1});
        }
    }
    m.variables.push_back({"tau", VarType::continuous, 0, std::numeric_limits<double>::infinity()});

    const double cap = 1.0 - 1.0 / static_cast<double>(nv);
    for (int i = 0; i < m.k; ++i) {
        const std::string ri = std::to_string(i);
        Constraint mk{"makespan_" + ri, "makespan", {}, Sense::le, 0.0};
        for (int v = 0; v < nv; ++v) mk.terms.push_back({m.y(i, v), inst.vertex_weight[static_cast<std::size_t>(v)]});
        for (int e = 0; e < ne; ++e) {
            const double w = inst.edges[static_cast<std::size_t>(e)].weight;
            if (w != 0.0) mk.terms.push_back({m.x(i, e), w});
        }
        mk.terms.push_back({m.tau(), -1.0});
        m.constraints.push_back(std::move(mk));
    }
    for (int v = 0; v < nv; ++v) {
        Constraint c{"cover_" + std::to_string(v), "cover", {}, Sense::ge, 1.0};
        for (int i = 0; i < m.k; ++i) c.terms.push_back({m.y(i, v), 1.0});
        m.constraints.push_back(std::move(c));
    }
    for (int i = 0; i < m.k; ++i) {
        m.constraints.push_back(
            {"root_" + std::to_string(i), "root", {{m.y(i, inst.roots[static_cast<std::size_t>(i)]), 1.0}}, Sense::eq, 1.0});
    }
    for (int i = 0; i < m.k; ++i) {
        Constraint c{"tree_" + std::to_string(i), "tree", {}, Sense::eq, 1.0};
        for (int v = 0; v < nv; ++v) c.terms.push_back({m.y(i, v), 1.0});
        for (int e = 0; e < ne; ++e) c.terms.push_back({m.x(i, e), -1.0});
        m.constraints.push_back(std::move(c));
    }
    for (int i = 0; i < m.k; ++i) {
        const std::string ri = std::to_string(i);
        for (int e = 0; e < ne; ++e) {
            m.constraints.push_back({"acyc_" + ri + "_" + std::to_string(e),
                                     "acyc",
                                     {{m.fu(i, e), 1.0}, {m.fv(i, e), 1.0}, {m.x(i, e), -1.0}},
                                     Sense::eq,
                                     0.0});
        }
        for (int v = 0; v < nv; ++v) {
            Constraint c{"flow_" + ri + "_" + std::to_string(v), "flow", {}, Sense::le, cap};
            for (int e = 0; e < ne; ++e) {
                const GraphEdge& ge = inst.edges[static_cast<std::size_t>(e)];
                if (ge.u == v) c.terms.push_back({m.fu(i, e), 1.0});
                if (ge.v == v) c.terms.push_back({m.fv(i, e), 1.0});
            }
            m.constraints.push_back(std::move(c));
        }
        for (int e = 0; e < ne; ++e) {
            const GraphEdge& ge = inst.edges[static_cast<std::size_t>(e)];
            const std::string re = std::to_string(e);
            m.constraints.push_back(
                {"linku_" + ri + "_" + re, "link", {{m.x(i, e), 1.0}, {m.y(i, ge.u), -1.0}}, Sense::le, 0.0});
            m.constraints.push_back(
                {"linkv_" + ri + "_" + re, "link", {{m.x(i, e), 1.0}, {m.y(i, ge.v), -1.0}}, Sense::le, 0.0});
        }
    }
    return m;
}

std::string write_lp(const MipModel& model) {
    std::ostringstream out;
    out << "\\ min-max rooted tree cover: " << model.k << " robots, " << model.n_vertices << " vertices, "
        << model.n_edges << " edges\n";
    out << "Minimize\n obj: tau\nSubject To\n";
    for (const Constraint& c : model.constraints) {
        out << ' ' << c.name << ':';
        if (c.terms.empty()) out << " 0 " << model.variables[static_cast<std::size_t>(model.tau())].name;
        for (const LinearTerm& t : c.terms) {
            out << (t.coef < 0 ? " - " : " + ");
            const double a = std::abs(t.coef);
            if (a != 1.0) out << fmt_num(a) << ' ';
            out << model.variables[static_cast<std::size_t>(t.var)].name;
        }
        switch (c.sense) {
            case Sense::le: out << " <= "; break;
            case Sense::ge: out << " >= "; break;
            case Sense::eq: out << " = "; break;
        }
        out << fmt_num(c.rhs) << '\n';
    }
    out << "Bounds\n";
    for (const Variable& v : model.variables) {
        if (v.type != VarType::continuous) continue;
        if (std::isinf(v.ub)) {
            out << ' ' << v.name << " >= " << fmt_num(v.lb) << '\n';
        } else {
            out << ' ' << fmt_num(v.lb) << " <= " << v.name << " <= " << fmt_num(v.ub) << '\n';
        }
    }
    out << "Binaries\n";
    for (const Variable& v : model.variables) {
        if (v.type == VarType::binary) out << ' ' << v.name << '\n';
    }
    out << "End\n";
    return out.str();
}

std::map<std::string, double> read_solution(const std::string& text) {
    std::map<std::string, double> values;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#' || line[start] == '\\') continue;
        std::istringstream fields(line.substr(start));
        std::string name;
        std::string value;
        if (!(fields >> name >> value)) continue;
        if (value == "=" && !(fields >> value)) continue;
        try {
            std::size_t used = 0;
            const double d = std::stod(value, &used);
            if (used == value.size()) values[name] = d;
        } catch (const std::exception&) {
            // header or status line
        }
    }
    return values;
}

Assignment assignment_from_values(const MipModel& model, const std::map<std::string, double>& values) {
    Assignment a;
    a.x.assign(static_cast<std::size_t>(model.k), std::vector<std::uint8_t>(static_cast<std::size_t>(model.n_edges), 0));
    a.y.assign(static_cast<std::size_t>(model.k),
               std::vector<std::uint8_t>(static_cast<std::size_t>(model.n_vertices), 0));
    auto get = [&](int var) {
        const auto it = values.find(model.variables[static_cast<std::size_t>(var)].name);
        return it == values.end() ? 0.0 : it->second;
    };
    for (int i = 0; i < model.k; ++i) {
        for (int e = 0; e < model.n_edges; ++e) a.x[i][e] = get(model.x(i, e)) > 0.5 ? 1 : 0;
        for (int v = 0; v < model.n_vertices; ++v) a.y[i][v] = get(model.y(i, v)) > 0.5 ? 1 : 0;
    }
    return a;
}

Assignment encode(const MmrtcInstance& inst, const TreeCover& cover) {
    Assignment a;
    a.x.assign(cover.trees.size(), std::vector<std::uint8_t>(static_cast<std::size_t>(inst.edge_count()), 0));
    a.y.assign(cover.trees.size(), std::vector<std::uint8_t>(static_cast<std::size_t>(inst.vertex_count()), 0));
    for (std::size_t i = 0; i < cover.trees.size(); ++i) {
        for (int e : cover.trees[i].edges) a.x[i][static_cast<std::size_t>(e)] = 1;
        for (int v : cover.trees[i].vertices) a.y[i][static_cast<std::size_t>(v)] = 1;
    }
    return a;
}

namespace {

/// Edmonds-Karp on a dense capacity matrix; small graphs only.
double max_flow(std::vector<std::vector<double>> cap, int s, int t) {
    const int n = static_cast<int>(cap.size());
    double total = 0.0;
    while (true) {
        std::vector<int> parent(static_cast<std::size_t>(n), -1);
        parent[static_cast<std::size_t>(s)] = s;
        std::deque<int> queue{s};
        while (!queue.empty() && parent[static_cast<std::size_t>(t)] < 0) {
            const int x = queue.front();
            queue.pop_front();
            for (int y = 0; y < n; ++y) {
                if (parent[static_cast<std::size_t>(y)] < 0 && cap[x][y] > kEps) {
                    parent[static_cast<std::size_t>(y)] = x;
                    queue.push_back(y);
                }
            }
        }
        if (parent[static_cast<std::size_t>(t)] < 0) break;
        double push = std::numeric_limits<double>::infinity();
        for (int y = t; y != s; y = parent[static_cast<std::size_t>(y)]) {
            push = std::min(push, cap[parent[static_cast<std::size_t>(y)]][y]);
        }
        for (int y = t; y != s; y = parent[static_cast<std::size_t>(y)]) {
            cap[parent[static_cast<std::size_t>(y)]][y] -= push;
            cap[y][parent[static_cast<std::size_t>(y)]] += push;
        }
        total += push;
    }
    return total;
}

}  // namespace

bool assignment_feasible(const MmrtcInstance& inst, const Assignment& a) {
    const int k = inst.k();
    const int nv = inst.vertex_count();
    const int ne = inst.edge_count();
    if (static_cast<int>(a.x.size()) != k || static_cast<int>(a.y.size()) != k) return false;
    for (int v = 0; v < nv; ++v) {
        int count = 0;
        for (int i = 0; i < k; ++i) count += a.y[i][v];
        if (count < 1) return false;
    }
    const double cap = 1.0 - 1.0 / static_cast<double>(nv);
    for (int i = 0; i < k; ++i) {
        if (!a.y[i][static_cast<std::size_t>(inst.roots[static_cast<std::size_t>(i)])]) return false;
        int ny = 0;
        int nx = 0;
        for (int v = 0; v < nv; ++v) ny += a.y[i][v];
        for (int e = 0; e < ne; ++e) {
            if (!a.x[i][e]) continue;
            ++nx;
            const GraphEdge& ge = inst.edges[static_cast<std::size_t>(e)];
            if (!a.y[i][static_cast<std::size_t>(ge.u)] || !a.y[i][static_cast<std::size_t>(ge.v)]) return false;
        }
        if (ny != 1 + nx) return false;
        // flows: source -> edge (x_e), edge -> endpoints, vertex -> sink (cap)
        const int source = 0;
        const int sink = 1 + ne + nv;
        std::vector<std::vector<double>> c(static_cast<std::size_t>(sink + 1),
                                           std::vector<double>(static_cast<std::size_t>(sink + 1), 0.0));
        for (int e = 0; e < ne; ++e) {
            if (!a.x[i][e]) continue;
            const GraphEdge& ge = inst.edges[static_cast<std::size_t>(e)];
            c[source][1 + e] = 1.0;
            c[1 + e][1 + ne + ge.u] = 1.0;
            c[1 + e][1 + ne + ge.v] = 1.0;
        }
        for (int v = 0; v < nv; ++v) c[1 + ne + v][sink] = cap;
        if (max_flow(std::move(c), source, sink) < nx - 1e-7) return false;
    }
    return true;
}

TreeCover decode(const Assignment& a, const MmrtcInstance& inst) {
    TreeCover cover;
    if (static_cast<int>(a.x.size()) != inst.k() || static_cast<int>(a.y.size()) != inst.k()) {
        throw Error("integrity: assignment has the wrong number of robots", "mmrtc");
    }
    for (int i = 0; i < inst.k(); ++i) {
        Tree t;
        t.robot = i;
        t.root = inst.roots[static_cast<std::size_t>(i)];
        for (int v = 0; v < inst.vertex_count(); ++v) {
            if (a.y[i][v]) t.vertices.push_back(v);
        }
        for (int e = 0; e < inst.edge_count(); ++e) {
            if (a.x[i][e]) t.edges.push_back(e);
        }
        t.cost = tree_cost(inst, t);
        cover.trees.push_back(std::move(t));
    }
    validate_cover(inst, cover);
    return cover;
}

TreeCover warm_start(const MmrtcInstance& inst) {
    inst.validate();
    const int n = inst.vertex_count();
    std::vector<int> candidates;
    for (int e = 0; e < inst.edge_count(); ++e) {
        if (inst.has_edge(e) && !inst.edges[static_cast<std::size_t>(e)].augmented) candidates.push_back(e);
    }
    const std::vector<int> mst = kruskal(inst, candidates);
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));
    for (int e : mst) {
        const GraphEdge& ge = inst.edges[static_cast<std::size_t>(e)];
        adj[static_cast<std::size_t>(ge.u)].emplace_back(ge.v, e);
        adj[static_cast<std::size_t>(ge.v)].emplace_back(ge.u, e);
    }
    for (auto& list : adj) std::sort(list.begin(), list.end());

    const int k = inst.k();
    std::vector<std::vector<int>> hops(static_cast<std::size_t>(k));
    std::vector<std::vector<std::pair<int, int>>> parent(static_cast<std::size_t>(k));  // (vertex, edge)
    for (int i = 0; i < k; ++i) {
        auto& d = hops[static_cast<std::size_t>(i)];
        auto& par = parent[static_cast<std::size_t>(i)];
        d.assign(static_cast<std::size_t>(n), -1);
        par.assign(static_cast<std::size_t>(n), {-1, -1});
        const int r = inst.roots[static_cast<std::size_t>(i)];
        d[static_cast<std::size_t>(r)] = 0;
        std::deque<int> queue{r};
        while (!queue.empty()) {
            const int x = queue.front();
            queue.pop_front();
            for (auto [y, e] : adj[static_cast<std::size_t>(x)]) {
                if (d[static_cast<std::size_t>(y)] < 0) {
                    d[static_cast<std::size_t>(y)] = d[static_cast<std::size_t>(x)] + 1;
                    par[static_cast<std::size_t>(y)] = {x, e};
                    queue.push_back(y);
                }
            }
        }
    }
    std::vector<std::set<int>> verts(static_cast<std::size_t>(k));
    std::vector<std::set<int>> edges(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) verts[static_cast<std::size_t>(i)].insert(inst.roots[static_cast<std::size_t>(i)]);
    for (int v = 0; v < n; ++v) {
        if (!inst.has_vertex(v)) continue;
        int best = -1;
        for (int i = 0; i < k; ++i) {
            const int d = hops[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)];
            if (d >= 0 && (best < 0 || d < hops[static_cast<std::size_t>(best)][static_cast<std::size_t>(v)])) best = i;
        }
        if (best < 0) throw Infeasible("vertex " + std::to_string(v) + " is unreachable from every root", "mmrtc");
        for (int x = v; x != inst.roots[static_cast<std::size_t>(best)];) {
            verts[static_cast<std::size_t>(best)].insert(x);
            const auto [px, pe] = parent[static_cast<std::size_t>(best)][static_cast<std::size_t>(x)];
            edges[static_cast<std::size_t>(best)].insert(pe);
            x = px;
        }
    }
    TreeCover cover;
    for (int i = 0; i < k; ++i) {
        Tree t;
        t.robot = i;
        t.root = inst.roots[static_cast<std::size_t>(i)];
        t.vertices.assign(verts[static_cast<std::size_t>(i)].begin(), verts[static_cast<std::size_t>(i)].end());
        t.edges.assign(edges[static_cast<std::size_t>(i)].begin(), edges[static_cast<std::size_t>(i)].end());
        t.cost = tree_cost(inst, t);
        cover.trees.push_back(std::move(t));
    }
    validate_cover(inst, cover);
    return cover;
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::feasible: return "feasible";
        case SolveStatus::infeasible: return "infeasible";
    }
    return "feasible";
}

namespace {

/// Depth-first branch and bound over robot memberships of each vertex. For
/// fixed memberships the cheapest trees are minimum spanning trees of the
/// induced subgraphs, so edges are never branched on.
class BranchAndBound {
public:
    BranchAndBound(const MmrtcInstance& inst, double time_limit)
        : inst_(inst), n_(inst.vertex_count()), k_(inst.k()), adj_(adjacency(inst)) {
        deadline_ = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(time_limit));
        for (int v = 0; v < n_; ++v) {
            if (inst.has_vertex(v)) order_.push_back(v);
        }
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
            return inst.vertex_weight[static_cast<std::size_t>(a)] > inst.vertex_weight[static_cast<std::size_t>(b)];
        });
        member_.assign(static_cast<std::size_t>(k_), std::vector<std::uint8_t>(static_cast<std::size_t>(n_), kUnknown));
        load_.assign(static_cast<std::size_t>(k_), 0.0);
        forced_.assign(static_cast<std::size_t>(n_), 0);
        for (int i = 0; i < k_; ++i) {
            const int r = inst.roots[static_cast<std::size_t>(i)];
            if (member_[i][r] != kIn) {
                member_[i][r] = kIn;
                load_[static_cast<std::size_t>(i)] += inst.vertex_weight[static_cast<std::size_t>(r)];
            }
            forced_[static_cast<std::size_t>(r)] |= std::uint32_t{1} << i;
        }
        for (int v : order_) {
            if (!forced_[static_cast<std::size_t>(v)]) remaining_ += inst.vertex_weight[static_cast<std::size_t>(v)];
        }
    }

    void run(SolveResult& result) {
        best_ = result.cover.makespan();
        best_cover_ = result.cover;
        history_ = &result.incumbent_history;
        root_bound_ = bound(0);
        complete_ = true;
        search(0);
        result.cover = best_cover_;
        result.nodes = nodes_;
        result.status = complete_ ? SolveStatus::optimal : SolveStatus::feasible;
        result.lower_bound = complete_ ? best_ : std::min(root_bound_, best_);
    }

private:
    static constexpr std::uint8_t kUnknown = 0;
    static constexpr std::uint8_t kIn = 1;
    static constexpr std::uint8_t kOut = 2;

    double weight(int v) const { return inst_.vertex_weight[static_cast<std::size_t>(v)]; }

    double bound(std::size_t depth) const {
        double lb = *std::max_element(load_.begin(), load_.end());
        double total = remaining_;
        for (double l : load_) total += l;
        lb = std::max(lb, total / k_);
        for (std::size_t d = depth; d < order_.size(); ++d) {
            const int v = order_[d];
            if (forced_[static_cast<std::size_t>(v)]) continue;
            double cheapest = std::numeric_limits<double>::infinity();
            for (int i = 0; i < k_; ++i) cheapest = std::min(cheapest, load_[static_cast<std::size_t>(i)] + weight(v));
            lb = std::max(lb, cheapest);
        }
        return lb;
    }

    /// Every vertex robot i holds must stay reachable from its root through
    /// vertices not excluded for i.
    bool connectable(int i) const {
        const auto& mem = member_[static_cast<std::size_t>(i)];
        std::vector<std::uint8_t> seen(static_cast<std::size_t>(n_), 0);
        const int r = inst_.roots[static_cast<std::size_t>(i)];
        std::vector<int> stack{r};
        seen[static_cast<std::size_t>(r)] = 1;
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (auto [y, e] : adj_[static_cast<std::size_t>(x)]) {
                if (!seen[static_cast<std::size_t>(y)] && mem[static_cast<std::size_t>(y)] != kOut) {
                    seen[static_cast<std::size_t>(y)] = 1;
                    stack.push_back(y);
                }
            }
        }
        for (int v : order_) {
            if (mem[static_cast<std::size_t>(v)] == kIn && !seen[static_cast<std::size_t>(v)]) return false;
        }
        return true;
    }

    bool out_of_time() {
        if ((nodes_ & 255) == 0 && std::chrono::steady_clock::now() >= deadline_) timed_out_ = true;
        return timed_out_;
    }

    void leaf() {
        TreeCover cover;
        double makespan = 0.0;
        for (int i = 0; i < k_; ++i) {
            Tree t;
            t.robot = i;
            t.root = inst_.roots[static_cast<std::size_t>(i)];
            std::vector<int> induced;
            for (int v = 0; v < n_; ++v) {
                if (member_[i][v] == kIn) t.vertices.push_back(v);
            }
            for (int e = 0; e < inst_.edge_count(); ++e) {
                if (!inst_.has_edge(e)) continue;
                const GraphEdge& ge = inst_.edges[static_cast<std::size_t>(e)];
                if (member_[i][ge.u] == kIn && member_[i][ge.v] == kIn) induced.push_back(e);
            }
            t.edges = kruskal(inst_, induced);
            if (t.edges.size() + 1 != t.vertices.size()) return;  // disconnected; excluded by pruning
            t.cost = tree_cost(inst_, t);
            makespan = std::max(makespan, t.cost);
            cover.trees.push_back(std::move(t));
        }
        if (makespan < best_ - kEps) {
            best_ = makespan;
            best_cover_ = std::move(cover);
            history_->push_back(best_);
        }
    }

    void search(std::size_t depth) {
        ++nodes_;
        if (out_of_time()) {
            complete_ = false;
            return;
        }
        if (bound(depth) >= best_ - kEps) return;
        if (depth == order_.size()) {
            leaf();
            return;
        }
        const int v = order_[depth];
        const std::uint32_t forced = forced_[static_cast<std::size_t>(v)];
        // robots still indistinguishable from a lower-indexed twin
        std::vector<int> twin(static_cast<std::size_t>(k_), -1);
        for (int j = 0; j < k_; ++j) {
            for (int i = 0; i < j && twin[static_cast<std::size_t>(j)] < 0; ++i) {
                if (inst_.roots[static_cast<std::size_t>(i)] == inst_.roots[static_cast<std::size_t>(j)] &&
                    member_[static_cast<std::size_t>(i)] == member_[static_cast<std::size_t>(j)]) {
                    twin[static_cast<std::size_t>(j)] = i;
                }
            }
        }
        struct Child {
            double peak;
            int size;
            std::uint32_t mask;
        };
        std::vector<Child> children;
        const std::uint32_t all = (std::uint32_t{1} << k_) - 1;
        for (std::uint32_t mask = 1; mask <= all; ++mask) {
            if ((mask & forced) != forced) continue;
            bool symmetric = false;
            for (int j = 0; j < k_ && !symmetric; ++j) {
                const int i = twin[static_cast<std::size_t>(j)];
                if (i >= 0 && (mask >> j & 1U) && !(mask >> i & 1U)) symmetric = true;
            }
            if (symmetric) continue;
            double peak = 0.0;
            for (int i = 0; i < k_; ++i) {
                double l = load_[static_cast<std::size_t>(i)];
                if ((mask >> i & 1U) && !(forced >> i & 1U)) l += weight(v);
                peak = std::max(peak, l);
            }
            children.push_back({peak, std::popcount(mask), mask});
        }
        std::sort(children.begin(), children.end(), [](const Child& a, const Child& b) {
            if (a.peak != b.peak) return a.peak < b.peak;
            if (a.size != b.size) return a.size < b.size;
            return a.mask < b.mask;
        });
        const double w = weight(v);
        if (!forced) remaining_ -= w;
        for (const Child& child : children) {
            if (child.peak >= best_ - kEps) continue;
            for (int i = 0; i < k_; ++i) {
                if (forced >> i & 1U) continue;
                const bool in = child.mask >> i & 1U;
                member_[i][v] = in ? kIn : kOut;
                if (in) load_[static_cast<std::size_t>(i)] += w;
            }
            bool ok = true;
            for (int i = 0; i < k_ && ok; ++i) ok = connectable(i);
            if (ok) search(depth + 1);
            for (int i = 0; i < k_; ++i) {
                if (forced >> i & 1U) continue;
                if (member_[i][v] == kIn) load_[static_cast<std::size_t>(i)] -= w;
                member_[i][v] = kUnknown;
            }
            if (timed_out_) break;
        }
        if (!forced) remaining_ += w;
    }

    const MmrtcInstance& inst_;
    int n_;
    int k_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
    std::vector<int> order_;
    std::vector<std::vector<std::uint8_t>> member_;
    std::vector<double> load_;
    std::vector<std::uint32_t> forced_;
    double remaining_ = 0.0;
    double best_ = 0.0;
    double root_bound_ = 0.0;
    TreeCover best_cover_;
    std::vector<double>* history_ = nullptr;
    long nodes_ = 0;
    bool complete_ = true;
    bool timed_out_ = false;
    std::chrono::steady_clock::time_point deadline_;
};

bool every_vertex_reachable(const MmrtcInstance& inst) {
    const auto adj = adjacency(inst);
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(inst.vertex_count()), 0);
    std::vector<int> stack(inst.roots.begin(), inst.roots.end());
    for (int r : stack) seen[static_cast<std::size_t>(r)] = 1;
    while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        for (auto [y, e] : adj[static_cast<std::size_t>(x)]) {
            if (!seen[static_cast<std::size_t>(y)]) {
                seen[static_cast<std::size_t>(y)] = 1;
                stack.push_back(y);
            }
        }
    }
    for (int v = 0; v < inst.vertex_count(); ++v) {
        if (inst.has_vertex(v) && !seen[static_cast<std::size_t>(v)]) return false;
    }
    return true;
}

SolveResult solve_external(const MipModel& model, const MmrtcInstance& inst, const SolverOptions& options) {
    namespace fs = std::filesystem;
    if (options.command.empty()) throw InvalidInput("external solver needs a command", "mmrtc");
    std::random_device rd;
    const fs::path dir = fs::temp_directory_path();
    const std::string stem = "mcfs_" + std::to_string(rd()) + "_" + std::to_string(rd());
    const fs::path lp = dir / (stem + ".lp");
    const fs::path sol = dir / (stem + ".sol");
    {
        std::ofstream out(lp);
        out << write_lp(model);
        if (!out) throw Error("cannot write " + lp.string(), "mmrtc");
    }
    const std::string cmd = options.command + " '" + lp.string() + "' '" + sol.string() + "'";
    const int rc = std::system(cmd.c_str());
    std::ifstream in(sol);
    std::stringstream text;
    text << in.rdbuf();
    std::error_code ec;
    fs::remove(lp, ec);
    fs::remove(sol, ec);
    if (rc != 0) throw Error("external solver exited with status " + std::to_string(rc), "mmrtc");
    if (!in) throw Error("external solver produced no solution file", "mmrtc");
    SolveResult result;
    result.cover = decode(assignment_from_values(model, read_solution(text.str())), inst);
    result.status = SolveStatus::feasible;
    return result;
}

}  // namespace

SolveResult solve(const MipModel& model, const MmrtcInstance& inst, const TreeCover& warm,
                  const SolverOptions& options) {
    inst.validate();
    SolveResult result;
    if (!every_vertex_reachable(inst)) {
        result.status = SolveStatus::infeasible;
        return result;
    }
    validate_cover(inst, warm);
    result.cover = warm;
    recompute_costs(inst, result.cover);
    result.incumbent_history.push_back(result.cover.makespan());
    result.status = SolveStatus::feasible;
    if (!(options.time_limit > 0.0)) return result;
    if (options.backend == "external") {
        SolveResult ext = solve_external(model, inst, options);
        if (ext.cover.makespan() < result.cover.makespan()) {
            result.cover = std::move(ext.cover);
            result.incumbent_history.push_back(result.cover.makespan());
        }
        return result;
    }
    if (options.backend != "bundled") throw InvalidInput("unknown solver backend: " + options.backend, "mmrtc");
    if (inst.k() > 16) throw InvalidInput("bundled solver supports at most 16 robots", "mmrtc");
    BranchAndBound bnb(inst, options.time_limit);
    bnb.run(result);
    return result;
}

std::string cover_to_json_text(const TreeCover& cover, SolveStatus status) {
    nlohmann::json j;
    j["status"] = to_string(status);
    j["makespan"] = cover.makespan();
    j["trees"] = nlohmann::json::array();
    for (const Tree& t : cover.trees) {
        j["trees"].push_back(
            {{"robot", t.robot}, {"root", t.root}, {"vertices", t.vertices}, {"edges", t.edges}, {"cost", t.cost}});
    }
    return j.dump(1);
}

MmrtcInstance instance_from_dump_text(const std::string& text, std::vector<int> roots) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("isograph dump is not valid JSON: ") + e.what(), "mmrtc");
    }
    try {
        MmrtcInstance inst;
        std::map<int, int> index;
        for (const auto& v : j.at("vertices")) {
            index[v.at("id").get<int>()] = static_cast<int>(inst.vertex_weight.size());
            inst.vertex_weight.push_back(v.at("weight").get<double>());
        }
        for (const auto& e : j.at("edges")) {
            GraphEdge ge;
            ge.u = index.at(e.at("u").get<int>());
            ge.v = index.at(e.at("v").get<int>());
            ge.weight = e.value("weight", 0.0);
            ge.augmented = e.value("kind", std::string("original")) == "augmented";
            inst.edges.push_back(ge);
        }
        for (int& r : roots) {
            const auto it = index.find(r);
            if (it == index.end()) throw InvalidInput("root " + std::to_string(r) + " is not in the dump", "mmrtc");
            r = it->second;
        }
        inst.roots = std::move(roots);
        inst.validate();
        return inst;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed isograph dump: ") + e.what(), "mmrtc");
    } catch (const std::out_of_range&) {
        throw InvalidInput("isograph dump references an unknown vertex", "mmrtc");
    }
}

}  // namespace mcfs
