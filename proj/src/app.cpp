#include "mcfs/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "mcfs/isolines.hpp"
#include "mcfs/kernels.hpp"

namespace mcfs {

const char* to_string(Variant v) {
    switch (v) {
        case Variant::none: return "none";
        case Variant::ref: return "ref";
        case Variant::aug: return "aug";
        case Variant::both: return "both";
    }
    return "none";
}

Variant variant_from_string(const std::string& name) {
    if (name == "none") return Variant::none;
    if (name == "ref") return Variant::ref;
    if (name == "aug") return Variant::aug;
    if (name == "both") return Variant::both;
    throw InvalidInput("unknown variant: " + name, "app");
}

void PlanConfig::set_variant(Variant v) {
    enable_augment = v == Variant::aug || v == Variant::both;
    enable_refine = v == Variant::ref || v == Variant::both;
}

int PlanConfig::effective_delta() const {
    if (delta) return *delta;
    return std::max(2, std::min(static_cast<int>(robots.size()), 4));
}

double PlanConfig::effective_cell_size() const { return cell_size ? *cell_size : l / 4.0; }

void PlanConfig::validate() const {
    if (!(l > 0.0) || !std::isfinite(l)) throw InvalidInput("l must be positive", "app");
    if (robots.empty()) throw InvalidInput("at least one robot is required", "app");
    for (const Point2& p : robots) {
        if (!is_finite(p)) throw InvalidInput("robot position must be finite", "app");
    }
    if (enable_augment && effective_delta() < 2) throw InvalidInput("delta must be >= 2", "app");
    if (cell_size && !(*cell_size > 0.0)) throw InvalidInput("cell size must be positive", "app");
}

int snap_root(const Isograph& g, Point2 p) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (const Isovertex& v : g.vertices) {
        if (!v.alive) continue;
        for (const Point2& q : v.points()) {
            const double d = dist(p, q);
            if (d < best_d) {
                best_d = d;
                best = v.id;
            }
        }
    }
    if (best < 0) throw InvalidInput("isograph has no vertices", "app");
    return best;
}

namespace {

class StageClock {
public:
    explicit StageClock(std::vector<std::pair<std::string, double>>& out) : out_(out) {}
    void lap(const std::string& stage) {
        const auto now = std::chrono::steady_clock::now();
        out_.emplace_back(stage, std::chrono::duration<double>(now - last_).count());
        last_ = now;
    }

private:
    std::vector<std::pair<std::string, double>>& out_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

PlanResult plan(const Workspace& ws, const PlanConfig& cfg, const PlanOptions& options) {
    cfg.validate();
    PlanResult result;
    StageClock clock(result.report.runtime);

    const DistanceField df = build_distance_field(ws, cfg.effective_cell_size(), cfg.exec);
    const std::vector<Isoline> isolines = extract_isolines(df, cfg.l);
    clock.lap("geom");

    std::vector<Ring> boundary{ws.exterior};
    boundary.insert(boundary.end(), ws.holes.begin(), ws.holes.end());
    Isograph g = build_isograph(isolines, cfg.l, boundary, cfg.exec);
    if (!g.connected && cfg.bridge) add_bridges(g);
    if (cfg.enable_augment) g = augment(g, cfg.effective_delta());
    clock.lap("isograph");

    for (const Point2& p : cfg.robots) result.roots.push_back(snap_root(g, p));
    const MmrtcInstance inst = instance_from_isograph(g, result.roots);
    const MipModel model = build_model(inst);
    if (options.keep_lp) result.lp = write_lp(model);
    const TreeCover warm = warm_start(inst);
    SolveResult solved = solve(model, inst, warm, cfg.solver);
    if (solved.status == SolveStatus::infeasible) throw Infeasible("no tree cover reaches every isoline", "mmrtc");
    result.report.solver_status = to_string(solved.status);
    clock.lap("mmrtc");

    Isograph stitched = g;
    TreeCover cover = std::move(solved.cover);
    if (cfg.enable_refine) {
        RefineResult refined = refine(g, cover);
        stitched = std::move(refined.graph);
        cover = std::move(refined.cover);
        result.trace = std::move(refined.trace);
    }
    clock.lap("refine");

    for (std::size_t i = 0; i < cover.trees.size(); ++i) {
        result.paths.push_back(stitch_tree(stitched, cover.trees[i], cfg.robots[i], cfg.selector));
    }
    clock.lap("cfs");

    PlanReport metrics = compute_metrics(result.paths, ws, cfg.l, cfg.exec);
    clock.lap("metrics");
    metrics.runtime = std::move(result.report.runtime);
    result.report = std::move(metrics);
    result.report.solver_status = to_string(solved.status);
    result.report.tree_makespan = cover.makespan();
    result.report.isolines = static_cast<int>(isolines.size());
    result.report.vertices = static_cast<int>(g.vertex_count());
    result.report.edges = static_cast<int>(g.edge_count());
    for (std::size_t i = 0; i < cover.trees.size() && i < result.report.per_robot.size(); ++i) {
        result.report.per_robot[i].tree_cost = cover.trees[i].cost;
    }
    result.graph = std::move(stitched);
    result.cover = std::move(cover);
    return result;
}

PlanReport compute_metrics(const std::vector<CoveragePath>& paths, const Workspace& ws, double l, Exec exec) {
    if (!(l > 0.0)) throw InvalidInput("l must be positive", "app");
    PlanReport report;
    std::vector<std::vector<Point2>> polylines;
    bool closed = !paths.empty();
    double curvature_sum = 0.0;
    long curvature_count = 0;
    for (const CoveragePath& p : paths) {
        polylines.push_back(p.points);
        closed = closed && p.closed;
        const double len = p.length();
        report.per_robot.push_back({p.robot, len, static_cast<int>(p.points.size()), 0.0});
        if (report.per_robot.size() == 1 || len > report.makespan) {
            report.makespan = len;
            report.makespan_points = static_cast<int>(p.points.size());
        }
        const std::size_t n = p.points.size();
        if (n < 3) continue;
        for (std::size_t i = 0; i < n; ++i) {
            if (!p.closed && (i == 0 || i + 1 == n)) continue;
            const Point2 a = p.points[(i + n - 1) % n];
            const Point2 b = p.points[i];
            const Point2 c = p.points[(i + 1) % n];
            if (a == b || b == c) continue;
            curvature_sum += turning_curvature(a, b, c);
            ++curvature_count;
        }
    }
    report.curvature = curvature_count > 0 ? curvature_sum / static_cast<double>(curvature_count) : 0.0;

    const double cell = l / 4.0;
    const Point2 lo = ws.bbox_min();
    const Point2 hi = ws.bbox_max();
    const int nx = static_cast<int>(std::ceil((hi.x - lo.x) / cell));
    const int ny = static_cast<int>(std::ceil((hi.y - lo.y) / cell));
    std::vector<Point2> samples;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const Point2 c{lo.x + (i + 0.5) * cell, lo.y + (j + 0.5) * cell};
            if (ws.contains(c)) samples.push_back(c);
        }
    }
    if (samples.empty() || polylines.empty()) return report;
    const kernels::SegmentIndex index(polylines, closed, l);
    std::vector<std::uint8_t> state(samples.size(), 0);
    if (exec == Exec::parallel) {
        kernels::coverage_omp(samples, index, l / 2.0, 2.0 * l, state);
    } else {
        kernels::coverage_serial(samples, index, l / 2.0, 2.0 * l, state);
    }
    const auto covered = std::count_if(state.begin(), state.end(), [](std::uint8_t s) { return s > 0; });
    const auto repeated = std::count(state.begin(), state.end(), std::uint8_t{2});
    report.coverage_ratio = static_cast<double>(covered) / static_cast<double>(samples.size());
    report.overlap_ratio = static_cast<double>(repeated) / static_cast<double>(samples.size());
    return report;
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    std::string s = buf;
    if (s == "-0.0000") s = "0.0000";
    return s;
}

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
                          "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

std::string ring_path(const Ring& ring) {
    std::string d;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        d += (i == 0 ? "M" : "L") + num(ring[i].x) + "," + num(ring[i].y);
    }
    return d + "Z";
}

}  // namespace

std::string render_svg(const Workspace& ws, const Isograph* graph, const std::vector<CoveragePath>& paths,
                       const std::vector<Point2>& roots) {
    const Point2 lo = ws.bbox_min();
    const Point2 hi = ws.bbox_max();
    const double w = hi.x - lo.x;
    const double h = hi.y - lo.y;
    const double margin = 0.05 * std::max(w, h);
    const double stroke = 0.004 * std::max(w, h);
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(lo.x - margin) << ' '
        << num(-hi.y - margin) << ' ' << num(w + 2 * margin) << ' ' << num(h + 2 * margin)
        << "\" width=\"800\" height=\"" << static_cast<int>(800.0 * (h + 2 * margin) / (w + 2 * margin)) << "\">\n";
    out << "<g transform=\"scale(1,-1)\">\n";
    std::string d = ring_path(ws.exterior);
    for (const Ring& hole : ws.holes) d += ring_path(hole);
    out << "<path d=\"" << d << "\" fill=\"#eeeeee\" fill-rule=\"evenodd\" stroke=\"#333333\" stroke-width=\""
        << num(stroke) << "\"/>\n";
    for (const Ring& hole : ws.holes) {
        out << "<path d=\"" << ring_path(hole) << "\" fill=\"#888888\" stroke=\"none\"/>\n";
    }
    for (const CoveragePath& p : paths) {
        const char* color = kPalette[static_cast<std::size_t>(p.robot) % std::size(kPalette)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << num(stroke)
            << "\" stroke-linejoin=\"round\" points=\"";
        for (std::size_t i = 0; i < p.points.size(); ++i) {
            out << (i ? " " : "") << num(p.points[i].x) << ',' << num(p.points[i].y);
        }
        if (p.closed && !p.points.empty()) out << ' ' << num(p.points[0].x) << ',' << num(p.points[0].y);
        out << "\"/>\n";
    }
    if (graph) {
        std::vector<Point2> centers(graph->vertices.size());
        for (const Isovertex& v : graph->vertices) {
            Point2 c;
            for (const Point2& q : v.points()) c = c + q;
            centers[static_cast<std::size_t>(v.id)] = (1.0 / v.weight()) * c;
        }
        for (const IsoEdge& e : graph->edges) {
            if (!e.alive) continue;
            const Point2 a = centers[static_cast<std::size_t>(e.u)];
            const Point2 b = centers[static_cast<std::size_t>(e.v)];
            out << "<line x1=\"" << num(a.x) << "\" y1=\"" << num(a.y) << "\" x2=\"" << num(b.x) << "\" y2=\""
                << num(b.y) << "\" stroke=\"#555555\" stroke-width=\"" << num(stroke)
                << (e.kind == EdgeKind::original ? "\"" : "\" stroke-dasharray=\"" + num(4 * stroke) + "\"") << "/>\n";
        }
        for (const Isovertex& v : graph->vertices) {
            if (!v.alive) continue;
            const Point2 c = centers[static_cast<std::size_t>(v.id)];
            out << "<circle cx=\"" << num(c.x) << "\" cy=\"" << num(c.y) << "\" r=\""
                << num(stroke * (1.0 + std::sqrt(static_cast<double>(v.weight())))) << "\" fill=\"#444444\"/>\n";
        }
    }
    for (std::size_t i = 0; i < roots.size(); ++i) {
        out << "<circle cx=\"" << num(roots[i].x) << "\" cy=\"" << num(roots[i].y) << "\" r=\"" << num(4 * stroke)
            << "\" fill=\"" << kPalette[i % std::size(kPalette)] << "\" stroke=\"#000000\" stroke-width=\""
            << num(stroke / 2) << "\"/>\n";
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path.string(), "app");
    out << text;
    if (!out) throw InvalidInput("cannot write " + path.string(), "app");
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path.string(), "app");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string paths_to_json_text(const std::vector<CoveragePath>& paths) {
    nlohmann::json j = nlohmann::json::array();
    for (const CoveragePath& p : paths) {
        nlohmann::json pts = nlohmann::json::array();
        nlohmann::json src = nlohmann::json::array();
        for (const Point2& q : p.points) pts.push_back({q.x, q.y});
        for (const PointRef& r : p.sources) src.push_back({r.vertex, r.index});
        j.push_back({{"robot", p.robot}, {"closed", p.closed}, {"points", pts}, {"sources", src}});
    }
    return j.dump();
}

std::vector<CoveragePath> paths_from_json_text(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        std::vector<CoveragePath> out;
        for (const auto& item : j) {
            CoveragePath p;
            p.robot = item.at("robot").get<int>();
            p.closed = item.value("closed", true);
            for (const auto& q : item.at("points")) p.points.push_back({q.at(0).get<double>(), q.at(1).get<double>()});
            if (item.contains("sources")) {
                for (const auto& r : item.at("sources")) p.sources.push_back({r.at(0).get<int>(), r.at(1).get<int>()});
            }
            for (const Point2& q : p.points) {
                if (!is_finite(q)) throw InvalidInput("path point is not finite", "app");
            }
            out.push_back(std::move(p));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed path JSON: ") + e.what(), "app");
    }
}

std::string paths_to_csv(const std::vector<CoveragePath>& paths) {
    std::ostringstream out;
    out << "robot,index,x,y\n";
    char buf[96];
    for (const CoveragePath& p : paths) {
        for (std::size_t i = 0; i < p.points.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%d,%zu,%.17g,%.17g\n", p.robot, i, p.points[i].x, p.points[i].y);
            out << buf;
        }
    }
    return out.str();
}

std::string report_to_json_text(const PlanReport& report, bool with_runtime) {
    nlohmann::ordered_json j;
    j["makespan"] = report.makespan;
    j["makespan_points"] = report.makespan_points;
    j["curvature"] = report.curvature;
    j["coverage_ratio"] = report.coverage_ratio;
    j["overlap_ratio"] = report.overlap_ratio;
    j["tree_makespan"] = report.tree_makespan;
    j["solver_status"] = report.solver_status;
    j["isolines"] = report.isolines;
    j["vertices"] = report.vertices;
    j["edges"] = report.edges;
    j["per_robot"] = nlohmann::ordered_json::array();
    for (const RobotStats& r : report.per_robot) {
        j["per_robot"].push_back(
            {{"robot", r.robot}, {"length", r.length}, {"points", r.points}, {"tree_cost", r.tree_cost}});
    }
    if (with_runtime) {
        nlohmann::ordered_json rt;
        for (const auto& [stage, secs] : report.runtime) rt[stage] = secs;
        j["runtime"] = rt;
    }
    return j.dump(1);
}

std::string isolines_to_json_text(const std::vector<Isoline>& isolines) {
    nlohmann::json j = nlohmann::json::array();
    for (const Isoline& iso : isolines) {
        nlohmann::json pts = nlohmann::json::array();
        for (const Point2& q : iso.points) pts.push_back({q.x, q.y});
        j.push_back({{"layer", iso.layer}, {"spacing", iso.spacing}, {"points", pts}});
    }
    return j.dump();
}

}  // namespace mcfs
