#include <doctest.h>

#include <filesystem>
#include <regex>

#include <json.hpp>

#include "support.hpp"

using namespace mcfs;
using namespace testing;

namespace {

double seg_dist(Point2 p, Point2 a, Point2 b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - a.x - t * dx, p.y - a.y - t * dy);
}

// Fraction of inside raster cells (own grid) whose center is within l/2 of a path.
double brute_coverage(const std::vector<CoveragePath>& paths, const Workspace& ws, double l) {
    const Point2 lo = ws.bbox_min(), hi = ws.bbox_max();
    const double cell = l / 4;
    long inside = 0, covered = 0;
    for (double y = lo.y + cell / 2; y < hi.y; y += cell) {
        for (double x = lo.x + cell / 2; x < hi.x; x += cell) {
            const Point2 c{x, y};
            if (!ws.contains(c)) continue;
            ++inside;
            bool hit = false;
            for (const CoveragePath& p : paths) {
                const std::size_t n = p.points.size();
                const std::size_t segs = p.closed ? n : n - 1;
                for (std::size_t i = 0; i < segs && !hit; ++i) {
                    hit = seg_dist(c, p.points[i], p.points[(i + 1) % n]) <= l / 2;
                }
                if (hit) break;
            }
            covered += hit ? 1 : 0;
        }
    }
    return static_cast<double>(covered) / static_cast<double>(inside);
}

PlanConfig config(double l, std::vector<Point2> robots, Variant v) {
    PlanConfig cfg;
    cfg.l = l;
    cfg.robots = std::move(robots);
    cfg.set_variant(v);
    cfg.bridge = true;
    cfg.solver.time_limit = 60;
    return cfg;
}

}  // namespace

TEST_CASE("strip metrics") {
    const double l = 0.2;
    const Workspace ws = Workspace::make("strip", {{0, 0}, {10 * l, 0}, {10 * l, l}, {0, l}}, {});
    CoveragePath p;
    p.closed = false;
    for (int i = 0; i <= 40; ++i) p.points.push_back({i * l / 4, l / 2});
    const PlanReport r = compute_metrics({p}, ws, l);
    CHECK(r.coverage_ratio == doctest::Approx(1.0).epsilon(0.05));
    CHECK(r.overlap_ratio == 0.0);
    CHECK(r.makespan == doctest::Approx(10 * l));
    CHECK(r.makespan_points == 41);
    CHECK(r.curvature == doctest::Approx(0.0));

    CoveragePath q = p;
    q.robot = 1;
    const PlanReport twice = compute_metrics({p, q}, ws, l);
    CHECK(twice.overlap_ratio == twice.coverage_ratio);
}

TEST_CASE("metric ranges and serial agreement") {
    const Workspace ws = suite_workspace("office");
    const PlanResult r = plan(ws, config(ws.diameter() / 25, {ws.exterior[0], ws.exterior[0]}, Variant::none));
    const PlanReport a = compute_metrics(r.paths, ws, ws.diameter() / 25, Exec::serial);
    const PlanReport b = compute_metrics(r.paths, ws, ws.diameter() / 25, Exec::parallel);
    CHECK(a.coverage_ratio == b.coverage_ratio);
    CHECK(a.overlap_ratio == b.overlap_ratio);
    CHECK(a.coverage_ratio >= 0.0);
    CHECK(a.coverage_ratio <= 1.0);
    CHECK(a.overlap_ratio >= 0.0);
    CHECK(a.overlap_ratio <= a.coverage_ratio);
    double longest = 0;
    for (const CoveragePath& p : r.paths) longest = std::max(longest, p.length());
    CHECK(a.makespan == longest);
}

TEST_CASE("disc coverage against the raster oracle") {
    const Workspace ws = suite_workspace("disc");
    // l = 0.3: three rings at radii 0.7, 0.4, 0.1 leave the rim r > 0.85 bare,
    // so coverage cannot exceed 0.85^2
    {
        const PlanResult r = plan(ws, config(0.3, {{1, 0}}, Variant::none));
        REQUIRE(r.paths.size() == 1);
        CHECK(r.graph.vertex_count() == 3);
        CHECK(r.paths[0].points.size() == static_cast<std::size_t>(r.cover.trees[0].cost));
        const double oracle = brute_coverage(r.paths, ws, 0.3);
        CHECK(r.report.coverage_ratio == doctest::Approx(oracle).epsilon(0.02));
        CHECK(r.report.coverage_ratio <= 0.85 * 0.85 + 0.02);
    }
    {
        const double l = ws.diameter() / 40;
        const PlanResult r = plan(ws, config(l, {{1, 0}}, Variant::none));
        const double oracle = brute_coverage(r.paths, ws, l);
        CHECK(r.report.coverage_ratio == doctest::Approx(oracle).epsilon(0.02));
        CHECK(r.report.coverage_ratio >= 0.89);
        CHECK(r.report.overlap_ratio <= 0.10);
    }
}

TEST_CASE("shared root on the disc") {
    const Workspace ws = suite_workspace("disc");
    const PlanResult none = plan(ws, config(0.1, {{1, 0}, {1, 0}}, Variant::none));
    const PlanResult ref = plan(ws, config(0.1, {{1, 0}, {1, 0}}, Variant::ref));
    CHECK(none.report.overlap_ratio > 0.1);
    CHECK(ref.report.overlap_ratio < none.report.overlap_ratio / 2);
    CHECK(ref.report.makespan <= none.report.makespan);
    CHECK(ref.report.tree_makespan <= none.report.tree_makespan);
}

TEST_CASE("four robots on one root") {
    const Workspace ws = suite_workspace("letter_p");
    const double l = ws.diameter() / 20;
    const std::vector<Point2> four(4, ws.exterior[0]);
    const PlanResult none = plan(ws, config(l, four, Variant::none));
    const PlanResult both = plan(ws, config(l, four, Variant::both));
    CHECK(both.report.makespan < none.report.makespan);
    CHECK(both.paths.size() == 4);
}

TEST_CASE("ablation never loses to none") {
    for (const std::string& name : suite_names()) {
        CAPTURE(name);
        const Workspace ws = suite_workspace(name);
        const double l = ws.diameter() / 20;
        const std::vector<Point2> two(2, ws.exterior[0]);
        const PlanResult none = plan(ws, config(l, two, Variant::none));
        const PlanResult ref = plan(ws, config(l, two, Variant::ref));
        const PlanResult both = plan(ws, config(l, two, Variant::both));
        // refine and augmentation act on tree costs; path length follows up to stitch jumps
        CHECK(ref.report.tree_makespan <= none.report.tree_makespan);
        CHECK(both.report.tree_makespan <= none.report.tree_makespan);
        CHECK(both.report.makespan <= none.report.makespan * 1.05);
        CHECK(ref.report.makespan <= none.report.makespan * 1.05);
    }
}

TEST_CASE("plan is deterministic") {
    const Workspace ws = suite_workspace("disc_two_obstacles");
    PlanConfig cfg = config(ws.diameter() / 25, {{2, 0}, {-2, 0}}, Variant::both);
    cfg.selector = {SelectorKind::random, 77, false};
    const PlanResult a = plan(ws, cfg);
    const PlanResult b = plan(ws, cfg);
    cfg.exec = Exec::serial;
    const PlanResult c = plan(ws, cfg);
    CHECK(report_to_json_text(a.report, false) == report_to_json_text(b.report, false));
    CHECK(report_to_json_text(a.report, false) == report_to_json_text(c.report, false));
    CHECK(paths_to_json_text(a.paths) == paths_to_json_text(c.paths));
    const auto j = nlohmann::json::parse(report_to_json_text(a.report, true));
    CHECK(j.contains("runtime"));
    CHECK_FALSE(nlohmann::json::parse(report_to_json_text(a.report, false)).contains("runtime"));
    CHECK(a.report.per_robot.size() == 2);
}

TEST_CASE("svg output") {
    const Workspace ws = suite_workspace("annulus");
    const std::string empty = render_svg(ws, nullptr, {});
    CHECK(empty.find("<svg") != std::string::npos);
    CHECK(empty.find("<polyline") == std::string::npos);

    const PlanResult r = plan(ws, config(ws.diameter() / 20, {{2, 0}, {-2, 0}}, Variant::none));
    const std::string a = render_svg(ws, &r.graph, r.paths, {{2, 0}, {-2, 0}});
    CHECK(a == render_svg(ws, &r.graph, r.paths, {{2, 0}, {-2, 0}}));
    const std::regex stroke("<polyline fill=\"none\" stroke=\"(#[0-9a-f]{6})\"");
    std::set<std::string> colors;
    for (auto it = std::sregex_iterator(a.begin(), a.end(), stroke); it != std::sregex_iterator(); ++it) {
        colors.insert((*it)[1]);
    }
    CHECK(colors.size() == 2);
    CHECK(a.find("<circle") != std::string::npos);
}

TEST_CASE("config") {
    PlanConfig cfg;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg.l = 0.2;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg.robots = {{0, 0}};
    CHECK_NOTHROW(cfg.validate());
    cfg.enable_augment = true;
    cfg.delta = 1;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg.delta.reset();
    CHECK(cfg.effective_delta() == 2);
    cfg.robots.assign(7, {0, 0});
    CHECK(cfg.effective_delta() == 4);
    cfg.robots.assign(3, {0, 0});
    CHECK(cfg.effective_delta() == 3);
    CHECK(cfg.effective_cell_size() == doctest::Approx(0.05));

    for (Variant v : {Variant::none, Variant::ref, Variant::aug, Variant::both}) {
        CHECK(variant_from_string(to_string(v)) == v);
        PlanConfig c;
        c.set_variant(v);
        CHECK(c.enable_refine == (v == Variant::ref || v == Variant::both));
        CHECK(c.enable_augment == (v == Variant::aug || v == Variant::both));
    }
    CHECK_THROWS_AS(variant_from_string("all"), InvalidInput);

    const Workspace ws = suite_workspace("disc");
    PlanConfig bad = config(0.3, {{std::nan(""), 0}}, Variant::none);
    CHECK_THROWS_AS(plan(ws, bad), InvalidInput);
}

TEST_CASE("path files") {
    const Workspace ws = suite_workspace("two_lobes");
    const PlanResult r = plan(ws, config(ws.diameter() / 20, {ws.exterior[0], ws.exterior[10]}, Variant::none));
    const std::string text = paths_to_json_text(r.paths);
    const auto back = paths_from_json_text(text);
    REQUIRE(back.size() == r.paths.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].points == r.paths[i].points);
        CHECK(back[i].sources == r.paths[i].sources);
        CHECK(back[i].closed == r.paths[i].closed);
        CHECK(back[i].robot == r.paths[i].robot);
    }
    CHECK(paths_to_json_text(back) == text);

    const std::string csv = paths_to_csv(r.paths);
    CHECK(csv.rfind("robot,index,x,y\n", 0) == 0);
    std::size_t rows = 0;
    for (char ch : csv) rows += ch == '\n' ? 1 : 0;
    CHECK(rows == 1 + r.paths[0].points.size() + r.paths[1].points.size());

    const auto dir = std::filesystem::temp_directory_path() / "mcfs_test_app";
    std::filesystem::create_directories(dir);
    write_text(dir / "p.json", text);
    CHECK(read_text(dir / "p.json") == text);
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(write_text("/nonexistent/dir/p.json", text), InvalidInput);
    CHECK_THROWS_AS(read_text("/nonexistent/p.json"), InvalidInput);
    CHECK_THROWS_AS(paths_from_json_text("{"), InvalidInput);
}
