// Command line front end: plan, isolines, isograph, solve, metrics, render, suite.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mcfs/app.hpp"
#include "mcfs/isolines.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;

mcfs::Point2 parse_point(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw mcfs::InvalidInput("expected x,y but got '" + text + "'", "app");
    try {
        std::size_t used = 0;
        const std::string xs = text.substr(0, comma);
        const std::string ys = text.substr(comma + 1);
        const double x = std::stod(xs, &used);
        if (used != xs.size()) throw std::invalid_argument(xs);
        const double y = std::stod(ys, &used);
        if (used != ys.size()) throw std::invalid_argument(ys);
        return {x, y};
    } catch (const std::logic_error&) {
        throw mcfs::InvalidInput("malformed coordinate '" + text + "'", "app");
    }
}

// "N@x,y" places N robots at one point; "x,y" places one.
std::vector<mcfs::Point2> parse_robots(const std::vector<std::string>& specs) {
    std::vector<mcfs::Point2> out;
    for (const std::string& spec : specs) {
        int count = 1;
        std::string where = spec;
        if (const auto at = spec.find('@'); at != std::string::npos) {
            try {
                count = std::stoi(spec.substr(0, at));
            } catch (const std::logic_error&) {
                throw mcfs::InvalidInput("malformed robot count in '" + spec + "'", "app");
            }
            if (count < 1) throw mcfs::InvalidInput("robot count must be positive", "app");
            where = spec.substr(at + 1);
        }
        const mcfs::Point2 p = parse_point(where);
        out.insert(out.end(), static_cast<std::size_t>(count), p);
    }
    return out;
}

mcfs::SolverOptions parse_solver(const std::string& spec, double time_limit) {
    mcfs::SolverOptions s;
    s.time_limit = time_limit;
    if (spec == "bundled") return s;
    if (spec.rfind("external:", 0) == 0 && spec.size() > 9) {
        s.backend = "external";
        s.command = spec.substr(9);
        return s;
    }
    throw mcfs::InvalidInput("solver must be 'bundled' or 'external:<command>'", "app");
}

double default_time_limit() {
    if (const char* env = std::getenv("MCFS_TIME_LIMIT")) {
        try {
            return std::stod(env);
        } catch (const std::logic_error&) {
            std::cerr << "warning: ignoring malformed MCFS_TIME_LIMIT\n";
        }
    }
    return 60.0;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        mcfs::write_text(path, text);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-robot connected Fermat spiral coverage planner"};
    app.require_subcommand(1);

    // shared geometry options
    std::string ws_path;
    double l = 0.0;
    std::optional<double> cell_size;
    bool serial = false;

    auto add_geometry = [&](CLI::App* sub) {
        sub->add_option("workspace", ws_path, "Workspace JSON file")->required();
        sub->add_option("--l", l, "Isoline spacing and cover diameter")->required();
        sub->add_option("--cell-size", cell_size, "Distance field cell (default l/4)");
        sub->add_flag("--serial", serial, "Use the serial kernels");
    };

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "Run the full pipeline");
    add_geometry(plan_cmd);
    std::vector<std::string> robot_specs;
    std::string variant = "none";
    std::string selector = "mcs";
    std::uint64_t seed = 0;
    std::optional<int> delta;
    double time_limit = default_time_limit();
    std::string solver = "bundled";
    bool bridge = false;
    bool timings = false;
    std::string out_paths, out_csv, out_report, out_svg, out_trace, out_lp;
    plan_cmd->add_option("--robots", robot_specs, "Robot start points as x,y or N@x,y")->required();
    plan_cmd->add_option("--variant", variant, "none | ref | aug | both")
        ->check(CLI::IsMember({"none", "ref", "aug", "both"}));
    plan_cmd->add_option("--selector", selector, "random | cfs | mcs")->check(CLI::IsMember({"random", "cfs", "mcs"}));
    plan_cmd->add_option("--seed", seed, "Seed for the random selector");
    plan_cmd->add_option("--delta", delta, "Augmentation level");
    plan_cmd->add_option("--time-limit", time_limit, "Solver time limit in seconds (env MCFS_TIME_LIMIT)");
    plan_cmd->add_option("--solver", solver, "bundled | external:<command>");
    plan_cmd->add_flag("--bridge", bridge, "Join disconnected isographs with bridge edges");
    plan_cmd->add_flag("--timings", timings, "Include per-stage runtime in the report");
    plan_cmd->add_option("--out", out_paths, "Path JSON output (default stdout)");
    plan_cmd->add_option("--csv", out_csv, "Path CSV output");
    plan_cmd->add_option("--report", out_report, "Report JSON output (default stderr)");
    plan_cmd->add_option("--svg", out_svg, "SVG output");
    plan_cmd->add_option("--trace", out_trace, "Refinement trace JSONL output");
    plan_cmd->add_option("--lp", out_lp, "LP model output");

    // isolines / isograph
    auto* iso_cmd = app.add_subcommand("isolines", "Extract isolines");
    add_geometry(iso_cmd);
    std::string out_iso;
    iso_cmd->add_option("--out", out_iso, "Output JSON (default stdout)");

    auto* graph_cmd = app.add_subcommand("isograph", "Dump the isograph");
    add_geometry(graph_cmd);
    std::string out_graph;
    graph_cmd->add_option("--out", out_graph, "Output JSON (default stdout)");
    graph_cmd->add_option("--delta", delta, "Augment with this level");
    graph_cmd->add_flag("--bridge", bridge, "Join disconnected isographs with bridge edges");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Solve the tree cover on a dumped isograph");
    std::string graph_path;
    std::vector<int> roots;
    std::string out_cover;
    solve_cmd->add_option("isograph", graph_path, "Isograph JSON dump")->required();
    solve_cmd->add_option("--roots", roots, "Root vertex id per robot")->required()->delimiter(',');
    solve_cmd->add_option("--time-limit", time_limit, "Solver time limit in seconds");
    solve_cmd->add_option("--solver", solver, "bundled | external:<command>");
    solve_cmd->add_option("--out", out_cover, "Cover JSON output (default stdout)");
    solve_cmd->add_option("--lp", out_lp, "LP model output");

    // metrics
    auto* metrics_cmd = app.add_subcommand("metrics", "Recompute metrics from a path file");
    std::string paths_path;
    metrics_cmd->add_option("workspace", ws_path, "Workspace JSON file")->required();
    metrics_cmd->add_option("paths", paths_path, "Path JSON file")->required();
    metrics_cmd->add_option("--l", l, "Cover diameter")->required();
    metrics_cmd->add_option("--out", out_report, "Report JSON output (default stdout)");

    // render
    auto* render_cmd = app.add_subcommand("render", "Render a workspace and paths to SVG");
    std::string out_render;
    std::optional<double> overlay_l;
    render_cmd->add_option("workspace", ws_path, "Workspace JSON file")->required();
    render_cmd->add_option("paths", paths_path, "Path JSON file");
    render_cmd->add_option("--isograph-l", overlay_l, "Overlay the isograph built with this spacing");
    render_cmd->add_option("--out", out_render, "SVG output (default stdout)");

    // suite
    auto* suite_cmd = app.add_subcommand("suite", "Write the bundled workspaces as JSON");
    std::string suite_dir = "data/workspaces";
    suite_cmd->add_option("--dir", suite_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    const mcfs::Exec exec = serial ? mcfs::Exec::serial : mcfs::Exec::parallel;
    try {
        if (*plan_cmd) {
            mcfs::PlanConfig cfg;
            cfg.l = l;
            cfg.robots = parse_robots(robot_specs);
            cfg.delta = delta;
            cfg.selector.kind = mcfs::selector_from_string(selector);
            cfg.selector.seed = seed;
            cfg.set_variant(mcfs::variant_from_string(variant));
            cfg.bridge = bridge;
            cfg.solver = parse_solver(solver, time_limit);
            cfg.cell_size = cell_size;
            cfg.exec = exec;
            const mcfs::Workspace ws = mcfs::load_workspace(ws_path);
            mcfs::PlanOptions opts;
            opts.keep_lp = !out_lp.empty();
            const mcfs::PlanResult result = mcfs::plan(ws, cfg, opts);
            emit(out_paths, mcfs::paths_to_json_text(result.paths));
            const std::string report = mcfs::report_to_json_text(result.report, timings);
            if (out_report.empty()) {
                std::cerr << report << '\n';
            } else {
                mcfs::write_text(out_report, report);
            }
            if (!out_csv.empty()) mcfs::write_text(out_csv, mcfs::paths_to_csv(result.paths));
            if (!out_svg.empty()) mcfs::write_text(out_svg, mcfs::render_svg(ws, nullptr, result.paths, cfg.robots));
            if (!out_trace.empty()) mcfs::write_text(out_trace, mcfs::trace_to_jsonl(result.trace));
            if (!out_lp.empty()) mcfs::write_text(out_lp, result.lp);
        } else if (*iso_cmd || *graph_cmd) {
            if (!(l > 0.0)) throw mcfs::InvalidInput("l must be positive", "app");
            const mcfs::Workspace ws = mcfs::load_workspace(ws_path);
            const auto df = mcfs::build_distance_field(ws, cell_size.value_or(l / 4.0), exec);
            const auto isolines = mcfs::extract_isolines(df, l);
            if (*iso_cmd) {
                emit(out_iso, mcfs::isolines_to_json_text(isolines));
            } else {
                std::vector<mcfs::Ring> boundary{ws.exterior};
                boundary.insert(boundary.end(), ws.holes.begin(), ws.holes.end());
                mcfs::Isograph g = mcfs::build_isograph(isolines, l, boundary, exec);
                if (!g.connected && bridge) mcfs::add_bridges(g);
                if (delta) g = mcfs::augment(g, *delta);
                if (!g.connected) std::cerr << "warning: isograph is disconnected\n";
                emit(out_graph, mcfs::isograph_to_json_text(g));
            }
        } else if (*solve_cmd) {
            const mcfs::MmrtcInstance inst = mcfs::instance_from_dump_text(mcfs::read_text(graph_path), roots);
            const mcfs::MipModel model = mcfs::build_model(inst);
            if (!out_lp.empty()) mcfs::write_text(out_lp, mcfs::write_lp(model));
            const mcfs::TreeCover warm = mcfs::warm_start(inst);
            const mcfs::SolveResult res = mcfs::solve(model, inst, warm, parse_solver(solver, time_limit));
            if (res.status == mcfs::SolveStatus::infeasible) throw mcfs::Infeasible("no feasible tree cover", "mmrtc");
            emit(out_cover, mcfs::cover_to_json_text(res.cover, res.status));
        } else if (*metrics_cmd) {
            const mcfs::Workspace ws = mcfs::load_workspace(ws_path);
            const auto paths = mcfs::paths_from_json_text(mcfs::read_text(paths_path));
            if (paths.empty()) throw mcfs::InvalidInput("path file holds no paths", "app");
            emit(out_report, mcfs::report_to_json_text(mcfs::compute_metrics(paths, ws, l, exec), false));
        } else if (*render_cmd) {
            const mcfs::Workspace ws = mcfs::load_workspace(ws_path);
            std::vector<mcfs::CoveragePath> paths;
            if (!paths_path.empty()) paths = mcfs::paths_from_json_text(mcfs::read_text(paths_path));
            std::optional<mcfs::Isograph> g;
            if (overlay_l) {
                const auto df = mcfs::build_distance_field(ws, *overlay_l / 4.0, exec);
                g = mcfs::build_isograph(mcfs::extract_isolines(df, *overlay_l), *overlay_l);
            }
            emit(out_render, mcfs::render_svg(ws, g ? &*g : nullptr, paths));
        } else if (*suite_cmd) {
            std::filesystem::create_directories(suite_dir);
            for (const std::string& name : mcfs::suite_names()) {
                mcfs::save_workspace(mcfs::suite_workspace(name), std::filesystem::path(suite_dir) / (name + ".json"));
            }
        }
    } catch (const mcfs::Infeasible& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const mcfs::InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const mcfs::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
