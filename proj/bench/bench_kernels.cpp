#include <benchmark/benchmark.h>

#include "mcfs/app.hpp"
#include "mcfs/kernels.hpp"

namespace {

using namespace mcfs;

const Workspace& office() {
    static const Workspace ws = suite_workspace("office");
    return ws;
}

kernels::GridSpec grid_for(const Workspace& ws, double cell) {
    const Point2 lo = ws.bbox_min(), hi = ws.bbox_max();
    kernels::GridSpec g;
    g.origin = lo;
    g.cell = cell;
    g.nx = static_cast<int>((hi.x - lo.x) / cell) + 1;
    g.ny = static_cast<int>((hi.y - lo.y) / cell) + 1;
    return g;
}

template <bool Parallel>
void BM_SignedDistance(benchmark::State& state) {
    const Workspace& ws = office();
    const kernels::GridSpec g = grid_for(ws, ws.diameter() / static_cast<double>(state.range(0)));
    std::vector<double> values(g.size());
    std::vector<std::uint8_t> inside(g.size());
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::signed_distance_omp(g, ws, values, inside);
        } else {
            kernels::signed_distance_serial(g, ws, values, inside);
        }
        benchmark::DoNotOptimize(values.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(g.size()));
}

// Coverage raster of a planned two-robot path set at l = D/40.
struct CoverageFixture {
    std::vector<Point2> samples;
    std::vector<std::vector<Point2>> paths;
    double l = 0.0;
};

const CoverageFixture& coverage_fixture() {
    static const CoverageFixture fx = [] {
        CoverageFixture f;
        const Workspace& ws = office();
        f.l = ws.diameter() / 40;
        PlanConfig cfg;
        cfg.l = f.l;
        cfg.robots = {ws.exterior[0], ws.exterior[0]};
        cfg.set_variant(Variant::none);
        cfg.bridge = true;
        for (const CoveragePath& p : plan(ws, cfg).paths) f.paths.push_back(p.points);
        const kernels::GridSpec g = grid_for(ws, f.l / 4);
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                if (ws.contains(g.node(i, j))) f.samples.push_back(g.node(i, j));
            }
        }
        return f;
    }();
    return fx;
}

template <bool Parallel>
void BM_Coverage(benchmark::State& state) {
    const CoverageFixture& fx = coverage_fixture();
    const kernels::SegmentIndex index(fx.paths, true, fx.l);
    std::vector<std::uint8_t> out(fx.samples.size());
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::coverage_omp(fx.samples, index, fx.l / 2, 2 * fx.l, out);
        } else {
            kernels::coverage_serial(fx.samples, index, fx.l / 2, 2 * fx.l, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(fx.samples.size()));
}

void BM_Plan(benchmark::State& state) {
    const Workspace& ws = office();
    PlanConfig cfg;
    cfg.l = ws.diameter() / static_cast<double>(state.range(0));
    cfg.robots = {ws.exterior[0], ws.exterior[0]};
    cfg.set_variant(Variant::both);
    cfg.bridge = true;
    for (auto _ : state) benchmark::DoNotOptimize(plan(ws, cfg).report.makespan);
}

}  // namespace

BENCHMARK(BM_SignedDistance<false>)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SignedDistance<true>)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Coverage<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Coverage<true>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Plan)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
