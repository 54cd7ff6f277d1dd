#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "graphkam/lax_oleinik.hpp"
#include "graphkam/spec_io.hpp"
#include "graphkam/transition.hpp"
#include "graphkam/weak_kam.hpp"

namespace {

using namespace graphkam;

const char* kSpec = R"(vertex a
vertex b
edge e1 a b length=1
edge e2 a b length=1 potential=poly:0,4,-4
)";

struct Fixture {
    ParsedSystem sys;
    Grid grid;
    TransitionGraph tg;

    explicit Fixture(double dx) {
        sys = parse_spec(kSpec);
        grid = build_grid(*sys.graph, dx);
        tg = build_transitions(grid, sys.lagrangian, 16.0 * dx / 4.0, 4.0);
    }
};

Fixture& fixture(double dx) {
    // one per resolution, reused across iterations
    static std::map<double, std::unique_ptr<Fixture>> cache;
    auto& slot = cache[dx];
    if (!slot) slot = std::make_unique<Fixture>(dx);
    return *slot;
}

double dx_of(const benchmark::State& state) {
    return 1.0 / static_cast<double>(state.range(0));
}

void BM_step_serial(benchmark::State& state) {
    Fixture& f = fixture(dx_of(state));
    std::vector<double> u(f.grid.state_count, 0.0), next(u.size());
    for (StateId x = 0; x < f.grid.state_count; ++x) u[x] = 0.01 * (x % 17);
    for (auto _ : state) {
        lo_step_serial(f.tg, u, next);
        u.swap(next);
        benchmark::DoNotOptimize(u.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(f.tg.arc_count()));
}

void BM_step_parallel(benchmark::State& state) {
    Fixture& f = fixture(dx_of(state));
    std::vector<double> u(f.grid.state_count, 0.0), next(u.size());
    for (StateId x = 0; x < f.grid.state_count; ++x) u[x] = 0.01 * (x % 17);
    for (auto _ : state) {
        lo_step_parallel(f.tg, u, next);
        u.swap(next);
        benchmark::DoNotOptimize(u.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(f.tg.arc_count()));
}

void BM_build_serial(benchmark::State& state) {
    Fixture& f = fixture(dx_of(state));
    double dx = dx_of(state);
    for (auto _ : state) {
        TransitionGraph tg =
            build_transitions_serial(f.grid, f.sys.lagrangian, 16.0 * dx / 4.0, 4.0);
        benchmark::DoNotOptimize(tg.in_weight.data());
    }
}

void BM_build_parallel(benchmark::State& state) {
    Fixture& f = fixture(dx_of(state));
    double dx = dx_of(state);
    for (auto _ : state) {
        TransitionGraph tg =
            build_transitions(f.grid, f.sys.lagrangian, 16.0 * dx / 4.0, 4.0);
        benchmark::DoNotOptimize(tg.in_weight.data());
    }
}

void BM_mane_row_serial(benchmark::State& state) {
    Fixture& f = fixture(dx_of(state));
    double c = critical_value_mmc(f.tg).c;
    std::vector<StateId> sources{f.grid.node(1, f.grid.edges[1].cells / 2)};
    for (auto _ : state) {
        BarrierMatrix m = mane_potential(f.tg, c, sources);
        benchmark::DoNotOptimize(m.values.data());
    }
}

BENCHMARK(BM_step_serial)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(BM_step_parallel)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(BM_build_serial)->Arg(256)->Arg(1024);
BENCHMARK(BM_build_parallel)->Arg(256)->Arg(1024);
BENCHMARK(BM_mane_row_serial)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
