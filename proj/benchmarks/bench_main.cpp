#include <benchmark/benchmark.h>

#include "tsskew/blackscholes.hpp"
#include "tsskew/expansion.hpp"
#include "tsskew/mixed.hpp"
#include "tsskew/montecarlo.hpp"
#include "tsskew/otm.hpp"
#include "tsskew/purejump.hpp"
#include "tsskew/stable.hpp"

using namespace tsskew;

namespace {

const TemperedStableParams andersen{0.0088, 0.0044, 0.41, 1.93, 1.5};
const TemperedStableParams figure3{0.0040, 0.0013, 0.41, 1.93, 1.5};

void BM_ImpliedVol(benchmark::State& state) {
    const double price = bs_price(1.0, 1.1, 0.1, 0.25, OptionKind::call);
    for (auto _ : state) benchmark::DoNotOptimize(implied_vol(price, 1.0, 1.1, 0.1, OptionKind::call));
}
BENCHMARK(BM_ImpliedVol);

void BM_StableDensity(benchmark::State& state) {
    const StableLaw law = StableLaw::from_params(andersen);
    double x = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(density(law, x));
        x = -x;
    }
}
BENCHMARK(BM_StableDensity);

void BM_BuildPureJump(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(build_purejump(andersen));
}
BENCHMARK(BM_BuildPureJump);

void BM_BuildMixed(benchmark::State& state) {
    const StochVolSpec sv = constant_vol(0.1);
    for (auto _ : state) benchmark::DoNotOptimize(build_mixed(figure3, sv));
}
BENCHMARK(BM_BuildMixed);

void BM_OtmSkew(benchmark::State& state) {
    OtmInputs in;
    in.kappa = 0.05;
    in.levy = andersen;
    for (auto _ : state) benchmark::DoNotOptimize(otm_skew(in, 0.01));
}
BENCHMARK(BM_OtmSkew);

void BM_DigitalMc(benchmark::State& state) {
    const McModel m{ModelKind::ts, andersen, 0.0, {}};
    McConfig cfg;
    cfg.n_paths = state.range(0);
    cfg.n_threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(digital_price_mc(m, 0.1, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DigitalMc)->Arg(1 << 16)->Arg(1 << 18)->Unit(benchmark::kMillisecond);

void BM_HestonMc(benchmark::State& state) {
    HestonSpec h;
    h.kappa = 3.0;
    h.xi_volvol = 0.2;
    h.rho = -0.3;
    const McModel m{ModelKind::ts_heston, figure3, 0.0, h};
    McConfig cfg;
    cfg.n_paths = 1 << 14;
    cfg.n_threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(digital_price_mc(m, 0.1, cfg));
    state.SetItemsProcessed(state.iterations() * cfg.n_paths);
}
BENCHMARK(BM_HestonMc)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
