#include <benchmark/benchmark.h>

#include "secat/dsl.hpp"
#include "secat/examples.hpp"
#include "secat/steenrod.hpp"
#include "secat/weights.hpp"

namespace {

void bm_adem_rewrite(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b)
                benchmark::DoNotOptimize(secat::steenrod::adem_rewrite({a, b, a}));
    }
}
BENCHMARK(bm_adem_rewrite)->Arg(8)->Arg(16);

void bm_retraction(benchmark::State& state) {
    auto doc = secat::dsl::parse(secat::examples::twistor_text());
    const auto& mp = *doc.find_map("q1star");
    const auto& src = doc.find_module("HP2")->compiled.module;
    const auto& tgt = doc.find_module("E1")->compiled.module;
    for (auto _ : state)
        benchmark::DoNotOptimize(secat::weights::retraction_exists(mp.compiled, src, tgt));
}
BENCHMARK(bm_retraction);

void bm_example_twistor(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(secat::examples::run_twistor());
}
BENCHMARK(bm_example_twistor);

}  // namespace

BENCHMARK_MAIN();
