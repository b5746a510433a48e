#include <benchmark/benchmark.h>

#include <sstream>

#include "thickfold/pipeline.hpp"

namespace {

// n-face accordion strip on [0, n] x [0, 1], identity layer order.
std::string accordion_json(int n) {
    std::ostringstream os;
    os << "{\"vertices\": [";
    for (int i = 0; i <= n; ++i) os << (i ? ", " : "") << "[" << i << ", 0]";
    for (int i = n; i >= 0; --i) os << ", [" << i << ", 1]";
    os << "], \"edges\": [";
    bool first = true;
    auto edge = [&](int a, int b, const char* kind) {
        os << (first ? "" : ", ") << "{\"v\": [" << a << ", " << b << "], \"kind\": \"" << kind
           << "\"}";
        first = false;
    };
    for (int i = 0; i < n; ++i) edge(i, i + 1, "boundary");
    edge(n, n + 1, "boundary");
    for (int i = n + 1; i < 2 * n + 1; ++i) edge(i, i + 1, "boundary");
    edge(2 * n + 1, 0, "boundary");
    for (int i = 1; i < n; ++i) edge(i, 2 * n + 1 - i, "crease");
    os << "], \"faces\": [";
    for (int i = 0; i < n; ++i)
        os << (i ? ", " : "") << "[" << i << ", " << i + 1 << ", " << 2 * n - i << ", "
           << 2 * n + 1 - i << "]";
    os << "], \"layer_order\": [";
    for (int i = 0; i < n; ++i) os << (i ? ", " : "") << i;
    os << "]}";
    return os.str();
}

void bench_accordion_thicken(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    thickfold::ParsedDocument doc = thickfold::parse_pattern(accordion_json(n));
    thickfold::ScaleRequest scale;
    for (auto _ : state) {
        auto run = thickfold::run_thicken(doc, scale);
        benchmark::DoNotOptimize(run.pattern.reduced_faces.size());
    }
    state.SetComplexityN(n);
}

void bench_transitive_reduction(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) edges.push_back({a, b});
    for (auto _ : state) {
        auto reduced = thickfold::transitive_reduction(n, edges);
        benchmark::DoNotOptimize(reduced.size());
    }
    state.SetComplexityN(n);
}

}  // namespace

BENCHMARK(bench_accordion_thicken)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Complexity();
BENCHMARK(bench_transitive_reduction)->Arg(16)->Arg(64)->Arg(256)->Complexity();

BENCHMARK_MAIN();
