// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "cachemc/checker.hpp"
#include "cachemc/concrete.hpp"
#include "cachemc/driver.hpp"
#include "cachemc/slicer.hpp"

using namespace cachemc;

namespace {

// Chain of join-loss diamonds over a rotating pool of blocks, the pattern
// the checker exists for. Six nodes and one unknown-producing join each.
Program diamond_chain(int diamonds) {
    Program p;
    p.config = CacheConfig{4, 1, 16, 4};
    p.name = "diamond_chain";
    const int pool = 8;
    auto block = [&](int i) { return p.blocks.intern("b" + std::to_string(i % pool), 0); };

    NodeId prev_tail = 0;
    for (int d = 0; d < diamonds; ++d) {
        const std::string suffix = "_" + std::to_string(d);
        const NodeId head = p.graph.add_node("head" + suffix);
        const NodeId deep1 = p.graph.add_node("deep1" + suffix);
        const NodeId deep2 = p.graph.add_node("deep2" + suffix);
        const NodeId deep3 = p.graph.add_node("deep3" + suffix);
        const NodeId join = p.graph.add_node("join" + suffix);
        const NodeId tail = p.graph.add_node("tail" + suffix);
        const int base = 4 * d;
        p.graph.node(head).accesses = {block(base)};
        p.graph.node(deep1).accesses = {block(base + 1)};
        p.graph.node(deep2).accesses = {block(base + 2)};
        p.graph.node(deep3).accesses = {block(base + 3)};
        p.graph.node(join).accesses = {block(base + 1)};
        p.graph.node(tail).accesses = {block(base)};
        p.graph.add_edge(head, deep1);
        p.graph.add_edge(deep1, deep2);
        p.graph.add_edge(deep2, deep3);
        p.graph.add_edge(deep3, join);
        p.graph.add_edge(head, join);
        p.graph.add_edge(join, tail);
        if (d > 0)
            p.graph.add_edge(prev_tail, head);
        prev_tail = tail;
    }
    p.graph.set_entry(0);
    return p;
}

void BM_Fixpoint(benchmark::State& state) {
    const Program p = diamond_chain(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const FixpointResult r = fixpoint(p);
        benchmark::DoNotOptimize(r.transfer_count);
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(p.graph.access_count()));
}
BENCHMARK(BM_Fixpoint)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

void BM_SliceAndExplore(benchmark::State& state) {
    const Program p = diamond_chain(static_cast<int>(state.range(0)));
    const FixpointResult ai = fixpoint(p);
    const MemoryBlock tracked = p.blocks.find("b0").value();
    for (auto _ : state) {
        const SliceResult sliced = slice(p, tracked, ai);
        const Exploration e = explore_tracked(sliced, tracked, p.config.ways);
        benchmark::DoNotOptimize(e.states_explored);
    }
}
BENCHMARK(BM_SliceAndExplore)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

void BM_AnalyzeFull(benchmark::State& state) {
    const Program p = diamond_chain(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const AnalysisReport r = analyze(p);
        benchmark::DoNotOptimize(r.summary.ai_unknown);
    }
}
BENCHMARK(BM_AnalyzeFull)->Arg(4)->Arg(16)->Arg(64);

void BM_PathOracle(benchmark::State& state) {
    const Program p = diamond_chain(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const OracleResult r = run_path_oracle(p, default_oracle_bound(p));
        benchmark::DoNotOptimize(r.states_explored);
    }
}
BENCHMARK(BM_PathOracle)->Arg(2)->Arg(4)->Arg(8);

void BM_ConcreteSimulate(benchmark::State& state) {
    BlockTable blocks;
    std::vector<MemoryBlock> trace;
    for (int i = 0; i < 4096; ++i)
        trace.push_back(blocks.intern("b" + std::to_string((i * 7) % 12), (i * 7) % 2));
    for (auto _ : state) {
        const TraceResult r = simulate_trace(ConcreteCacheState(2, 4), trace);
        benchmark::DoNotOptimize(r.outcomes.size());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trace.size()));
}
BENCHMARK(BM_ConcreteSimulate);

} // namespace

BENCHMARK_MAIN();
