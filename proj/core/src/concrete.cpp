// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cachemc/concrete.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace cachemc {

ConcreteCacheState::ConcreteCacheState(std::uint32_t sets, std::uint32_t ways)
    : sets_(sets), ways_(ways) {}

bool ConcreteCacheState::contains(MemoryBlock b) const { return age_of(b).has_value(); }

std::optional<std::uint32_t> ConcreteCacheState::age_of(MemoryBlock b) const {
    const auto& q = sets_[b.set];
    const auto it = std::find(q.begin(), q.end(), b.id);
    if (it == q.end())
        return std::nullopt;
    return static_cast<std::uint32_t>(it - q.begin());
}

bool ConcreteCacheState::touch(MemoryBlock b) {
    auto& q = sets_[b.set];
    const auto it = std::find(q.begin(), q.end(), b.id);
    const bool hit = it != q.end();
    if (hit) {
        // move to front, everything formerly younger shifts one position older
        std::rotate(q.begin(), it, it + 1);
    } else {
        q.insert(q.begin(), b.id);
        if (q.size() > ways_)
            q.pop_back(); // the least recently used block is evicted
    }
    return hit;
}

ConcreteCacheState concrete_update(ConcreteCacheState state, MemoryBlock b) {
    state.touch(b);
    return state;
}

TraceResult simulate_trace(ConcreteCacheState initial, std::span<const MemoryBlock> trace) {
    TraceResult result{{}, std::move(initial)};
    result.outcomes.reserve(trace.size());
    for (const MemoryBlock& b : trace)
        result.outcomes.push_back(result.final_state.touch(b) ? AccessOutcome::Hit
                                                              : AccessOutcome::Miss);
    return result;
}

OracleLimitError::OracleLimitError(std::uint64_t states)
    : std::runtime_error("path oracle exceeded its state ceiling at " + std::to_string(states) +
                         " states"),
      states_(states) {}

OracleResult run_path_oracle(const Program& program, std::uint64_t bound,
                             const OracleLimits& limits) {
    const AccessGraph& graph = program.graph;

    struct Counts {
        std::uint64_t hits = 0;
        std::uint64_t misses = 0;
    };
    std::map<AccessPoint, Counts> counts;

    struct WorkItem {
        NodeId node;
        ConcreteCacheState state;
        std::uint64_t depth;
    };

    OracleResult result;
    if (graph.node_count() > 0 && bound >= 1) {
        std::vector<std::set<ConcreteCacheState>> visited(graph.node_count());
        std::deque<WorkItem> queue;
        ConcreteCacheState empty(program.config);
        visited[graph.entry()].insert(empty);
        queue.push_back(WorkItem{graph.entry(), std::move(empty), 1});
        std::uint64_t explored = 0;
        bool capped = false;

        while (!queue.empty()) {
            WorkItem item = std::move(queue.front());
            queue.pop_front();
            if (++explored > limits.max_states)
                throw OracleLimitError(explored);

            ConcreteCacheState state = std::move(item.state);
            const auto& accesses = graph.node(item.node).accesses;
            for (std::uint32_t off = 0; off < accesses.size(); ++off) {
                auto& c = counts[AccessPoint{item.node, off}];
                if (state.touch(accesses[off]))
                    ++c.hits;
                else
                    ++c.misses;
            }
            for (NodeId succ : graph.successors(item.node)) {
                if (visited[succ].contains(state))
                    continue;
                if (item.depth >= bound) {
                    // a longer path could still reach new states from here
                    capped = true;
                    continue;
                }
                visited[succ].insert(state);
                queue.push_back(WorkItem{succ, state, item.depth + 1});
            }
        }
        result.saturated = !capped;
        result.states_explored = explored;
    }

    for (NodeId n = 0; n < graph.node_count(); ++n) {
        for (std::uint32_t off = 0; off < graph.node(n).accesses.size(); ++off) {
            const AccessPoint p{n, off};
            OracleVerdict v;
            if (const auto it = counts.find(p); it != counts.end()) {
                v.hit_witnesses = it->second.hits;
                v.miss_witnesses = it->second.misses;
                if (v.hit_witnesses > 0 && v.miss_witnesses > 0)
                    v.outcome = OracleOutcome::Mixed;
                else if (v.hit_witnesses > 0)
                    v.outcome = OracleOutcome::OnlyHits;
                else
                    v.outcome = OracleOutcome::OnlyMisses;
            }
            result.verdicts.emplace(p, v);
        }
    }
    return result;
}

std::uint64_t default_oracle_bound(const Program& program) {
    std::vector<std::uint64_t> per_set(program.config.sets, 0);
    for (BlockId b = 0; b < program.blocks.size(); ++b)
        ++per_set[program.blocks.at(b).set];
    const std::uint64_t most = per_set.empty() ? 0 : *std::max_element(per_set.begin(),
                                                                       per_set.end());
    const std::uint64_t spread = most >= 40 ? std::uint64_t{1} << 40 : (std::uint64_t{1} << most);
    return program.graph.node_count() * (spread + 1);
}

} // namespace cachemc
