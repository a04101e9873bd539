// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cachemc/checker.hpp"

#include <deque>
#include <sstream>

namespace cachemc {

StateLimitError::StateLimitError(std::uint64_t states)
    : std::runtime_error("checker exceeded its state ceiling at " + std::to_string(states) +
                         " product states"),
      states_(states) {}

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::AllHit: return "all_hit";
    case Verdict::AllMiss: return "all_miss";
    case Verdict::Mixed: return "mixed";
    case Verdict::Unreachable: return "unreachable";
    }
    return "unreachable";
}

namespace {

// Shared reachability core. `point_of` maps (node, offset) of the explored
// graph to the access point reported outward; transitions are collected only
// when `transitions` is non-null.
template <typename PointOf>
Exploration explore_impl(const AccessGraph& graph, MemoryBlock tracked, std::uint32_t ways,
                         const CheckerLimits& limits, PointOf point_of,
                         std::vector<std::tuple<NodeId, TrackedState, NodeId, TrackedState>>*
                             transitions) {
    Exploration result;

    // Register every access to the tracked block up front so unreachable
    // targets still show up, with an empty pre-state set.
    for (NodeId n = 0; n < graph.node_count(); ++n)
        for (std::uint32_t off = 0; off < graph.node(n).accesses.size(); ++off)
            if (graph.node(n).accesses[off].id == tracked.id)
                result.pre_states[point_of(n, off)];

    if (graph.node_count() == 0)
        return result;

    std::vector<std::set<TrackedState>> visited(graph.node_count());
    std::deque<std::pair<NodeId, TrackedState>> queue;
    visited[graph.entry()].insert(TrackedState::absent());
    queue.emplace_back(graph.entry(), TrackedState::absent());
    result.states_explored = 1;

    while (!queue.empty()) {
        auto [node, state] = std::move(queue.front());
        queue.pop_front();

        const TrackedState at_entry = state;
        const auto& accesses = graph.node(node).accesses;
        for (std::uint32_t off = 0; off < accesses.size(); ++off) {
            if (accesses[off].id == tracked.id)
                result.pre_states[point_of(node, off)].insert(state);
            state = tracked_update(std::move(state), accesses[off], tracked, ways);
        }
        for (NodeId succ : graph.successors(node)) {
            if (transitions)
                transitions->emplace_back(node, at_entry, succ, state);
            if (visited[succ].insert(state).second) {
                if (++result.states_explored > limits.max_states)
                    throw StateLimitError(result.states_explored);
                queue.emplace_back(succ, state);
            }
        }
    }
    return result;
}

} // namespace

Exploration explore_tracked(const SliceResult& sliced, MemoryBlock tracked, std::uint32_t ways,
                            const CheckerLimits& limits) {
    return explore_impl(
        sliced.graph, tracked, ways, limits,
        [&](NodeId n, std::uint32_t off) { return sliced.original_point(AccessPoint{n, off}); },
        nullptr);
}

Exploration explore_tracked(const AccessGraph& graph, MemoryBlock tracked, std::uint32_t ways,
                            const CheckerLimits& limits) {
    return explore_impl(
        graph, tracked, ways, limits,
        [](NodeId n, std::uint32_t off) { return AccessPoint{n, off}; }, nullptr);
}

std::set<TrackedState> reachable_pre_states(const SliceResult& sliced, MemoryBlock tracked,
                                            AccessPoint target, std::uint32_t ways,
                                            const CheckerLimits& limits) {
    const auto exploration = explore_tracked(sliced, tracked, ways, limits);
    const auto it = exploration.pre_states.find(target);
    return it == exploration.pre_states.end() ? std::set<TrackedState>{} : it->second;
}

CheckVerdict check_access(const Exploration& exploration, AccessPoint target) {
    CheckVerdict v;
    const auto it = exploration.pre_states.find(target);
    if (it == exploration.pre_states.end() || it->second.empty()) {
        v.verdict = Verdict::Unreachable;
        return v;
    }
    v.pre_states = it->second;
    bool any_cached = false, any_absent = false;
    for (const TrackedState& s : v.pre_states)
        (s.is_cached() ? any_cached : any_absent) = true;
    if (any_cached && any_absent)
        v.verdict = Verdict::Mixed;
    else if (any_cached)
        v.verdict = Verdict::AllHit;
    else
        v.verdict = Verdict::AllMiss;
    return v;
}

CheckVerdict check_access(const SliceResult& sliced, MemoryBlock tracked, AccessPoint target,
                          std::uint32_t ways, const CheckerLimits& limits) {
    return check_access(explore_tracked(sliced, tracked, ways, limits), target);
}

std::string product_to_dot(const SliceResult& sliced, MemoryBlock tracked, std::uint32_t ways,
                           const Program& program, const CheckerLimits& limits) {
    std::vector<std::tuple<NodeId, TrackedState, NodeId, TrackedState>> transitions;
    explore_impl(
        sliced.graph, tracked, ways, limits,
        [&](NodeId n, std::uint32_t off) { return sliced.original_point(AccessPoint{n, off}); },
        &transitions);

    auto label = [&](NodeId n, const TrackedState& s) {
        std::ostringstream os;
        os << sliced.graph.node(n).name << " | " << to_string(s, program.blocks);
        return os.str();
    };
    std::ostringstream os;
    os << "digraph \"product_" << program.blocks.name(tracked.id) << "\" {\n";
    os << "  node [shape=record];\n";
    std::set<std::string> emitted;
    auto emit_node = [&](NodeId n, const TrackedState& s) {
        const std::string l = label(n, s);
        if (emitted.insert(l).second)
            os << "  \"" << l << "\";\n";
    };
    for (const auto& [from, from_state, to, to_state] : transitions) {
        emit_node(from, from_state);
        emit_node(to, to_state);
        os << "  \"" << label(from, from_state) << "\" -> \"" << label(to, to_state) << "\";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace cachemc
