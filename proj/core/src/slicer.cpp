// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cachemc/slicer.hpp"

#include <algorithm>
#include <sstream>

namespace cachemc {

namespace {

bool accesses_block(const GraphNode& node, MemoryBlock b) {
    return std::any_of(node.accesses.begin(), node.accesses.end(),
                       [&](const MemoryBlock& a) { return a.id == b.id; });
}

} // namespace

SliceResult slice(const Program& program, MemoryBlock tracked, const FixpointResult& ai) {
    const AccessGraph& graph = program.graph;
    const auto reachable = graph.reachable_from_entry();

    std::vector<bool> keep(graph.node_count(), false);
    for (NodeId n = 0; n < graph.node_count(); ++n) {
        if (!reachable[n])
            continue;
        keep[n] = accesses_block(graph.node(n), tracked) || ai.may_in_contains(n, tracked);
    }
    keep[graph.entry()] = true;
    const bool entry_is_marker = !(accesses_block(graph.node(graph.entry()), tracked) ||
                                   ai.may_in_contains(graph.entry(), tracked));

    SliceResult out;
    std::vector<NodeId> new_id(graph.node_count(), 0);
    for (NodeId n = 0; n < graph.node_count(); ++n) {
        if (!keep[n])
            continue;
        const NodeId id = out.graph.add_node(graph.node(n).name);
        new_id[n] = id;
        out.source_node.push_back(n);
        auto& offsets = out.source_offset.emplace_back();
        if (n == graph.entry() && entry_is_marker)
            continue; // marker node: the tracked state stays absent through it
        auto& accesses = out.graph.node(id).accesses;
        const auto& src = graph.node(n).accesses;
        for (std::uint32_t off = 0; off < src.size(); ++off) {
            if (src[off].set != tracked.set)
                continue;
            accesses.push_back(src[off]);
            offsets.push_back(off);
        }
    }

    // Successor closure through removed nodes: for every kept node, walk the
    // original edges and pass through anything not kept. Chains of removed
    // nodes turn into single direct edges.
    std::vector<bool> visited(graph.node_count());
    for (NodeId n = 0; n < graph.node_count(); ++n) {
        if (!keep[n])
            continue;
        std::fill(visited.begin(), visited.end(), false);
        std::vector<NodeId> stack(graph.successors(n).begin(), graph.successors(n).end());
        while (!stack.empty()) {
            const NodeId s = stack.back();
            stack.pop_back();
            if (visited[s])
                continue;
            visited[s] = true;
            if (keep[s]) {
                out.graph.add_edge(new_id[n], new_id[s]);
            } else if (reachable[s]) {
                stack.insert(stack.end(), graph.successors(s).begin(),
                             graph.successors(s).end());
            }
        }
    }

    out.graph.set_entry(new_id[graph.entry()]);
    return out;
}

std::string slice_to_dot(const SliceResult& sliced, const Program& program, MemoryBlock tracked) {
    std::ostringstream title;
    title << "slice_" << program.blocks.name(tracked.id);
    return to_dot(sliced.graph, program.blocks, title.str());
}

} // namespace cachemc
