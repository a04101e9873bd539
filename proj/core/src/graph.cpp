// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cachemc/graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace cachemc {

NodeId AccessGraph::add_node(std::string name) {
    const auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(GraphNode{std::move(name), {}});
    succs_.emplace_back();
    preds_.emplace_back();
    return id;
}

void AccessGraph::add_edge(NodeId from, NodeId to) {
    auto insert_sorted = [](std::vector<NodeId>& v, NodeId x) {
        auto it = std::lower_bound(v.begin(), v.end(), x);
        if (it == v.end() || *it != x)
            v.insert(it, x);
    };
    insert_sorted(succs_.at(from), to);
    insert_sorted(preds_.at(to), from);
}

std::size_t AccessGraph::edge_count() const {
    std::size_t n = 0;
    for (const auto& s : succs_)
        n += s.size();
    return n;
}

std::size_t AccessGraph::access_count() const {
    std::size_t n = 0;
    for (const auto& node : nodes_)
        n += node.accesses.size();
    return n;
}

std::vector<bool> AccessGraph::reachable_from_entry() const {
    std::vector<bool> seen(nodes_.size(), false);
    if (nodes_.empty())
        return seen;
    std::vector<NodeId> stack{entry_};
    seen[entry_] = true;
    while (!stack.empty()) {
        const NodeId n = stack.back();
        stack.pop_back();
        for (NodeId s : succs_[n]) {
            if (!seen[s]) {
                seen[s] = true;
                stack.push_back(s);
            }
        }
    }
    return seen;
}

std::vector<NodeId> AccessGraph::reverse_postorder() const {
    std::vector<NodeId> order;
    if (nodes_.empty())
        return order;
    enum : char { White, Grey, Black };
    std::vector<char> color(nodes_.size(), White);
    // Iterative postorder DFS; reversing at the end gives the RPO.
    std::vector<std::pair<NodeId, std::size_t>> stack;
    stack.emplace_back(entry_, 0);
    color[entry_] = Grey;
    while (!stack.empty()) {
        auto& [n, next] = stack.back();
        if (next < succs_[n].size()) {
            const NodeId s = succs_[n][next++];
            if (color[s] == White) {
                color[s] = Grey;
                stack.emplace_back(s, 0);
            }
        } else {
            color[n] = Black;
            order.push_back(n);
            stack.pop_back();
        }
    }
    std::reverse(order.begin(), order.end());
    return order;
}

AccessGraph filter_by_set(const AccessGraph& graph, std::uint32_t set) {
    AccessGraph out;
    for (NodeId n = 0; n < graph.node_count(); ++n) {
        const auto id = out.add_node(graph.node(n).name);
        auto& accesses = out.node(id).accesses;
        for (const MemoryBlock& b : graph.node(n).accesses)
            if (b.set == set)
                accesses.push_back(b);
    }
    for (NodeId n = 0; n < graph.node_count(); ++n)
        for (NodeId s : graph.successors(n))
            out.add_edge(n, s);
    out.set_entry(graph.entry());
    return out;
}

std::string to_dot(const AccessGraph& graph, const BlockTable& blocks, const std::string& title) {
    std::ostringstream os;
    os << "digraph \"" << title << "\" {\n";
    os << "  node [shape=box];\n";
    for (NodeId n = 0; n < graph.node_count(); ++n) {
        os << "  n" << n << " [label=\"" << graph.node(n).name;
        if (!graph.node(n).accesses.empty()) {
            os << ":";
            for (const MemoryBlock& b : graph.node(n).accesses)
                os << " " << blocks.name(b.id);
        }
        os << "\"";
        if (n == graph.entry())
            os << ", penwidth=2";
        os << "];\n";
    }
    for (NodeId n = 0; n < graph.node_count(); ++n)
        for (NodeId s : graph.successors(n))
            os << "  n" << n << " -> n" << s << ";\n";
    os << "}\n";
    return os.str();
}

std::vector<NodeId> Program::unreachable_nodes() const {
    std::vector<NodeId> dead;
    const auto seen = graph.reachable_from_entry();
    for (NodeId n = 0; n < graph.node_count(); ++n)
        if (!seen[n])
            dead.push_back(n);
    return dead;
}

} // namespace cachemc
