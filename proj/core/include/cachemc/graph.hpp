// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cachemc/types.hpp"

namespace cachemc {

/// One node of the access graph: a name and the ordered sequence of memory
/// block accesses performed when the node executes.
struct GraphNode {
    std::string name;
    std::vector<MemoryBlock> accesses;
};

/// Directed graph of access sequences. Node ids are dense indices; edge lists
/// are kept sorted so that iteration order is deterministic.
class AccessGraph {
  public:
    NodeId add_node(std::string name);
    void add_edge(NodeId from, NodeId to); // duplicate edges collapse
    void set_entry(NodeId n) { entry_ = n; }

    NodeId entry() const { return entry_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const;
    std::size_t access_count() const;

    const GraphNode& node(NodeId n) const { return nodes_[n]; }
    GraphNode& node(NodeId n) { return nodes_[n]; }
    const std::vector<NodeId>& successors(NodeId n) const { return succs_[n]; }
    const std::vector<NodeId>& predecessors(NodeId n) const { return preds_[n]; }

    bool valid_point(AccessPoint p) const {
        return p.node < nodes_.size() && p.offset < nodes_[p.node].accesses.size();
    }

    /// Reachability from the entry node; index by NodeId.
    std::vector<bool> reachable_from_entry() const;
    /// Reverse postorder over the nodes reachable from the entry.
    std::vector<NodeId> reverse_postorder() const;

  private:
    std::vector<GraphNode> nodes_;
    std::vector<std::vector<NodeId>> succs_;
    std::vector<std::vector<NodeId>> preds_;
    NodeId entry_ = 0;
};

/// Keeps only the accesses that map to cache set `set`; node and edge
/// structure is unchanged. Offsets are renumbered within each node.
AccessGraph filter_by_set(const AccessGraph& graph, std::uint32_t set);

/// Graphviz rendering of an access graph, for debugging dumps.
std::string to_dot(const AccessGraph& graph, const BlockTable& blocks,
                   const std::string& title = "g");

/// A parsed and validated program: cache geometry, interned blocks and the
/// access graph. Immutable after construction by the parser; analysis stages
/// share it read-only.
struct Program {
    enum class Mode : std::uint8_t { Symbolic, Address };

    std::string name;
    CacheConfig config;
    BlockTable blocks;
    AccessGraph graph;
    Mode mode = Mode::Symbolic;

    /// Nodes with no path from the entry. They are kept in the graph and
    /// their accesses classify as Dead.
    std::vector<NodeId> unreachable_nodes() const;
    /// Number of distinct memory blocks referenced by the graph.
    std::size_t distinct_block_count() const { return blocks.size(); }
};

} // namespace cachemc
