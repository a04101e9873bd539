// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cachemc/age_bounds.hpp"
#include "cachemc/graph.hpp"
#include "cachemc/types.hpp"

namespace cachemc {

/// Graph reduced for one tracked block, with back references into the source
/// graph so checker verdicts can be reported against original access points.
struct SliceResult {
    AccessGraph graph;
    /// Sliced node id -> original node id.
    std::vector<NodeId> source_node;
    /// Per sliced node: new offset -> original offset.
    std::vector<std::vector<std::uint32_t>> source_offset;

    AccessPoint original_point(AccessPoint sliced) const {
        return AccessPoint{source_node[sliced.node], source_offset[sliced.node][sliced.offset]};
    }
};

/// Reduces the graph before checking the tracked block:
///
///  1. accesses outside the tracked block's cache set are dropped from every
///     access sequence;
///  2. a node that never accesses the tracked block and whose entry may-state
///     does not contain it is removed, with every pred -> node -> succ path
///     replaced by a direct pred -> succ edge (parallel edges collapse);
///  3. nodes unreachable from the entry are dropped;
///  4. the entry is always retained; if removable it stays as a marker node
///     with an empty access sequence.
///
/// Removal is sound because a block missing from a node's entry may-state is
/// in no reachable cache state there, so the tracked state is `absent` on
/// every path through the node and accesses to other blocks keep it that way.
/// Nodes that access the tracked block are always kept; they are the points
/// where the state can leave `absent`.
SliceResult slice(const Program& program, MemoryBlock tracked, const FixpointResult& ai);

/// Graphviz rendering of a slice (block names resolved via the program).
std::string slice_to_dot(const SliceResult& sliced, const Program& program, MemoryBlock tracked);

} // namespace cachemc
