// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cachemc/graph.hpp"
#include "cachemc/types.hpp"

namespace cachemc {

enum class Polarity : std::uint8_t { May, Must };

/// Abstract cache set for the classical age-bound analyses.
///
/// With May polarity the state maps every possibly cached block to a lower
/// bound on its age; a block that is not mapped is certainly not in the set.
/// With Must polarity it maps every certainly cached block to an upper bound
/// on its age; an unmapped block may or may not be cached.
///
/// Entries are kept sorted by block id so states compare and hash cheaply.
class AgeBounds {
  public:
    struct Entry {
        BlockId block;
        std::uint32_t age;
        auto operator<=>(const Entry&) const = default;
    };

    AgeBounds(Polarity polarity, std::uint32_t ways) : polarity_(polarity), ways_(ways) {}

    /// Builds a state from explicit entries (any order). Throws
    /// std::invalid_argument on duplicate blocks or ages >= ways.
    static AgeBounds from_entries(Polarity polarity, std::uint32_t ways,
                                  std::vector<Entry> entries);

    Polarity polarity() const { return polarity_; }
    std::uint32_t ways() const { return ways_; }
    bool contains(BlockId b) const { return bound_of(b).has_value(); }
    std::optional<std::uint32_t> bound_of(BlockId b) const;
    std::span<const Entry> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    /// Transfer function for one access.
    ///
    /// Must: the accessed block gets bound 0; blocks whose bound was strictly
    /// below the accessed block's previous bound (ways when it was unmapped)
    /// age by one and drop out at ways.
    ///
    /// May: same shape, except that blocks tied with the accessed block's
    /// previous bound age as well. Two blocks can share a lower bound, and on
    /// a re-access the tied ones are pushed behind the touched block.
    void update(BlockId b);

    /// Control-flow join. Must keeps the blocks present on both sides with
    /// the larger bound; May keeps the union with the smaller bound.
    static AgeBounds join(const AgeBounds& a, const AgeBounds& b);

    bool operator==(const AgeBounds&) const = default;

  private:
    Polarity polarity_;
    std::uint32_t ways_;
    std::vector<Entry> entries_;
};

AgeBounds must_update(AgeBounds state, MemoryBlock b);
AgeBounds may_update(AgeBounds state, MemoryBlock b);
AgeBounds must_join(const AgeBounds& a, const AgeBounds& b);
AgeBounds may_join(const AgeBounds& a, const AgeBounds& b);

/// Combined may and must state over all cache sets.
struct MayMustState {
    std::vector<AgeBounds> may;  // indexed by set
    std::vector<AgeBounds> must; // indexed by set

    static MayMustState initial(const CacheConfig& config); // empty cache
    void update(MemoryBlock b);
    static MayMustState join(const MayMustState& a, const MayMustState& b);

    bool operator==(const MayMustState&) const = default;
};

enum class WorklistOrder : std::uint8_t { ReversePostorder, Fifo };

/// Least fixpoint of the may/must dataflow equations over a program graph.
struct FixpointResult {
    /// In and out states per node; disengaged for nodes the entry cannot reach.
    std::vector<std::optional<MayMustState>> node_in;
    std::vector<std::optional<MayMustState>> node_out;
    /// State immediately before each access, [node][offset].
    std::vector<std::vector<MayMustState>> access_pre;
    std::uint64_t transfer_count = 0;

    bool reachable(NodeId n) const { return node_in[n].has_value(); }
    const MayMustState& before(AccessPoint p) const { return access_pre[p.node][p.offset]; }
    /// Whether block b is in the may state at the entry of node n.
    bool may_in_contains(NodeId n, MemoryBlock b) const;
};

/// Worklist iteration to the least fixpoint. The in-state of a node is the
/// join over its predecessors' out-states; the entry node additionally joins
/// the empty-cache initial state. The result does not depend on the worklist
/// order.
FixpointResult fixpoint(const Program& program,
                        WorklistOrder order = WorklistOrder::ReversePostorder);

/// Hit/miss classification from the states before an access: a block in the
/// must state always hits, a block missing from the may state always misses,
/// anything else is unknown.
CacheClass classify_access(const MayMustState& pre, MemoryBlock b);

} // namespace cachemc
