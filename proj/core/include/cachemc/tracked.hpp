// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cachemc/concrete.hpp"
#include "cachemc/types.hpp"

namespace cachemc {

/// Abstract cache state that follows a single tracked block.
///
/// Whether a block is in an LRU set only depends on how many pairwise
/// distinct blocks were accessed since it was last touched, so it suffices to
/// remember the set of blocks currently younger than the tracked one. The
/// state is either
///
///   absent      - the tracked block is not in the cache, or
///   cached(S)   - it is cached and S is exactly the set of blocks younger
///                 than it (|S| <= ways-1).
///
/// This collapses every concrete cache state of the tracked block's set into
/// at most 2^(ways-1 bounded) + 1 abstract values and loses no information
/// about the tracked block: abstraction commutes with the LRU update.
///
/// The younger set is stored sorted, so values are ordered and deduplicate
/// cheaply in reachability sets.
class TrackedState {
  public:
    TrackedState() = default;

    static TrackedState absent() { return TrackedState{}; }
    static TrackedState cached(std::vector<BlockId> younger);

    bool is_cached() const { return cached_; }
    std::span<const BlockId> younger() const { return younger_; }
    std::size_t younger_count() const { return younger_.size(); }
    bool younger_contains(BlockId b) const;

    auto operator<=>(const TrackedState&) const = default;

  private:
    bool cached_ = false;
    std::vector<BlockId> younger_; // sorted, unique, never contains the tracked block
};

/// Projection of a concrete cache state onto the tracked block: absent when
/// the block is not in its set, otherwise cached(blocks in front of it).
TrackedState abstract_state(const ConcreteCacheState& state, MemoryBlock tracked);

/// Effect of accessing `accessed` on the tracked state:
///
///   absent,    accessed == tracked  ->  cached({})
///   absent,    otherwise            ->  absent
///   cached(S), accessed == tracked  ->  cached({})
///   cached(S), accessed in S        ->  cached(S)
///   cached(S), |S| <  ways-1        ->  cached(S + accessed)
///   cached(S), |S| == ways-1        ->  absent            (tracked evicted)
///
/// Accesses that map to a different cache set leave the state unchanged.
TrackedState tracked_update(TrackedState state, MemoryBlock accessed, MemoryBlock tracked,
                            std::uint32_t ways);

/// Readable rendering such as "absent" or "{b, c}", for dumps and messages.
std::string to_string(const TrackedState& state, const BlockTable& blocks);

} // namespace cachemc
