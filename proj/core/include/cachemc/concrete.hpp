// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "cachemc/graph.hpp"
#include "cachemc/types.hpp"

namespace cachemc {

/// Exact LRU cache state. Each set is a queue of pairwise distinct blocks,
/// youngest (most recently used) first; a block's queue position is its age.
/// Missing tail entries are empty lines, so the cache fills from the young
/// end.
///
/// Note on orientation: queues here are printed and indexed youngest-first.
/// Age 0 is the most recently used block and age ways-1 the next eviction
/// candidate.
class ConcreteCacheState {
  public:
    ConcreteCacheState() = default;
    explicit ConcreteCacheState(const CacheConfig& config)
        : ConcreteCacheState(config.sets, config.ways) {}
    ConcreteCacheState(std::uint32_t sets, std::uint32_t ways);

    std::uint32_t ways() const { return ways_; }
    std::uint32_t set_count() const { return static_cast<std::uint32_t>(sets_.size()); }

    bool contains(MemoryBlock b) const;
    /// Queue position of b in its set, youngest first.
    std::optional<std::uint32_t> age_of(MemoryBlock b) const;
    /// Occupied lines of one set, youngest first.
    const std::vector<BlockId>& set_contents(std::uint32_t set) const { return sets_[set]; }

    /// Applies one access in place and reports whether it hit.
    bool touch(MemoryBlock b);

    auto operator<=>(const ConcreteCacheState&) const = default;

  private:
    std::vector<std::vector<BlockId>> sets_;
    std::uint32_t ways_ = 0;
};

/// LRU update as a value function. A present block moves to the front of its
/// set; an absent block is inserted at the front and the oldest line is
/// dropped when the set is full. Other sets are untouched.
ConcreteCacheState concrete_update(ConcreteCacheState state, MemoryBlock b);

enum class AccessOutcome : std::uint8_t { Hit, Miss };

struct TraceResult {
    std::vector<AccessOutcome> outcomes;
    ConcreteCacheState final_state;
};

/// Replays a block trace. An access is a hit exactly when the block is
/// present in its set immediately before the update.
TraceResult simulate_trace(ConcreteCacheState initial, std::span<const MemoryBlock> trace);

enum class OracleOutcome : std::uint8_t { OnlyHits, OnlyMisses, Mixed, NeverReached };

struct OracleVerdict {
    OracleOutcome outcome = OracleOutcome::NeverReached;
    std::uint64_t hit_witnesses = 0;
    std::uint64_t miss_witnesses = 0;
};

struct OracleResult {
    std::map<AccessPoint, OracleVerdict> verdicts; // every access point of the graph
    /// True when exploration closed out before the depth bound cut anything
    /// off; the verdicts are then exact for paths of any length.
    bool saturated = false;
    std::uint64_t states_explored = 0;
};

/// Exploration budget for the path oracle.
struct OracleLimits {
    std::uint64_t max_states = std::uint64_t{1} << 22;
};

class OracleLimitError : public std::runtime_error {
  public:
    explicit OracleLimitError(std::uint64_t states);
    std::uint64_t states() const { return states_; }

  private:
    std::uint64_t states_;
};

/// Ground-truth classification by path enumeration. Walks every path from the
/// entry of length <= bound nodes, simulating the cache from the empty state,
/// and aggregates per-access hit/miss outcomes. A (node, cache state) pair
/// that was already expanded is not expanded again: its downstream outcomes
/// are fully determined, so pruning it loses nothing and keeps cyclic graphs
/// tractable. Witness counts tally those deduplicated visits.
///
/// Throws OracleLimitError when the exploration exceeds limits.max_states.
OracleResult run_path_oracle(const Program& program, std::uint64_t bound,
                             const OracleLimits& limits = {});

/// Default depth bound: node count * (2^(largest per-set block population) + 1).
/// Deep enough to saturate the reachable state space at small scales.
std::uint64_t default_oracle_bound(const Program& program);

} // namespace cachemc
