// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "cachemc/slicer.hpp"
#include "cachemc/tracked.hpp"

namespace cachemc {

enum class Verdict : std::uint8_t { AllHit, AllMiss, Mixed, Unreachable };

std::string_view to_string(Verdict v);

/// Verdict for one access to the tracked block, together with the reachable
/// pre-states that decided it.
struct CheckVerdict {
    Verdict verdict = Verdict::Unreachable;
    std::set<TrackedState> pre_states;
};

struct CheckerLimits {
    std::uint64_t max_states = std::uint64_t{1} << 20;
};

class StateLimitError : public std::runtime_error {
  public:
    explicit StateLimitError(std::uint64_t states);
    std::uint64_t states() const { return states_; }

  private:
    std::uint64_t states_;
};

/// Result of one reachability pass over the product of a graph and the
/// tracked-block domain. Pre-state sets are keyed by original access points,
/// so they line up with the unsliced graph's classification records.
struct Exploration {
    /// For every access to the tracked block: the set of tracked states
    /// observed immediately before the access.
    std::map<AccessPoint, std::set<TrackedState>> pre_states;
    std::uint64_t states_explored = 0;
};

/// Breadth-first reachability from (entry, absent) over product states
/// (node, tracked state). The product is finite, so exploration terminates;
/// one pass records the pre-state sets of every access to the tracked block.
/// Throws StateLimitError when more than limits.max_states distinct product
/// states are reached.
Exploration explore_tracked(const SliceResult& sliced, MemoryBlock tracked, std::uint32_t ways,
                            const CheckerLimits& limits = {});

/// Same exploration on a plain graph (identity mapping of access points).
/// Used to validate slicing against the unsliced graph.
Exploration explore_tracked(const AccessGraph& graph, MemoryBlock tracked, std::uint32_t ways,
                            const CheckerLimits& limits = {});

/// Reachable tracked states immediately before `target`, which must be an
/// access to the tracked block (original coordinates).
std::set<TrackedState> reachable_pre_states(const SliceResult& sliced, MemoryBlock tracked,
                                            AccessPoint target, std::uint32_t ways,
                                            const CheckerLimits& limits = {});

/// Classifies one access from an exploration: AllHit when every reachable
/// pre-state has the block cached, AllMiss when it is absent in all of them,
/// Mixed when both occur and Unreachable when no path reaches the access.
CheckVerdict check_access(const Exploration& exploration, AccessPoint target);

/// Convenience wrapper running a fresh exploration for one target.
CheckVerdict check_access(const SliceResult& sliced, MemoryBlock tracked, AccessPoint target,
                          std::uint32_t ways, const CheckerLimits& limits = {});

/// Graphviz rendering of the explored product automaton for one block.
std::string product_to_dot(const SliceResult& sliced, MemoryBlock tracked, std::uint32_t ways,
                           const Program& program, const CheckerLimits& limits = {});

} // namespace cachemc
