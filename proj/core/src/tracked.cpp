// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cachemc/tracked.hpp"

#include <algorithm>
#include <sstream>

namespace cachemc {

TrackedState TrackedState::cached(std::vector<BlockId> younger) {
    std::sort(younger.begin(), younger.end());
    younger.erase(std::unique(younger.begin(), younger.end()), younger.end());
    TrackedState s;
    s.cached_ = true;
    s.younger_ = std::move(younger);
    return s;
}

bool TrackedState::younger_contains(BlockId b) const {
    return std::binary_search(younger_.begin(), younger_.end(), b);
}

TrackedState abstract_state(const ConcreteCacheState& state, MemoryBlock tracked) {
    const auto& queue = state.set_contents(tracked.set);
    const auto it = std::find(queue.begin(), queue.end(), tracked.id);
    if (it == queue.end())
        return TrackedState::absent();
    return TrackedState::cached(std::vector<BlockId>(queue.begin(), it));
}

TrackedState tracked_update(TrackedState state, MemoryBlock accessed, MemoryBlock tracked,
                            std::uint32_t ways) {
    if (accessed.set != tracked.set)
        return state; // other sets cannot change the tracked block's age
    if (accessed.id == tracked.id)
        return TrackedState::cached({});
    if (!state.is_cached())
        return state;
    if (state.younger_contains(accessed.id))
        return state;
    if (state.younger_count() < ways - 1) {
        std::vector<BlockId> younger(state.younger().begin(), state.younger().end());
        younger.push_back(accessed.id);
        return TrackedState::cached(std::move(younger));
    }
    return TrackedState::absent(); // the new block pushes the tracked one out
}

std::string to_string(const TrackedState& state, const BlockTable& blocks) {
    if (!state.is_cached())
        return "absent";
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (BlockId b : state.younger()) {
        if (!first)
            os << ", ";
        os << blocks.name(b);
        first = false;
    }
    os << "}";
    return os.str();
}

} // namespace cachemc
