// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cachemc/age_bounds.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>
#include <stdexcept>

namespace cachemc {

AgeBounds AgeBounds::from_entries(Polarity polarity, std::uint32_t ways,
                                  std::vector<Entry> entries) {
    AgeBounds out(polarity, ways);
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.block < b.block; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].age >= ways)
            throw std::invalid_argument("age bound out of range");
        if (i > 0 && entries[i].block == entries[i - 1].block)
            throw std::invalid_argument("duplicate block in age bounds");
    }
    out.entries_ = std::move(entries);
    return out;
}

std::optional<std::uint32_t> AgeBounds::bound_of(BlockId b) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), b,
                                     [](const Entry& e, BlockId id) { return e.block < id; });
    if (it == entries_.end() || it->block != b)
        return std::nullopt;
    return it->age;
}

void AgeBounds::update(BlockId b) {
    // An unmapped block is treated as aged out of the set entirely.
    const std::uint32_t prior = bound_of(b).value_or(ways_);
    std::size_t keep = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        Entry e = entries_[i];
        if (e.block != b) {
            const bool ages = polarity_ == Polarity::Must ? e.age < prior : e.age <= prior;
            if (ages)
                ++e.age;
        } else {
            e.age = 0;
        }
        if (e.age < ways_)
            entries_[keep++] = e;
    }
    entries_.resize(keep);
    if (!bound_of(b)) {
        const auto it = std::lower_bound(entries_.begin(), entries_.end(), b,
                                         [](const Entry& e, BlockId id) { return e.block < id; });
        entries_.insert(it, Entry{b, 0});
    }
}

AgeBounds AgeBounds::join(const AgeBounds& a, const AgeBounds& b) {
    assert(a.polarity_ == b.polarity_ && a.ways_ == b.ways_);
    AgeBounds out(a.polarity_, a.ways_);
    auto ia = a.entries_.begin();
    auto ib = b.entries_.begin();
    while (ia != a.entries_.end() || ib != b.entries_.end()) {
        if (ib == b.entries_.end() || (ia != a.entries_.end() && ia->block < ib->block)) {
            if (a.polarity_ == Polarity::May)
                out.entries_.push_back(*ia);
            ++ia;
        } else if (ia == a.entries_.end() || ib->block < ia->block) {
            if (a.polarity_ == Polarity::May)
                out.entries_.push_back(*ib);
            ++ib;
        } else {
            const std::uint32_t age = a.polarity_ == Polarity::May ? std::min(ia->age, ib->age)
                                                                   : std::max(ia->age, ib->age);
            out.entries_.push_back(Entry{ia->block, age});
            ++ia;
            ++ib;
        }
    }
    return out;
}

AgeBounds must_update(AgeBounds state, MemoryBlock b) {
    assert(state.polarity() == Polarity::Must);
    state.update(b.id);
    return state;
}

AgeBounds may_update(AgeBounds state, MemoryBlock b) {
    assert(state.polarity() == Polarity::May);
    state.update(b.id);
    return state;
}

AgeBounds must_join(const AgeBounds& a, const AgeBounds& b) {
    assert(a.polarity() == Polarity::Must);
    return AgeBounds::join(a, b);
}

AgeBounds may_join(const AgeBounds& a, const AgeBounds& b) {
    assert(a.polarity() == Polarity::May);
    return AgeBounds::join(a, b);
}

MayMustState MayMustState::initial(const CacheConfig& config) {
    MayMustState s;
    s.may.assign(config.sets, AgeBounds(Polarity::May, config.ways));
    s.must.assign(config.sets, AgeBounds(Polarity::Must, config.ways));
    return s;
}

void MayMustState::update(MemoryBlock b) {
    may[b.set].update(b.id);
    must[b.set].update(b.id);
}

MayMustState MayMustState::join(const MayMustState& a, const MayMustState& b) {
    MayMustState out;
    out.may.reserve(a.may.size());
    out.must.reserve(a.must.size());
    for (std::size_t s = 0; s < a.may.size(); ++s) {
        out.may.push_back(AgeBounds::join(a.may[s], b.may[s]));
        out.must.push_back(AgeBounds::join(a.must[s], b.must[s]));
    }
    return out;
}

bool FixpointResult::may_in_contains(NodeId n, MemoryBlock b) const {
    return node_in[n].has_value() && node_in[n]->may[b.set].contains(b.id);
}

FixpointResult fixpoint(const Program& program, WorklistOrder order) {
    const AccessGraph& graph = program.graph;
    FixpointResult result;
    result.node_in.resize(graph.node_count());
    result.node_out.resize(graph.node_count());
    result.access_pre.resize(graph.node_count());
    if (graph.node_count() == 0)
        return result;

    const auto rpo = graph.reverse_postorder();
    constexpr std::uint32_t unreachable = ~std::uint32_t{0};
    std::vector<std::uint32_t> rpo_index(graph.node_count(), unreachable);
    for (std::size_t i = 0; i < rpo.size(); ++i)
        rpo_index[rpo[i]] = static_cast<std::uint32_t>(i);

    const MayMustState entry_state = MayMustState::initial(program.config);

    std::set<std::pair<std::uint32_t, NodeId>> prio;
    std::deque<NodeId> fifo;
    std::vector<bool> queued(graph.node_count(), false);
    auto push = [&](NodeId n) {
        if (queued[n] || rpo_index[n] == unreachable)
            return;
        queued[n] = true;
        if (order == WorklistOrder::ReversePostorder)
            prio.emplace(rpo_index[n], n);
        else
            fifo.push_back(n);
    };
    auto pop = [&]() {
        NodeId n;
        if (order == WorklistOrder::ReversePostorder) {
            n = prio.begin()->second;
            prio.erase(prio.begin());
        } else {
            n = fifo.front();
            fifo.pop_front();
        }
        queued[n] = false;
        return n;
    };

    push(graph.entry());
    while (!prio.empty() || !fifo.empty()) {
        const NodeId n = pop();

        std::optional<MayMustState> in;
        if (n == graph.entry())
            in = entry_state;
        for (NodeId p : graph.predecessors(n)) {
            if (!result.node_out[p])
                continue;
            in = in ? MayMustState::join(*in, *result.node_out[p]) : *result.node_out[p];
        }
        if (!in)
            continue; // no predecessor has an out-state yet
        if (result.node_in[n] && *result.node_in[n] == *in)
            continue;

        MayMustState out = *in;
        for (const MemoryBlock& b : graph.node(n).accesses)
            out.update(b);
        ++result.transfer_count;

        result.node_in[n] = std::move(in);
        const bool changed = !result.node_out[n] || !(*result.node_out[n] == out);
        result.node_out[n] = std::move(out);
        if (changed)
            for (NodeId s : graph.successors(n))
                push(s);
    }

    for (NodeId n = 0; n < graph.node_count(); ++n) {
        if (!result.node_in[n])
            continue;
        MayMustState state = *result.node_in[n];
        auto& pre = result.access_pre[n];
        pre.reserve(graph.node(n).accesses.size());
        for (const MemoryBlock& b : graph.node(n).accesses) {
            pre.push_back(state);
            state.update(b);
        }
    }
    return result;
}

CacheClass classify_access(const MayMustState& pre, MemoryBlock b) {
    if (pre.must[b.set].contains(b.id))
        return CacheClass::AlwaysHit;
    if (!pre.may[b.set].contains(b.id))
        return CacheClass::AlwaysMiss;
    return CacheClass::Unknown;
}

} // namespace cachemc
