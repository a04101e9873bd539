// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cachemc/types.hpp"

namespace cachemc {

namespace {

bool is_power_of_two(std::uint32_t v) { return v != 0 && (v & (v - 1)) == 0; }

} // namespace

void CacheConfig::validate() const {
    if (ways < 1)
        throw std::invalid_argument("cache ways must be >= 1");
    if (!is_power_of_two(sets))
        throw std::invalid_argument("cache sets must be a power of two");
    if (line_size < 1)
        throw std::invalid_argument("cache line size must be >= 1");
    if (inst_size < 1 || line_size % inst_size != 0)
        throw std::invalid_argument("instruction size must divide the line size");
}

MemoryBlock BlockTable::intern(std::string name, std::uint32_t set) {
    if (auto it = index_.find(name); it != index_.end())
        return MemoryBlock{it->second, sets_[it->second]};
    const auto id = static_cast<BlockId>(names_.size());
    index_.emplace(name, id);
    names_.push_back(std::move(name));
    sets_.push_back(set);
    return MemoryBlock{id, set};
}

std::optional<MemoryBlock> BlockTable::find(std::string_view name) const {
    if (auto it = index_.find(std::string(name)); it != index_.end())
        return MemoryBlock{it->second, sets_[it->second]};
    return std::nullopt;
}

MemoryBlock BlockTable::at(BlockId id) const { return MemoryBlock{id, sets_.at(id)}; }

const std::string& BlockTable::name(BlockId id) const { return names_.at(id); }

void BlockTable::assign_set(BlockId id, std::uint32_t set) { sets_.at(id) = set; }

std::string_view to_string(CacheClass c) {
    switch (c) {
    case CacheClass::AlwaysHit: return "always_hit";
    case CacheClass::AlwaysMiss: return "always_miss";
    case CacheClass::Unknown: return "unknown";
    case CacheClass::Dead: return "dead";
    }
    return "unknown";
}

std::string_view to_string(Provenance p) {
    return p == Provenance::AbstractInterpretation ? "ai" : "mc";
}

std::optional<CacheClass> cache_class_from_string(std::string_view s) {
    if (s == "always_hit")
        return CacheClass::AlwaysHit;
    if (s == "always_miss")
        return CacheClass::AlwaysMiss;
    if (s == "unknown")
        return CacheClass::Unknown;
    if (s == "dead")
        return CacheClass::Dead;
    return std::nullopt;
}

std::optional<Provenance> provenance_from_string(std::string_view s) {
    if (s == "ai")
        return Provenance::AbstractInterpretation;
    if (s == "mc")
        return Provenance::ModelChecker;
    return std::nullopt;
}

} // namespace cachemc
