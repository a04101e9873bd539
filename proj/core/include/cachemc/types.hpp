// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cachemc {

using BlockId = std::uint32_t;
using NodeId = std::uint32_t;

/// Geometry of a set-associative instruction cache. All analyses assume the
/// LRU replacement policy and a fixed instruction size.
struct CacheConfig {
    std::uint32_t ways = 4;       ///< lines per set (associativity)
    std::uint32_t sets = 1;       ///< number of cache sets, power of two
    std::uint32_t line_size = 16; ///< bytes per cache line / memory block
    std::uint32_t inst_size = 4;  ///< bytes per instruction, divides line_size

    /// Throws std::invalid_argument when the geometry is inconsistent.
    void validate() const;

    std::uint64_t block_of_address(std::uint64_t address) const { return address / line_size; }
    std::uint32_t set_of_block(std::uint64_t block_number) const {
        return static_cast<std::uint32_t>(block_number % sets);
    }

    bool operator==(const CacheConfig&) const = default;
};

/// One memory block together with the cache set it maps to. Blocks are
/// interned in a BlockTable; the id is the index there.
struct MemoryBlock {
    BlockId id = 0;
    std::uint32_t set = 0;

    auto operator<=>(const MemoryBlock&) const = default;
};

/// Interning table for memory blocks. Keeps the printable name and the cache
/// set of every block; ids are dense and assigned in first-seen order.
class BlockTable {
  public:
    MemoryBlock intern(std::string name, std::uint32_t set = 0);
    std::optional<MemoryBlock> find(std::string_view name) const;
    MemoryBlock at(BlockId id) const;
    const std::string& name(BlockId id) const;
    void assign_set(BlockId id, std::uint32_t set);
    std::size_t size() const { return names_.size(); }

  private:
    std::vector<std::string> names_;
    std::vector<std::uint32_t> sets_;
    std::unordered_map<std::string, BlockId> index_;
};

/// Identifies one access occurrence: the graph node and the index into that
/// node's access sequence.
struct AccessPoint {
    NodeId node = 0;
    std::uint32_t offset = 0;

    auto operator<=>(const AccessPoint&) const = default;
};

enum class CacheClass : std::uint8_t {
    AlwaysHit,
    AlwaysMiss,
    Unknown,
    Dead, // the access sits on a node with no path from the entry
};

/// Which stage decided a classification.
enum class Provenance : std::uint8_t {
    AbstractInterpretation,
    ModelChecker,
};

std::string_view to_string(CacheClass c);
std::string_view to_string(Provenance p);
std::optional<CacheClass> cache_class_from_string(std::string_view s);
std::optional<Provenance> provenance_from_string(std::string_view s);

} // namespace cachemc
