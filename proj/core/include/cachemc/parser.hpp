// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cachemc/graph.hpp"

namespace cachemc {

/// Syntax or semantic error in a program file. Lines and columns are 1-based.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& message, std::size_t line, std::size_t column);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

/// Parses a program description.
///
/// Line-oriented format, `#` starts a comment, tokens are whitespace
/// separated:
///
///   cache ways=<int> sets=<int> line=<int> inst=<int>
///   entry <nodeid>
///   node <nodeid> <blockref>*
///   bb <nodeid> start=@<hex> count=<int>
///   edge <nodeid> <nodeid>
///   setof <blockid> <int>
///
/// A blockref is either a symbolic block name (`a`, `b0`) or `@<hex
/// address>`; a file uses one of the two modes throughout. `bb` lines belong
/// to address mode and expand into chains of single-access nodes. `setof`
/// assigns a cache set to a symbolic block (default 0).
Program parse_program(std::string_view text, std::string name = "");

/// Renders a program back into the file format. parse_program(
/// serialize_program(p)) reproduces p for every validated program.
std::string serialize_program(const Program& program);

/// Structural equality used by the round-trip tests: compares configuration,
/// entry, node names, access sequences (by block name and set) and edges.
bool equivalent(const Program& a, const Program& b);

/// A straight-line basic block placed in memory.
struct BasicBlockSpec {
    std::string name;
    std::uint64_t start = 0;   // byte address of the first instruction
    std::uint32_t count = 0;   // number of instructions, >= 1
};

/// Splits basic blocks into chains of nodes holding exactly one memory block
/// access each. A block of n instructions starting at address A covers the
/// memory blocks floor(A/line) .. floor((A + n*inst - 1)/line), in order.
/// Edges are reattached at chain heads and tails. Throws ParseError on
/// misaligned addresses or zero instruction counts.
AccessGraph split_basic_blocks(const std::vector<BasicBlockSpec>& blocks,
                               const std::vector<std::pair<std::string, std::string>>& edges,
                               const std::string& entry, const CacheConfig& config,
                               BlockTable& table);

} // namespace cachemc
