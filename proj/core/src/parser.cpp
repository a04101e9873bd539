// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cachemc/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace cachemc {

namespace {

struct Token {
    std::string text;
    std::size_t line = 0;
    std::size_t col = 0;
};

[[noreturn]] void fail(const std::string& message, const Token& at) {
    throw ParseError(message, at.line, at.col);
}

[[noreturn]] void fail(const std::string& message, std::size_t line, std::size_t col = 1) {
    throw ParseError(message, line, col);
}

std::vector<std::vector<Token>> tokenize(std::string_view text) {
    std::vector<std::vector<Token>> lines;
    std::size_t line_no = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find('\n', start), text.size());
        std::string_view line = text.substr(start, end - start);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        std::vector<Token> tokens;
        std::size_t i = 0;
        while (i < line.size()) {
            if (std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
                continue;
            }
            const std::size_t tok_start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
                ++i;
            tokens.push_back(
                Token{std::string(line.substr(tok_start, i - tok_start)), line_no, tok_start + 1});
        }
        if (!tokens.empty())
            lines.push_back(std::move(tokens));
        if (end == text.size())
            break;
        start = end + 1;
        ++line_no;
    }
    return lines;
}

std::uint64_t parse_uint(const Token& tok, std::string_view what, int base = 10) {
    std::string_view s = tok.text;
    if (base == 16 && s.starts_with("0x"))
        s.remove_prefix(2);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value, base);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        fail("expected " + std::string(what) + ", got '" + tok.text + "'", tok);
    return value;
}

bool is_address_ref(const Token& tok) { return !tok.text.empty() && tok.text[0] == '@'; }

std::uint64_t parse_address(const Token& tok) {
    Token hex = tok;
    hex.text = tok.text.substr(1);
    if (hex.text.empty())
        fail("expected a hex address after '@'", tok);
    return parse_uint(hex, "hex address", 16);
}

bool valid_symbol(std::string_view s) {
    if (s.empty())
        return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
        return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

// key=value fields of cache and bb lines
std::pair<std::string, Token> split_field(const Token& tok) {
    const auto eq = tok.text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= tok.text.size())
        fail("expected key=value, got '" + tok.text + "'", tok);
    Token value = tok;
    value.text = tok.text.substr(eq + 1);
    value.col += eq + 1;
    return {tok.text.substr(0, eq), value};
}

struct NodeDirective {
    Token name;
    std::vector<Token> refs;
};

struct BbDirective {
    Token name;
    std::uint64_t start = 0;
    std::uint32_t count = 0;
};

struct EdgeDirective {
    Token from, to;
};

struct SetofDirective {
    Token block;
    Token value;
};

// Canonical name for an address-mode block: the hex address of its line start.
std::string address_block_name(std::uint64_t block_number, const CacheConfig& config) {
    std::ostringstream os;
    os << "@0x" << std::hex << block_number * config.line_size;
    return os.str();
}

} // namespace

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ":" + std::to_string(column) + ": " +
                         message),
      line_(line), column_(column) {}

Program parse_program(std::string_view text, std::string name) {
    const auto lines = tokenize(text);

    std::optional<CacheConfig> config;
    std::size_t config_line = 0;
    std::optional<Token> entry;
    std::vector<NodeDirective> node_directives;
    std::vector<BbDirective> bb_directives;
    std::vector<EdgeDirective> edge_directives;
    std::vector<SetofDirective> setof_directives;

    for (const auto& tokens : lines) {
        const Token& head = tokens.front();
        if (head.text == "cache") {
            if (config)
                fail("duplicate cache line", head);
            CacheConfig c;
            bool have_ways = false, have_sets = false;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                const auto [key, value] = split_field(tokens[i]);
                const auto v = parse_uint(value, "an integer");
                if (key == "ways") {
                    c.ways = static_cast<std::uint32_t>(v);
                    have_ways = true;
                } else if (key == "sets") {
                    c.sets = static_cast<std::uint32_t>(v);
                    have_sets = true;
                } else if (key == "line") {
                    c.line_size = static_cast<std::uint32_t>(v);
                } else if (key == "inst") {
                    c.inst_size = static_cast<std::uint32_t>(v);
                } else {
                    fail("unknown cache field '" + key + "'", tokens[i]);
                }
            }
            if (!have_ways || !have_sets)
                fail("cache line needs at least ways= and sets=", head);
            try {
                c.validate();
            } catch (const std::invalid_argument& e) {
                fail(e.what(), head);
            }
            config = c;
            config_line = head.line;
        } else if (head.text == "entry") {
            if (tokens.size() != 2)
                fail("entry takes exactly one node id", head);
            if (entry)
                fail("duplicate entry line", head);
            entry = tokens[1];
        } else if (head.text == "node") {
            if (tokens.size() < 2)
                fail("node needs a name", head);
            NodeDirective d;
            d.name = tokens[1];
            d.refs.assign(tokens.begin() + 2, tokens.end());
            node_directives.push_back(std::move(d));
        } else if (head.text == "bb") {
            if (tokens.size() != 4)
                fail("bb needs a name, start=@<hex> and count=<int>", head);
            BbDirective d;
            d.name = tokens[1];
            bool have_start = false, have_count = false;
            for (std::size_t i = 2; i < 4; ++i) {
                const auto [key, value] = split_field(tokens[i]);
                if (key == "start") {
                    if (!is_address_ref(value))
                        fail("start must be @<hex address>", value);
                    d.start = parse_address(value);
                    have_start = true;
                } else if (key == "count") {
                    d.count = static_cast<std::uint32_t>(parse_uint(value, "an integer"));
                    have_count = true;
                } else {
                    fail("unknown bb field '" + key + "'", tokens[i]);
                }
            }
            if (!have_start || !have_count)
                fail("bb needs start= and count=", head);
            if (d.count < 1)
                fail("bb count must be >= 1", head);
            bb_directives.push_back(std::move(d));
        } else if (head.text == "edge") {
            if (tokens.size() != 3)
                fail("edge takes exactly two node ids", head);
            edge_directives.push_back(EdgeDirective{tokens[1], tokens[2]});
        } else if (head.text == "setof") {
            if (tokens.size() != 3)
                fail("setof takes a block id and a set index", head);
            setof_directives.push_back(SetofDirective{tokens[1], tokens[2]});
        } else {
            fail("unknown directive '" + head.text + "'", head);
        }
    }

    if (!config)
        fail("missing cache line", 1);
    if (!entry)
        fail("missing entry line", config_line);
    if (node_directives.empty() && bb_directives.empty())
        fail("program has no nodes", config_line);

    Program program;
    program.name = std::move(name);
    program.config = *config;

    // Block reference mode: fixed by the first blockref or bb line seen.
    std::optional<Program::Mode> mode;
    if (!bb_directives.empty())
        mode = Program::Mode::Address;
    auto require_mode = [&](Program::Mode m, const Token& at) {
        if (mode && *mode != m)
            fail("file mixes symbolic and address block references", at);
        mode = m;
    };

    std::unordered_map<std::string, NodeId> node_ids;
    // Where edges attach for multi-node expansions (chain head and tail).
    std::unordered_map<std::string, std::pair<NodeId, NodeId>> spans;

    auto declare_node = [&](const Token& name_tok) -> NodeId {
        if (node_ids.contains(name_tok.text))
            fail("duplicate node '" + name_tok.text + "'", name_tok);
        const NodeId id = program.graph.add_node(name_tok.text);
        node_ids.emplace(name_tok.text, id);
        return id;
    };

    for (const auto& d : node_directives) {
        const NodeId id = declare_node(d.name);
        for (const Token& ref : d.refs) {
            MemoryBlock block;
            if (is_address_ref(ref)) {
                require_mode(Program::Mode::Address, ref);
                const std::uint64_t addr = parse_address(ref);
                const std::uint64_t block_num = program.config.block_of_address(addr);
                block = program.blocks.intern(address_block_name(block_num, program.config),
                                              program.config.set_of_block(block_num));
            } else {
                require_mode(Program::Mode::Symbolic, ref);
                if (!valid_symbol(ref.text))
                    fail("invalid block name '" + ref.text + "'", ref);
                block = program.blocks.intern(ref.text, 0);
            }
            program.graph.node(id).accesses.push_back(block);
        }
        spans.emplace(d.name.text, std::pair{id, id});
    }

    for (const auto& d : bb_directives) {
        if (d.start % program.config.inst_size != 0)
            fail("bb start address is not aligned to the instruction size", d.name);
        if (node_ids.contains(d.name.text))
            fail("duplicate node '" + d.name.text + "'", d.name);
        const std::uint64_t first = program.config.block_of_address(d.start);
        const std::uint64_t last = program.config.block_of_address(
            d.start + std::uint64_t{d.count} * program.config.inst_size - 1);
        NodeId head = 0, tail = 0;
        for (std::uint64_t blk = first; blk <= last; ++blk) {
            std::string node_name = d.name.text;
            if (blk != first)
                node_name += "." + std::to_string(blk - first);
            if (node_ids.contains(node_name))
                fail("expanded node '" + node_name + "' collides with an existing node", d.name);
            const NodeId id = program.graph.add_node(node_name);
            node_ids.emplace(node_name, id);
            program.graph.node(id).accesses.push_back(program.blocks.intern(
                address_block_name(blk, program.config), program.config.set_of_block(blk)));
            if (blk == first)
                head = id;
            else
                program.graph.add_edge(tail, id);
            tail = id;
        }
        spans.emplace(d.name.text, std::pair{head, tail});
    }

    for (const auto& d : setof_directives) {
        if (mode == Program::Mode::Address)
            fail("setof is only valid with symbolic block names", d.block);
        const auto block = program.blocks.find(d.block.text);
        if (!block)
            fail("setof names unknown block '" + d.block.text + "'", d.block);
        const auto set = parse_uint(d.value, "a set index");
        if (set >= program.config.sets)
            fail("set index " + d.value.text + " is out of range", d.value);
        program.blocks.assign_set(block->id, static_cast<std::uint32_t>(set));
    }
    // setof may retarget blocks after the accesses were recorded
    for (NodeId n = 0; n < program.graph.node_count(); ++n)
        for (MemoryBlock& b : program.graph.node(n).accesses)
            b = program.blocks.at(b.id);

    auto lookup_span = [&](const Token& tok) {
        const auto it = spans.find(tok.text);
        if (it == spans.end())
            fail("unknown node '" + tok.text + "'", tok);
        return it->second;
    };

    for (const auto& d : edge_directives) {
        const auto [from_head, from_tail] = lookup_span(d.from);
        const auto [to_head, to_tail] = lookup_span(d.to);
        (void)from_head;
        (void)to_tail;
        program.graph.add_edge(from_tail, to_head);
    }

    program.graph.set_entry(lookup_span(*entry).first);
    program.mode = mode.value_or(Program::Mode::Symbolic);
    return program;
}

std::string serialize_program(const Program& program) {
    std::ostringstream os;
    const CacheConfig& c = program.config;
    os << "cache ways=" << c.ways << " sets=" << c.sets << " line=" << c.line_size
       << " inst=" << c.inst_size << "\n";
    os << "entry " << program.graph.node(program.graph.entry()).name << "\n";
    for (NodeId n = 0; n < program.graph.node_count(); ++n) {
        os << "node " << program.graph.node(n).name;
        for (const MemoryBlock& b : program.graph.node(n).accesses)
            os << " " << program.blocks.name(b.id);
        os << "\n";
    }
    if (program.mode == Program::Mode::Symbolic) {
        for (BlockId b = 0; b < program.blocks.size(); ++b)
            os << "setof " << program.blocks.name(b) << " " << program.blocks.at(b).set << "\n";
    }
    for (NodeId n = 0; n < program.graph.node_count(); ++n)
        for (NodeId s : program.graph.successors(n))
            os << "edge " << program.graph.node(n).name << " " << program.graph.node(s).name
               << "\n";
    return os.str();
}

bool equivalent(const Program& a, const Program& b) {
    if (a.config != b.config || a.mode != b.mode)
        return false;
    if (a.graph.node_count() != b.graph.node_count())
        return false;
    if (a.graph.node(a.graph.entry()).name != b.graph.node(b.graph.entry()).name)
        return false;
    std::unordered_map<std::string, NodeId> b_nodes;
    for (NodeId n = 0; n < b.graph.node_count(); ++n)
        b_nodes.emplace(b.graph.node(n).name, n);
    for (NodeId n = 0; n < a.graph.node_count(); ++n) {
        const auto it = b_nodes.find(a.graph.node(n).name);
        if (it == b_nodes.end())
            return false;
        const GraphNode& an = a.graph.node(n);
        const GraphNode& bn = b.graph.node(it->second);
        if (an.accesses.size() != bn.accesses.size())
            return false;
        for (std::size_t i = 0; i < an.accesses.size(); ++i) {
            if (a.blocks.name(an.accesses[i].id) != b.blocks.name(bn.accesses[i].id))
                return false;
            if (an.accesses[i].set != bn.accesses[i].set)
                return false;
        }
        std::vector<std::string> a_succ, b_succ;
        for (NodeId s : a.graph.successors(n))
            a_succ.push_back(a.graph.node(s).name);
        for (NodeId s : b.graph.successors(it->second))
            b_succ.push_back(b.graph.node(s).name);
        std::sort(a_succ.begin(), a_succ.end());
        std::sort(b_succ.begin(), b_succ.end());
        if (a_succ != b_succ)
            return false;
    }
    return true;
}

AccessGraph split_basic_blocks(const std::vector<BasicBlockSpec>& blocks,
                               const std::vector<std::pair<std::string, std::string>>& edges,
                               const std::string& entry, const CacheConfig& config,
                               BlockTable& table) {
    std::ostringstream os;
    os << "cache ways=" << config.ways << " sets=" << config.sets << " line=" << config.line_size
       << " inst=" << config.inst_size << "\n";
    os << "entry " << entry << "\n";
    for (const auto& bb : blocks) {
        os << "bb " << bb.name << " start=@0x" << std::hex << bb.start << std::dec
           << " count=" << bb.count << "\n";
    }
    for (const auto& [from, to] : edges)
        os << "edge " << from << " " << to << "\n";
    Program expanded = parse_program(os.str());
    table = std::move(expanded.blocks);
    return std::move(expanded.graph);
}

} // namespace cachemc
