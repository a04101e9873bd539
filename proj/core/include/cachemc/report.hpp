// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "cachemc/driver.hpp"
#include "cachemc/graph.hpp"

namespace cachemc {

/// One classification row of a serialized report.
struct ReportRow {
    std::string node;
    std::uint32_t offset = 0;
    std::string block;
    std::uint32_t set = 0;
    CacheClass ai_class = CacheClass::Unknown;
    CacheClass final_class = CacheClass::Unknown;
    Provenance provenance = Provenance::AbstractInterpretation;
};

/// Deserialized form of one analysis run (one cache configuration).
struct ParsedRun {
    CacheConfig config;
    std::vector<ReportRow> rows;
    ReportSummary summary;
    std::vector<std::string> warnings;
};

struct ParsedReport {
    std::string program;
    std::vector<ParsedRun> runs;
};

/// JSON document for a set of runs of one program. Output is byte-stable:
/// keys and rows are emitted in a fixed order.
std::string render_json(const Program& program, std::span<const AnalysisReport> runs);

/// Parses a document produced by render_json. Throws std::runtime_error on
/// malformed input.
ParsedReport parse_report_json(std::string_view text);

/// Aligned, human readable per-access table plus a summary line per run.
std::string render_text(const Program& program, std::span<const AnalysisReport> runs);

/// One row of the multi-program summary table.
struct BenchRow {
    std::string program;
    std::size_t size_blocks = 0; // program size in memory blocks
    std::vector<std::pair<double, double>> stats; // (un_pct, nc_pct) per configuration
};

/// Table 1 style summary: one row per program, one Un/Nc column pair per
/// associativity.
std::string render_bench_table(std::span<const std::uint32_t> ways_list,
                               std::span<const BenchRow> rows);

} // namespace cachemc
