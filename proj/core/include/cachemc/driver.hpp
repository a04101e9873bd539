// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cachemc/checker.hpp"
#include "cachemc/graph.hpp"
#include "cachemc/types.hpp"

namespace cachemc {

/// Classification of one access occurrence, before and after refinement.
struct AccessRecord {
    AccessPoint point;
    MemoryBlock block;
    CacheClass ai_class = CacheClass::Unknown;
    CacheClass final_class = CacheClass::Unknown;
    Provenance provenance = Provenance::AbstractInterpretation;
};

struct ReportSummary {
    std::uint64_t total_accesses = 0;
    std::uint64_t dead_accesses = 0;
    std::uint64_t analyzed_accesses = 0; // total - dead
    std::uint64_t ai_hits = 0;
    std::uint64_t ai_misses = 0;
    std::uint64_t ai_unknown = 0;
    std::uint64_t refined_hits = 0;   // unknowns the checker turned into hits
    std::uint64_t refined_misses = 0; // unknowns the checker turned into misses
    std::uint64_t final_unknown = 0;
    double un_pct = 0.0; // % of analyzed accesses left unknown by may/must
    double nc_pct = 0.0; // % of those the checker then classified
};

struct AnalysisReport {
    std::string program;
    CacheConfig config;
    std::vector<AccessRecord> accesses; // ordered by (node, offset)
    ReportSummary summary;
    std::vector<std::string> warnings;
};

struct AnalyzeOptions {
    bool refine = true; // run the checker on may/must unknowns
    CheckerLimits checker_limits{};
};

/// Full pipeline over one program: may/must fixpoint and classification of
/// every access; then, for each block with unknown accesses, one slice and
/// one reachability pass that refines those unknowns. Accesses the abstract
/// interpretation already decided are never re-examined. A checker state
/// limit for some block leaves that block's unknowns in place and appends a
/// warning.
AnalysisReport analyze(const Program& program, const AnalyzeOptions& options = {});

/// Precision metrics of a report: percentage of analyzed accesses the
/// may/must stage left unknown, and percentage of those the checker then
/// decided. Both are 0 when the denominator is empty.
std::pair<double, double> compute_stats(const AnalysisReport& report);

/// Fixed-point rendering with one decimal, e.g. "34.6".
std::string format_pct(double pct);

} // namespace cachemc
