// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cachemc/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "cachemc/age_bounds.hpp"
#include "cachemc/slicer.hpp"

namespace cachemc {

AnalysisReport analyze(const Program& program, const AnalyzeOptions& options) {
    AnalysisReport report;
    report.program = program.name;
    report.config = program.config;

    const AccessGraph& graph = program.graph;
    const auto reachable = graph.reachable_from_entry();
    const FixpointResult ai = fixpoint(program);

    std::map<AccessPoint, std::size_t> record_index;
    for (NodeId n = 0; n < graph.node_count(); ++n) {
        for (std::uint32_t off = 0; off < graph.node(n).accesses.size(); ++off) {
            AccessRecord rec;
            rec.point = AccessPoint{n, off};
            rec.block = graph.node(n).accesses[off];
            if (!reachable[n]) {
                rec.ai_class = CacheClass::Dead;
            } else {
                rec.ai_class = classify_access(ai.before(rec.point), rec.block);
            }
            rec.final_class = rec.ai_class;
            rec.provenance = Provenance::AbstractInterpretation;
            record_index.emplace(rec.point, report.accesses.size());
            report.accesses.push_back(rec);
        }
    }

    if (options.refine) {
        // Group the unknowns per block: one slice and one reachability pass
        // answers every unknown access to that block.
        std::map<BlockId, std::vector<AccessPoint>> unknown_points;
        for (const AccessRecord& rec : report.accesses)
            if (rec.ai_class == CacheClass::Unknown)
                unknown_points[rec.block.id].push_back(rec.point);

        for (const auto& [block_id, points] : unknown_points) {
            const MemoryBlock tracked = program.blocks.at(block_id);
            const SliceResult sliced = slice(program, tracked, ai);
            Exploration exploration;
            try {
                exploration = explore_tracked(sliced, tracked, program.config.ways,
                                              options.checker_limits);
            } catch (const StateLimitError& e) {
                report.warnings.push_back("checker state ceiling hit while tracking block '" +
                                          program.blocks.name(block_id) + "' (" +
                                          std::to_string(e.states()) +
                                          " states); its unknown accesses were left unrefined");
                continue;
            }
            for (const AccessPoint& p : points) {
                const CheckVerdict verdict = check_access(exploration, p);
                AccessRecord& rec = report.accesses[record_index.at(p)];
                rec.provenance = Provenance::ModelChecker;
                switch (verdict.verdict) {
                case Verdict::AllHit: rec.final_class = CacheClass::AlwaysHit; break;
                case Verdict::AllMiss: rec.final_class = CacheClass::AlwaysMiss; break;
                case Verdict::Mixed: rec.final_class = CacheClass::Unknown; break;
                case Verdict::Unreachable: rec.final_class = CacheClass::Dead; break;
                }
            }
        }
    }

    ReportSummary& s = report.summary;
    for (const AccessRecord& rec : report.accesses) {
        ++s.total_accesses;
        if (rec.final_class == CacheClass::Dead) {
            ++s.dead_accesses;
            continue;
        }
        switch (rec.ai_class) {
        case CacheClass::AlwaysHit: ++s.ai_hits; break;
        case CacheClass::AlwaysMiss: ++s.ai_misses; break;
        case CacheClass::Unknown: ++s.ai_unknown; break;
        case CacheClass::Dead: break;
        }
        if (rec.ai_class == CacheClass::Unknown) {
            if (rec.final_class == CacheClass::AlwaysHit)
                ++s.refined_hits;
            else if (rec.final_class == CacheClass::AlwaysMiss)
                ++s.refined_misses;
            else
                ++s.final_unknown;
        }
    }
    s.analyzed_accesses = s.total_accesses - s.dead_accesses;
    const auto [un, nc] = compute_stats(report);
    s.un_pct = un;
    s.nc_pct = nc;
    return report;
}

std::pair<double, double> compute_stats(const AnalysisReport& report) {
    std::uint64_t analyzed = 0, unknown = 0, refined = 0;
    for (const AccessRecord& rec : report.accesses) {
        if (rec.final_class == CacheClass::Dead)
            continue;
        ++analyzed;
        if (rec.ai_class != CacheClass::Unknown)
            continue;
        ++unknown;
        if (rec.final_class == CacheClass::AlwaysHit || rec.final_class == CacheClass::AlwaysMiss)
            ++refined;
    }
    const double un = analyzed == 0 ? 0.0 : 100.0 * static_cast<double>(unknown) /
                                                static_cast<double>(analyzed);
    const double nc = unknown == 0 ? 0.0 : 100.0 * static_cast<double>(refined) /
                                               static_cast<double>(unknown);
    return {un, nc};
}

std::string format_pct(double pct) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", pct);
    return buf;
}

} // namespace cachemc
