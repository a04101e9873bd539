// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cachemc/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace cachemc {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json summary_json(const ReportSummary& s) {
    ordered_json j;
    j["total_accesses"] = s.total_accesses;
    j["dead_accesses"] = s.dead_accesses;
    j["analyzed_accesses"] = s.analyzed_accesses;
    j["ai_hits"] = s.ai_hits;
    j["ai_misses"] = s.ai_misses;
    j["ai_unknown"] = s.ai_unknown;
    j["refined_hits"] = s.refined_hits;
    j["refined_misses"] = s.refined_misses;
    j["final_unknown"] = s.final_unknown;
    j["un_pct"] = format_pct(s.un_pct);
    j["nc_pct"] = format_pct(s.nc_pct);
    return j;
}

ReportSummary summary_from_json(const ordered_json& j) {
    ReportSummary s;
    s.total_accesses = j.at("total_accesses").get<std::uint64_t>();
    s.dead_accesses = j.at("dead_accesses").get<std::uint64_t>();
    s.analyzed_accesses = j.at("analyzed_accesses").get<std::uint64_t>();
    s.ai_hits = j.at("ai_hits").get<std::uint64_t>();
    s.ai_misses = j.at("ai_misses").get<std::uint64_t>();
    s.ai_unknown = j.at("ai_unknown").get<std::uint64_t>();
    s.refined_hits = j.at("refined_hits").get<std::uint64_t>();
    s.refined_misses = j.at("refined_misses").get<std::uint64_t>();
    s.final_unknown = j.at("final_unknown").get<std::uint64_t>();
    s.un_pct = std::stod(j.at("un_pct").get<std::string>());
    s.nc_pct = std::stod(j.at("nc_pct").get<std::string>());
    return s;
}

ordered_json config_json(const CacheConfig& c) {
    ordered_json j;
    j["ways"] = c.ways;
    j["sets"] = c.sets;
    j["line"] = c.line_size;
    j["inst"] = c.inst_size;
    return j;
}

CacheConfig config_from_json(const ordered_json& j) {
    CacheConfig c;
    c.ways = j.at("ways").get<std::uint32_t>();
    c.sets = j.at("sets").get<std::uint32_t>();
    c.line_size = j.at("line").get<std::uint32_t>();
    c.inst_size = j.at("inst").get<std::uint32_t>();
    return c;
}

} // namespace

std::string render_json(const Program& program, std::span<const AnalysisReport> runs) {
    ordered_json doc;
    doc["program"] = program.name;
    doc["runs"] = ordered_json::array();
    for (const AnalysisReport& run : runs) {
        ordered_json r;
        r["cache"] = config_json(run.config);
        r["accesses"] = ordered_json::array();
        for (const AccessRecord& rec : run.accesses) {
            ordered_json a;
            a["node"] = program.graph.node(rec.point.node).name;
            a["offset"] = rec.point.offset;
            a["block"] = program.blocks.name(rec.block.id);
            a["set"] = rec.block.set;
            a["ai_class"] = to_string(rec.ai_class);
            a["final_class"] = to_string(rec.final_class);
            a["provenance"] = to_string(rec.provenance);
            r["accesses"].push_back(std::move(a));
        }
        r["summary"] = summary_json(run.summary);
        r["warnings"] = run.warnings;
        doc["runs"].push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
}

ParsedReport parse_report_json(std::string_view text) {
    const auto doc = ordered_json::parse(text);
    ParsedReport report;
    report.program = doc.at("program").get<std::string>();
    for (const auto& r : doc.at("runs")) {
        ParsedRun run;
        run.config = config_from_json(r.at("cache"));
        for (const auto& a : r.at("accesses")) {
            ReportRow row;
            row.node = a.at("node").get<std::string>();
            row.offset = a.at("offset").get<std::uint32_t>();
            row.block = a.at("block").get<std::string>();
            row.set = a.at("set").get<std::uint32_t>();
            const auto ai = cache_class_from_string(a.at("ai_class").get<std::string>());
            const auto fin = cache_class_from_string(a.at("final_class").get<std::string>());
            const auto prov = provenance_from_string(a.at("provenance").get<std::string>());
            if (!ai || !fin || !prov)
                throw std::runtime_error("report: unknown classification value");
            row.ai_class = *ai;
            row.final_class = *fin;
            row.provenance = *prov;
            run.rows.push_back(std::move(row));
        }
        run.summary = summary_from_json(r.at("summary"));
        run.warnings = r.at("warnings").get<std::vector<std::string>>();
        report.runs.push_back(std::move(run));
    }
    return report;
}

std::string render_text(const Program& program, std::span<const AnalysisReport> runs) {
    std::ostringstream os;
    os << "program " << program.name << ": " << program.graph.node_count() << " nodes, "
       << program.graph.access_count() << " accesses, " << program.blocks.size() << " blocks\n";
    for (const AnalysisReport& run : runs) {
        const CacheConfig& c = run.config;
        os << "\ncache ways=" << c.ways << " sets=" << c.sets << " line=" << c.line_size
           << " inst=" << c.inst_size << "\n";

        std::size_t name_width = 8;
        for (const AccessRecord& rec : run.accesses) {
            const std::string where = program.graph.node(rec.point.node).name + "[" +
                                      std::to_string(rec.point.offset) + "]";
            name_width = std::max(name_width, where.size() + 2);
        }
        os << "  " << std::left << std::setw(static_cast<int>(name_width)) << "access"
           << std::setw(8) << "block" << std::setw(5) << "set" << std::setw(13) << "may/must"
           << std::setw(13) << "final" << "by\n";
        for (const AccessRecord& rec : run.accesses) {
            std::string where = program.graph.node(rec.point.node).name + "[" +
                                std::to_string(rec.point.offset) + "]";
            os << "  " << std::setw(static_cast<int>(name_width)) << where << std::setw(8)
               << program.blocks.name(rec.block.id) << std::setw(5) << rec.block.set
               << std::setw(13) << to_string(rec.ai_class) << std::setw(13)
               << to_string(rec.final_class) << to_string(rec.provenance) << "\n";
        }
        const ReportSummary& s = run.summary;
        os << "summary: accesses=" << s.total_accesses << " dead=" << s.dead_accesses
           << " ai_unknown=" << s.ai_unknown << " refined=" << s.refined_hits + s.refined_misses
           << " (hit=" << s.refined_hits << " miss=" << s.refined_misses << ")"
           << " Un=" << format_pct(s.un_pct) << "% Nc=" << format_pct(s.nc_pct) << "%\n";
        for (const std::string& w : run.warnings)
            os << "warning: " << w << "\n";
    }
    return os.str();
}

std::string render_bench_table(std::span<const std::uint32_t> ways_list,
                               std::span<const BenchRow> rows) {
    std::ostringstream os;
    std::size_t name_width = 8;
    for (const BenchRow& row : rows)
        name_width = std::max(name_width, row.program.size() + 2);
    os << std::left << std::setw(static_cast<int>(name_width)) << "program" << std::setw(6)
       << "size";
    if (ways_list.empty()) {
        // no override requested: every program ran at its own configuration
        os << std::setw(9) << "Un" << std::setw(9) << "Nc";
    } else {
        for (std::uint32_t w : ways_list) {
            os << std::setw(9) << (std::to_string(w) + "w Un") << std::setw(9)
               << (std::to_string(w) + "w Nc");
        }
    }
    os << "\n";
    for (const BenchRow& row : rows) {
        os << std::setw(static_cast<int>(name_width)) << row.program << std::setw(6)
           << row.size_blocks;
        for (const auto& [un, nc] : row.stats)
            os << std::setw(9) << (format_pct(un) + "%") << std::setw(9) << (format_pct(nc) + "%");
        os << "\n";
    }
    return os.str();
}

} // namespace cachemc
