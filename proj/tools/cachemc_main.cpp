// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Command line front end: parse a program description, run the may/must
// analysis plus checker refinement, and emit machine and human readable
// reports.
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cachemc/checker.hpp"
#include "cachemc/concrete.hpp"
#include "cachemc/driver.hpp"
#include "cachemc/parser.hpp"
#include "cachemc/report.hpp"
#include "cachemc/slicer.hpp"

namespace fs = std::filesystem;
using namespace cachemc;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitCeiling = 2;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

// Re-derives per-block cache sets for an overridden geometry. Address mode
// recomputes from the block's line address; symbolic mode folds the declared
// set into the new set count.
Program with_config(const Program& p, const CacheConfig& config) {
    Program out;
    out.name = p.name;
    out.mode = p.mode;
    out.config = config;
    for (BlockId id = 0; id < p.blocks.size(); ++id) {
        const std::string& name = p.blocks.name(id);
        std::uint32_t set = 0;
        if (p.mode == Program::Mode::Address) {
            std::uint64_t address = 0;
            const std::string_view digits = std::string_view(name).substr(3); // skip "@0x"
            std::from_chars(digits.data(), digits.data() + digits.size(), address, 16);
            set = config.set_of_block(config.block_of_address(address));
        } else {
            set = p.blocks.at(id).set % config.sets;
        }
        out.blocks.intern(name, set);
    }
    for (NodeId n = 0; n < p.graph.node_count(); ++n) {
        const NodeId id = out.graph.add_node(p.graph.node(n).name);
        for (const MemoryBlock& b : p.graph.node(n).accesses)
            out.graph.node(id).accesses.push_back(out.blocks.at(b.id));
    }
    for (NodeId n = 0; n < p.graph.node_count(); ++n)
        for (NodeId s : p.graph.successors(n))
            out.graph.add_edge(n, s);
    out.graph.set_entry(p.graph.entry());
    return out;
}

std::vector<BlockId> blocks_with_unknowns(const AnalysisReport& report) {
    std::vector<BlockId> ids;
    for (const AccessRecord& rec : report.accesses)
        if (rec.ai_class == CacheClass::Unknown &&
            std::find(ids.begin(), ids.end(), rec.block.id) == ids.end())
            ids.push_back(rec.block.id);
    return ids;
}

// Cross-validates the final classification against bounded path enumeration.
// Returns the number of soundness violations.
int oracle_check(const Program& p, const AnalysisReport& report, std::uint64_t bound,
                 const OracleLimits& limits) {
    const OracleResult oracle = run_path_oracle(p, bound, limits);
    int violations = 0;
    for (const AccessRecord& rec : report.accesses) {
        const OracleVerdict& truth = oracle.verdicts.at(rec.point);
        const char* complaint = nullptr;
        if (rec.final_class == CacheClass::AlwaysHit && truth.miss_witnesses > 0)
            complaint = "classified always_hit but a path misses";
        else if (rec.final_class == CacheClass::AlwaysMiss && truth.hit_witnesses > 0)
            complaint = "classified always_miss but a path hits";
        else if (rec.final_class == CacheClass::Dead &&
                 (truth.hit_witnesses > 0 || truth.miss_witnesses > 0))
            complaint = "classified dead but reached by a path";
        if (complaint) {
            ++violations;
            std::cerr << "oracle-check: " << p.graph.node(rec.point.node).name << "["
                      << rec.point.offset << "] " << p.blocks.name(rec.block.id) << ": "
                      << complaint << "\n";
        }
    }
    std::cout << "oracle-check: " << (violations == 0 ? "ok" : "FAILED") << " ("
              << (oracle.saturated ? "saturated" : "bounded") << ", "
              << oracle.states_explored << " states, ways=" << p.config.ways << ")\n";
    return violations;
}

struct AnalyzeArgs {
    std::string input;
    std::string mode = "full";
    std::vector<std::uint32_t> ways;
    std::uint32_t sets = 0;
    bool run_oracle = false;
    std::uint64_t oracle_bound = 0;
    std::uint64_t state_ceiling = CheckerLimits{}.max_states;
    std::string dump_sliced;
    std::string dump_product;
    std::string out;
    bool strict = false;
};

int run_analyze(const AnalyzeArgs& args) {
    const fs::path input(args.input);
    const Program base = parse_program(read_file(input), input.stem().string());

    std::vector<CacheConfig> configs;
    {
        CacheConfig c = base.config;
        if (args.sets != 0)
            c.sets = args.sets;
        if (args.ways.empty()) {
            configs.push_back(c);
        } else {
            for (std::uint32_t w : args.ways) {
                c.ways = w;
                configs.push_back(c);
            }
        }
        for (CacheConfig& cfg : configs)
            cfg.validate();
    }

    AnalyzeOptions options;
    options.refine = args.mode == "full";
    options.checker_limits.max_states = args.state_ceiling;

    std::vector<Program> variants;
    std::vector<AnalysisReport> runs;
    for (const CacheConfig& config : configs) {
        variants.push_back(with_config(base, config));
        runs.push_back(analyze(variants.back(), options));
    }

    std::cout << render_text(base, runs);

    const std::string json = render_json(base, runs);
    if (args.out == "-") {
        std::cout << json;
    } else {
        const fs::path out_path =
            args.out.empty() ? fs::path(input.stem().string() + ".report.json")
                             : fs::path(args.out);
        std::ofstream out(out_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write '" + out_path.string() + "'");
        out << json;
    }

    if (!args.dump_sliced.empty() || !args.dump_product.empty()) {
        std::ofstream sliced_out, product_out;
        if (!args.dump_sliced.empty())
            sliced_out.open(args.dump_sliced, std::ios::binary);
        if (!args.dump_product.empty())
            product_out.open(args.dump_product, std::ios::binary);
        for (std::size_t i = 0; i < variants.size(); ++i) {
            const Program& variant = variants[i];
            const FixpointResult ai = fixpoint(variant);
            for (BlockId id : blocks_with_unknowns(runs[i])) {
                const MemoryBlock tracked = variant.blocks.at(id);
                const SliceResult sliced = slice(variant, tracked, ai);
                if (sliced_out.is_open())
                    sliced_out << slice_to_dot(sliced, variant, tracked);
                if (product_out.is_open())
                    product_out << product_to_dot(sliced, tracked, variant.config.ways, variant,
                                                  options.checker_limits);
            }
        }
    }

    int violations = 0;
    if (args.run_oracle) {
        OracleLimits limits{args.state_ceiling};
        for (std::size_t i = 0; i < variants.size(); ++i) {
            const std::uint64_t bound =
                args.oracle_bound ? args.oracle_bound : default_oracle_bound(variants[i]);
            violations += oracle_check(variants[i], runs[i], bound, limits);
        }
    }

    bool ceiling_hit = false;
    for (const AnalysisReport& run : runs)
        for (const std::string& w : run.warnings) {
            std::cerr << "warning: " << w << "\n";
            ceiling_hit = true;
        }

    if (violations > 0)
        return kExitUsage;
    if (ceiling_hit && args.strict)
        return kExitCeiling;
    return 0;
}

struct BenchArgs {
    std::string directory;
    std::vector<std::uint32_t> ways;
    std::uint32_t sets = 0;
    std::uint64_t state_ceiling = CheckerLimits{}.max_states;
    std::string out;
};

int run_bench(const BenchArgs& args) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(args.directory))
        if (entry.path().extension() == ".cache")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    AnalyzeOptions options;
    options.checker_limits.max_states = args.state_ceiling;

    std::vector<BenchRow> rows;
    for (const fs::path& file : files) {
        try {
            const Program base = parse_program(read_file(file), file.stem().string());
            const std::vector<std::uint32_t> ways_list =
                args.ways.empty() ? std::vector<std::uint32_t>{base.config.ways} : args.ways;

            BenchRow row;
            row.program = base.name;
            row.size_blocks = base.distinct_block_count();
            for (std::uint32_t w : ways_list) {
                CacheConfig config = base.config;
                config.ways = w;
                if (args.sets != 0)
                    config.sets = args.sets;
                config.validate();
                const AnalysisReport report = analyze(with_config(base, config), options);
                row.stats.emplace_back(report.summary.un_pct, report.summary.nc_pct);
            }
            rows.push_back(std::move(row));
        } catch (const std::exception& e) {
            std::cerr << file.string() << ": " << e.what() << "\n";
        }
    }

    const std::string table = render_bench_table(args.ways, rows);
    std::cout << table;
    if (!args.out.empty()) {
        std::ofstream out(args.out, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write '" + args.out + "'");
        out << table;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Instruction cache hit/miss classifier: may/must age analysis with "
                 "model-checking refinement of the unknowns"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    CLI::App* cmd_analyze = app.add_subcommand("analyze", "Classify every access of one program");
    cmd_analyze->add_option("program", analyze_args.input, "program description file")
        ->required();
    cmd_analyze->add_option("--mode", analyze_args.mode, "ai (no refinement) or full")
        ->check(CLI::IsMember({"ai", "full"}));
    cmd_analyze->add_option("--ways", analyze_args.ways,
                            "associativity override, repeatable for sweeps");
    cmd_analyze->add_option("--sets", analyze_args.sets, "cache set count override");
    cmd_analyze->add_flag("--oracle-check", analyze_args.run_oracle,
                          "cross-validate against bounded path enumeration");
    cmd_analyze->add_option("--oracle-bound", analyze_args.oracle_bound,
                            "path length bound for --oracle-check (default: saturation)");
    cmd_analyze->add_option("--state-ceiling", analyze_args.state_ceiling,
                            "abort threshold for explored states");
    cmd_analyze->add_option("--dump-sliced", analyze_args.dump_sliced,
                            "write the per-block sliced graphs as Graphviz");
    cmd_analyze->add_option("--dump-product", analyze_args.dump_product,
                            "write the explored product automata as Graphviz");
    cmd_analyze->add_option("--out", analyze_args.out,
                            "report file path, '-' for stdout (default: <program>.report.json)");
    cmd_analyze->add_flag("--strict", analyze_args.strict,
                          "exit 2 when a state ceiling interrupts refinement");

    BenchArgs bench_args;
    CLI::App* cmd_bench = app.add_subcommand("bench", "Summary table over a program directory");
    cmd_bench->add_option("directory", bench_args.directory, "directory of .cache files")
        ->required();
    cmd_bench->add_option("--ways", bench_args.ways, "associativities to analyze, repeatable");
    cmd_bench->add_option("--sets", bench_args.sets, "cache set count override");
    cmd_bench->add_option("--state-ceiling", bench_args.state_ceiling,
                          "abort threshold for explored states");
    cmd_bench->add_option("--out", bench_args.out, "also write the table to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_analyze->parsed())
            return run_analyze(analyze_args);
        return run_bench(bench_args);
    } catch (const ParseError& e) {
        std::cerr << (cmd_analyze->parsed() ? analyze_args.input : bench_args.directory) << ":"
                  << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
