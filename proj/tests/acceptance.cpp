// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Each criterion prints one PASS/FAIL line; run with
// --criterion N for a single one. Exit status 0 only if everything passed.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "cachemc/checker.hpp"
#include "cachemc/driver.hpp"
#include "cachemc/parser.hpp"
#include "cachemc/slicer.hpp"
#include "support/builders.hpp"
#include "support/corpus_checks.hpp"
#include "support/random_programs.hpp"

using namespace cachemc;
namespace ct = cachemc::testing;

namespace {

struct Outcome {
    bool passed = true;
    std::vector<std::string> details;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            details.push_back(what);
        }
    }
};

std::vector<Program> make_corpus(std::size_t count, bool cyclic) {
    std::vector<Program> corpus;
    corpus.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::mt19937 rng(static_cast<std::uint32_t>((cyclic ? 90000 : 1000) + i));
        ct::RandomSpec spec;
        spec.max_nodes = 12;
        spec.max_accesses_per_node = 3;
        spec.block_universe = 6;
        spec.ways = (i % 2) ? 4 : 2;
        spec.sets = (i % 3 == 0) ? 2 : 1;
        spec.cyclic = cyclic;
        corpus.push_back(ct::random_program(rng, spec));
    }
    return corpus;
}

std::string render_bounds(const AgeBounds& s, const BlockTable& blocks) {
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (const auto& e : s.entries()) {
        if (!first)
            os << ", ";
        os << blocks.name(e.block) << "@" << e.age;
        first = false;
    }
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------- criterion 1

Outcome golden_diamond() {
    Outcome out;
    const auto started = std::chrono::steady_clock::now();

    const Program p = ct::diamond_program();
    const FixpointResult ai = fixpoint(p);
    const auto a = p.blocks.find("a").value();
    const BlockId A = p.blocks.find("a")->id, B = p.blocks.find("b")->id,
                  C = p.blocks.find("c")->id, D = p.blocks.find("d")->id;

    auto expect_state = [&](const char* which, const AgeBounds& got, Polarity polarity,
                            std::vector<AgeBounds::Entry> entries) {
        const AgeBounds want = AgeBounds::from_entries(polarity, 4, std::move(entries));
        if (!(got == want)) {
            out.require(false, std::string("exit state mismatch at ") + which + ": got " +
                                   render_bounds(got, p.blocks) + ", expected " +
                                   render_bounds(want, p.blocks));
        }
    };

    // exit states as drawn, nodes 1..5 (node ids 0..4)
    expect_state("n1 may", ai.node_out[0]->may[0], Polarity::May, {{A, 0}});
    expect_state("n1 must", ai.node_out[0]->must[0], Polarity::Must, {{A, 0}});
    expect_state("n2 may", ai.node_out[1]->may[0], Polarity::May, {{B, 0}, {A, 1}});
    expect_state("n2 must", ai.node_out[1]->must[0], Polarity::Must, {{B, 0}, {A, 1}});
    expect_state("n3 may", ai.node_out[2]->may[0], Polarity::May, {{C, 0}, {B, 1}, {A, 2}});
    expect_state("n3 must", ai.node_out[2]->must[0], Polarity::Must, {{C, 0}, {B, 1}, {A, 2}});
    expect_state("n4 may", ai.node_out[3]->may[0], Polarity::May,
                 {{D, 0}, {C, 1}, {B, 2}, {A, 3}});
    expect_state("n4 must", ai.node_out[3]->must[0], Polarity::Must,
                 {{D, 0}, {C, 1}, {B, 2}, {A, 3}});
    expect_state("n5 in must", ai.node_in[4]->must[0], Polarity::Must, {{A, 3}});
    expect_state("n5 may", ai.node_out[4]->may[0], Polarity::May,
                 {{B, 0}, {A, 1}, {D, 1}, {C, 2}});
    expect_state("n5 must", ai.node_out[4]->must[0], Polarity::Must, {{B, 0}});
    expect_state("n6 must", ai.node_out[5]->must[0], Polarity::Must, {{A, 0}, {B, 1}});
    // The exact set of caches reachable at n6's exit abstracts to [a,b,d,c];
    // a sound join-based transfer cannot age c there (see the note below).
    expect_state("n6 may", ai.node_out[5]->may[0], Polarity::May,
                 {{A, 0}, {B, 1}, {C, 2}, {D, 2}});
    out.notes.push_back("n6 exit may asserted as the sound transfer value [a,b,{c,d}]; the "
                        "exact path-wise value is [a,b,d,c], which no sound join-based may "
                        "update can produce");

    out.require(classify_access(ai.before(AccessPoint{5, 0}), a) == CacheClass::Unknown,
                "n6's access to a must be unknown after may/must");

    const SliceResult sliced = slice(p, a, ai);
    const auto pre = reachable_pre_states(sliced, a, AccessPoint{5, 0}, p.config.ways);
    const std::set<TrackedState> want{TrackedState::cached({B}),
                                      TrackedState::cached({B, C, D})};
    out.require(pre == want, "pre-states at n6 must be exactly {[{b}], [{b,c,d}]}");

    const AnalysisReport report = analyze(p);
    for (const AccessRecord& rec : report.accesses) {
        if (rec.point == AccessPoint{5, 0}) {
            out.require(rec.ai_class == CacheClass::Unknown &&
                            rec.final_class == CacheClass::AlwaysHit &&
                            rec.provenance == Provenance::ModelChecker,
                        "checker must refine n6's access to always_hit");
        }
    }

    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                         started).count();
    out.require(seconds < 1.0, "runtime budget of 1 s exceeded");
    return out;
}

// ---------------------------------------------------------------- criterion 2

Outcome abstraction_exactness() {
    Outcome out;
    const auto started = std::chrono::steady_clock::now();
    std::uint64_t checked = 0;

    for (std::uint32_t ways = 1; ways <= 4; ++ways) {
        for (std::uint32_t universe_size = 1; universe_size <= 5; ++universe_size) {
            BlockTable blocks;
            std::vector<MemoryBlock> universe;
            for (std::uint32_t i = 0; i < universe_size; ++i)
                universe.push_back(blocks.intern("b" + std::to_string(i), 0));

            // close the reachable state set under the update
            std::set<ConcreteCacheState> seen;
            std::vector<ConcreteCacheState> frontier{ConcreteCacheState(1, ways)};
            seen.insert(frontier.front());
            while (!frontier.empty()) {
                ConcreteCacheState s = std::move(frontier.back());
                frontier.pop_back();
                for (const MemoryBlock& b : universe) {
                    ConcreteCacheState next = concrete_update(s, b);
                    if (seen.insert(next).second)
                        frontier.push_back(std::move(next));
                }
            }
            for (const ConcreteCacheState& state : seen) {
                for (const MemoryBlock& accessed : universe) {
                    for (const MemoryBlock& tracked : universe) {
                        ++checked;
                        const TrackedState lhs =
                            abstract_state(concrete_update(state, accessed), tracked);
                        const TrackedState rhs = tracked_update(abstract_state(state, tracked),
                                                                accessed, tracked, ways);
                        if (!(lhs == rhs)) {
                            out.require(false, "commutation failed for ways=" +
                                                   std::to_string(ways) + " at state size " +
                                                   std::to_string(
                                                       state.set_contents(0).size()));
                        }
                    }
                }
            }
        }
    }
    out.notes.push_back(std::to_string(checked) + " (state, access, tracked) triples checked");

    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                         started).count();
    out.require(seconds < 10.0, "runtime budget of 10 s exceeded");
    return out;
}

// ---------------------------------------------------------------- criterion 3

Outcome oracle_equivalence_acyclic() {
    Outcome out;
    const auto started = std::chrono::steady_clock::now();

    std::uint64_t points = 0;
    for (const Program& p : make_corpus(500, /*cyclic=*/false)) {
        const auto cmp = ct::compare_checker_with_oracle(p, p.graph.node_count());
        points += cmp.points_compared;
        out.require(cmp.oracle_saturated, "acyclic oracle must saturate at bound = node count");
        for (const std::string& m : cmp.mismatches)
            out.require(false, m);
    }
    out.notes.push_back("500 acyclic graphs, " + std::to_string(points) +
                        " (block, access) verdicts compared");

    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                         started).count();
    out.require(seconds < 60.0, "runtime budget of 60 s exceeded");
    return out;
}

// ---------------------------------------------------------------- criterion 4

Outcome oracle_equivalence_cyclic() {
    Outcome out;
    std::uint64_t points = 0;
    for (const Program& p : make_corpus(200, /*cyclic=*/true)) {
        const std::uint64_t bound = default_oracle_bound(p);
        const auto cmp = ct::compare_checker_with_oracle(p, bound);
        points += cmp.points_compared;
        out.require(cmp.oracle_saturated, "saturation bound did not close the state space");
        for (const std::string& m : cmp.mismatches)
            out.require(false, m);
        for (const std::string& v : ct::check_final_soundness(p, bound))
            out.require(false, v);
    }
    out.notes.push_back("200 cyclic graphs, " + std::to_string(points) +
                        " (block, access) verdicts compared");
    return out;
}

// ---------------------------------------------------------------- criterion 5

Outcome slicing_preservation() {
    Outcome out;
    std::uint64_t points = 0;
    for (const bool cyclic : {false, true}) {
        for (const Program& p : make_corpus(cyclic ? 200 : 500, cyclic)) {
            const auto cmp = ct::compare_sliced_with_unsliced(p);
            points += cmp.points_compared;
            for (const std::string& m : cmp.mismatches)
                out.require(false, m);
        }
    }
    out.notes.push_back(std::to_string(points) + " pre-state sets compared across both corpora");
    return out;
}

// ---------------------------------------------------------------- criterion 6

Outcome refinement_dominance() {
    Outcome out;
    for (const bool cyclic : {false, true}) {
        for (const Program& p : make_corpus(cyclic ? 200 : 500, cyclic)) {
            for (const std::string& v : ct::check_refinement_dominance(p))
                out.require(false, v);
        }
    }

    // bundled corpus: the engineered join losses must actually get refined
    const std::filesystem::path corpus_dir{CACHEMC_CORPUS_DIR};
    std::uint64_t corpus_unknowns = 0, corpus_refined = 0;
    std::size_t programs = 0;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(corpus_dir))
        if (entry.path().extension() == ".cache")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        std::ifstream in(file);
        std::stringstream text;
        text << in.rdbuf();
        const Program p = parse_program(text.str(), file.stem().string());
        const AnalysisReport r = analyze(p);
        corpus_unknowns += r.summary.ai_unknown;
        corpus_refined += r.summary.refined_hits + r.summary.refined_misses;
        ++programs;
    }
    out.require(programs >= 5, "bundled corpus is missing");
    out.require(corpus_unknowns > 0, "bundled corpus has no may/must unknowns");
    out.require(corpus_refined > 0, "bundled corpus yields Nc = 0");
    if (corpus_unknowns > 0) {
        const double nc = 100.0 * static_cast<double>(corpus_refined) /
                          static_cast<double>(corpus_unknowns);
        out.notes.push_back(std::to_string(programs) + " corpus programs, aggregate Nc " +
                            format_pct(nc) + "%");
    }
    return out;
}

// ---------------------------------------------------------------- criterion 7

Outcome statistics_arithmetic() {
    Outcome out;
    auto synthetic = [](std::uint64_t total, std::uint64_t unknown, std::uint64_t refined) {
        AnalysisReport r;
        for (std::uint64_t i = 0; i < total; ++i) {
            AccessRecord rec;
            rec.point = AccessPoint{0, static_cast<std::uint32_t>(i)};
            rec.ai_class = i < unknown ? CacheClass::Unknown : CacheClass::AlwaysMiss;
            rec.final_class = (i < refined) ? CacheClass::AlwaysHit : rec.ai_class;
            r.accesses.push_back(rec);
        }
        return compute_stats(r);
    };
    auto close_to = [](double got, double want) { return std::abs(got - want) <= 0.1; };

    {
        const auto [un, nc] = synthetic(26, 9, 1);
        out.require(close_to(un, 34.6), "26 accesses with 9 unknown must give Un 34.6%, got " +
                                            format_pct(un));
        out.require(close_to(nc, 11.1), "1 of 9 refined must give Nc 11.1%, got " +
                                            format_pct(nc));
    }
    {
        const auto [un, nc] = synthetic(12, 0, 0);
        out.require(un == 0.0 && nc == 0.0, "no unknowns must give Un = Nc = 0.0%");
    }
    {
        const auto [un, nc] = synthetic(10, 4, 4);
        out.require(close_to(un, 40.0) && close_to(nc, 100.0),
                    "4 of 10 unknown, all refined, must give Un 40.0% / Nc 100.0%");
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            only = std::atoi(argv[++i]);
    }

    struct Criterion {
        int id;
        const char* title;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "golden diamond reproduction (states, unknown access, refinement)", golden_diamond},
        {2, "abstraction commutes with the concrete update, exhaustively",
         abstraction_exactness},
        {3, "checker verdicts equal the path oracle on 500 acyclic graphs",
         oracle_equivalence_acyclic},
        {4, "checker verdicts and final classes sound on 200 cyclic graphs",
         oracle_equivalence_cyclic},
        {5, "slicing preserves pre-state sets and never grows the graph",
         slicing_preservation},
        {6, "refinement dominates may/must and resolves the bundled corpus",
         refinement_dominance},
        {7, "precision statistics arithmetic", statistics_arithmetic},
    };

    bool all_passed = true;
    for (const Criterion& c : criteria) {
        if (only != 0 && c.id != only)
            continue;
        const auto started = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome.passed = false;
            outcome.details.push_back(std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                             started).count();
        std::printf("[%s] %d. %s (%.2f s)\n", outcome.passed ? "PASS" : "FAIL", c.id, c.title,
                    seconds);
        for (const std::string& d : outcome.details)
            std::printf("       failure: %s\n", d.c_str());
        for (const std::string& n : outcome.notes)
            std::printf("       note: %s\n", n.c_str());
        all_passed = all_passed && outcome.passed;
    }
    return all_passed ? 0 : 1;
}
