// Copyright (c) cachemc contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "cachemc/age_bounds.hpp"
#include "cachemc/concrete.hpp"
#include "support/builders.hpp"
#include "support/random_programs.hpp"

using namespace cachemc;
using cachemc::testing::diamond_program;
using cachemc::testing::make_program;

namespace {

// diamond block ids follow intern order: a=0, b=1, c=2, d=3
constexpr BlockId A = 0, B = 1, C = 2, D = 3;

AgeBounds must_state(std::uint32_t ways, std::vector<AgeBounds::Entry> entries) {
    return AgeBounds::from_entries(Polarity::Must, ways, std::move(entries));
}
AgeBounds may_state(std::uint32_t ways, std::vector<AgeBounds::Entry> entries) {
    return AgeBounds::from_entries(Polarity::May, ways, std::move(entries));
}
MemoryBlock blk(BlockId id) { return MemoryBlock{id, 0}; }

// Must states must stay a valid cache shape: per age v at most v+1 blocks
// with bound <= v, and never more than ways blocks in total.
void check_must_shape(const AgeBounds& s) {
    REQUIRE(s.polarity() == Polarity::Must);
    CHECK(s.size() <= s.ways());
    for (std::uint32_t v = 0; v < s.ways(); ++v) {
        std::uint32_t at_most_v = 0;
        for (const auto& e : s.entries()) {
            CHECK(e.age < s.ways());
            if (e.age <= v)
                ++at_most_v;
        }
        CHECK(at_most_v <= v + 1);
    }
}

} // namespace

TEST_SUITE_BEGIN("age_bounds");

TEST_CASE("must update ages younger blocks and drops at the way count") {
    SUBCASE("fresh block pushes the previous one") {
        const auto s = must_update(must_state(4, {{A, 0}}), blk(B));
        CHECK(s == must_state(4, {{B, 0}, {A, 1}}));
    }
    SUBCASE("a block at the oldest bound falls out") {
        const auto s = must_update(must_state(4, {{A, 3}}), blk(B));
        CHECK(s == must_state(4, {{B, 0}}));
    }
    SUBCASE("re-access of the youngest block is a no-op") {
        const auto s = must_update(must_state(4, {{B, 0}}), blk(B));
        CHECK(s == must_state(4, {{B, 0}}));
    }
    SUBCASE("blocks older than the touched one keep their bound") {
        const auto s = must_update(must_state(4, {{A, 1}, {B, 3}}), blk(A));
        CHECK(s == must_state(4, {{A, 0}, {B, 3}}));
    }
}

TEST_CASE("may update ages ties as well") {
    SUBCASE("re-load from a deep join") {
        // join of [a] and [d,c,b,a] feeding the b access
        const auto s = may_update(may_state(4, {{A, 0}, {D, 0}, {C, 1}, {B, 2}}), blk(B));
        CHECK(s == may_state(4, {{B, 0}, {A, 1}, {D, 1}, {C, 2}}));
    }
    SUBCASE("fresh block ages everything present") {
        const auto s = may_update(may_state(4, {{A, 0}}), blk(B));
        CHECK(s == may_state(4, {{B, 0}, {A, 1}}));
    }
    SUBCASE("youngest re-access is a no-op") {
        const auto s = may_update(may_state(4, {{B, 0}}), blk(B));
        CHECK(s == may_state(4, {{B, 0}}));
    }
    SUBCASE("a tied block ages, an older one does not") {
        const auto s = may_update(may_state(4, {{A, 1}, {B, 1}, {C, 2}}), blk(A));
        CHECK(s == may_state(4, {{A, 0}, {B, 2}, {C, 2}}));
    }
    SUBCASE("lower bounds reaching the way count drop out") {
        const auto s = may_update(may_state(2, {{A, 1}, {B, 0}}), blk(C));
        CHECK(s == may_state(2, {{C, 0}, {B, 1}}));
    }
}

TEST_CASE("joins") {
    SUBCASE("must keeps the intersection at the larger bound") {
        const auto s = must_join(must_state(4, {{A, 0}}),
                                 must_state(4, {{D, 0}, {C, 1}, {B, 2}, {A, 3}}));
        CHECK(s == must_state(4, {{A, 3}}));
    }
    SUBCASE("must join is idempotent") {
        const auto s = must_state(4, {{A, 1}, {B, 2}});
        CHECK(must_join(s, s) == s);
    }
    SUBCASE("disjoint must states join to empty") {
        CHECK(must_join(must_state(4, {{A, 1}}), must_state(4, {{B, 1}})).empty());
    }
    SUBCASE("may keeps the union at the smaller bound") {
        const auto s = may_join(may_state(4, {{A, 0}}),
                                may_state(4, {{D, 0}, {C, 1}, {B, 2}, {A, 3}}));
        CHECK(s == may_state(4, {{A, 0}, {D, 0}, {C, 1}, {B, 2}}));
    }
    SUBCASE("empty may state is the neutral element") {
        const auto s = may_state(4, {{A, 0}, {C, 2}});
        CHECK(may_join(s, may_state(4, {})) == s);
        CHECK(may_join(may_state(4, {}), s) == s);
    }
    SUBCASE("may join is idempotent") {
        const auto s = may_state(4, {{A, 0}, {C, 2}});
        CHECK(may_join(s, s) == s);
    }
}

TEST_CASE("diamond fixpoint matches the hand-computed per-node exit states") {
    const Program p = diamond_program();
    const FixpointResult r = fixpoint(p);

    const auto may_out = [&](NodeId n) { return r.node_out[n]->may[0]; };
    const auto must_out = [&](NodeId n) { return r.node_out[n]->must[0]; };

    // straight chain n1..n4: may and must agree
    CHECK(may_out(0) == may_state(4, {{A, 0}}));
    CHECK(must_out(0) == must_state(4, {{A, 0}}));
    CHECK(may_out(1) == may_state(4, {{B, 0}, {A, 1}}));
    CHECK(must_out(1) == must_state(4, {{B, 0}, {A, 1}}));
    CHECK(may_out(2) == may_state(4, {{C, 0}, {B, 1}, {A, 2}}));
    CHECK(must_out(2) == must_state(4, {{C, 0}, {B, 1}, {A, 2}}));
    CHECK(may_out(3) == may_state(4, {{D, 0}, {C, 1}, {B, 2}, {A, 3}}));
    CHECK(must_out(3) == must_state(4, {{D, 0}, {C, 1}, {B, 2}, {A, 3}}));

    // the join before n5 loses must information
    CHECK(r.node_in[4]->must[0] == must_state(4, {{A, 3}}));
    CHECK(r.node_in[4]->may[0] == may_state(4, {{A, 0}, {D, 0}, {C, 1}, {B, 2}}));
    CHECK(may_out(4) == may_state(4, {{B, 0}, {A, 1}, {D, 1}, {C, 2}}));
    CHECK(must_out(4) == must_state(4, {{B, 0}}));

    // n6 exit: must matches the exact states, may is the sound join-based
    // value (the exact reachable set would give c age 3, d age 2)
    CHECK(must_out(5) == must_state(4, {{A, 0}, {B, 1}}));
    CHECK(may_out(5) == may_state(4, {{A, 0}, {B, 1}, {C, 2}, {D, 2}}));
}

TEST_CASE("fixpoint corner cases") {
    SUBCASE("single node starts from the empty cache") {
        const Program p = make_program(CacheConfig{4, 1, 16, 4}, {"n1: a"}, {});
        const FixpointResult r = fixpoint(p);
        CHECK(r.node_in[0]->may[0].empty());
        CHECK(r.node_in[0]->must[0].empty());
        CHECK(r.node_out[0]->may[0] == may_state(4, {{0, 0}}));
        CHECK(r.node_out[0]->must[0] == must_state(4, {{0, 0}}));
    }
    SUBCASE("self loop converges with the block in both exit states") {
        const Program p = make_program(CacheConfig{4, 1, 16, 4}, {"n1: a"}, {{0, 0}});
        const FixpointResult r = fixpoint(p);
        CHECK(r.node_out[0]->may[0] == may_state(4, {{0, 0}}));
        CHECK(r.node_out[0]->must[0] == must_state(4, {{0, 0}}));
        // entry joins the empty initial state, so nothing must be cached at entry
        CHECK(r.node_in[0]->must[0].empty());
        CHECK(r.node_in[0]->may[0] == may_state(4, {{0, 0}}));
    }
    SUBCASE("unreachable nodes have no states") {
        const Program p = make_program(CacheConfig{2, 1, 16, 4}, {"n1: a", "orphan: b"}, {});
        const FixpointResult r = fixpoint(p);
        CHECK_FALSE(r.reachable(1));
        CHECK(r.reachable(0));
    }
}

TEST_CASE("classification from the pre-access states") {
    const Program p = diamond_program();
    const FixpointResult r = fixpoint(p);
    const auto pre = [&](NodeId n) { return r.before(AccessPoint{n, 0}); };
    // n6: a is in may (age 1) but not in must
    CHECK(classify_access(pre(5), blk(A)) == CacheClass::Unknown);
    // n2: b is absent from the may state [a]
    CHECK(classify_access(pre(1), blk(B)) == CacheClass::AlwaysMiss);
    // b at age 0 in must before n3's access to c? c is a miss; b would be a hit
    MayMustState before_n3 = pre(2);
    CHECK(classify_access(before_n3, blk(C)) == CacheClass::AlwaysMiss);
    CHECK(classify_access(before_n3, blk(B)) == CacheClass::AlwaysHit);
    // n5: b is mixed, may has it at age 2, must lost it
    CHECK(classify_access(pre(4), blk(B)) == CacheClass::Unknown);
}

TEST_CASE("worklist order does not change the fixpoint") {
    std::mt19937 rng(31);
    for (int i = 0; i < 60; ++i) {
        cachemc::testing::RandomSpec spec;
        spec.cyclic = i % 2 == 0;
        spec.sets = (i % 3 == 0) ? 2 : 1;
        const Program p = cachemc::testing::random_program(rng, spec);
        const FixpointResult rpo = fixpoint(p, WorklistOrder::ReversePostorder);
        const FixpointResult fifo = fixpoint(p, WorklistOrder::Fifo);
        for (NodeId n = 0; n < p.graph.node_count(); ++n) {
            CHECK(rpo.node_in[n] == fifo.node_in[n]);
            CHECK(rpo.node_out[n] == fifo.node_out[n]);
        }
    }
}

TEST_CASE("updates and joins preserve the must shape invariant") {
    std::mt19937 rng(37);
    for (int i = 0; i < 60; ++i) {
        cachemc::testing::RandomSpec spec;
        spec.cyclic = i % 2 == 1;
        spec.ways = (i % 2) ? 2 : 4;
        const Program p = cachemc::testing::random_program(rng, spec);
        const FixpointResult r = fixpoint(p);
        for (NodeId n = 0; n < p.graph.node_count(); ++n) {
            if (!r.reachable(n))
                continue;
            for (std::uint32_t s = 0; s < p.config.sets; ++s) {
                check_must_shape(r.node_in[n]->must[s]);
                check_must_shape(r.node_out[n]->must[s]);
                for (const auto& e : r.node_in[n]->may[s].entries())
                    CHECK(e.age < p.config.ways);
            }
        }
    }
}

// Soundness against concrete execution: walk random paths, thread the exact
// cache through them and compare with the abstract in-states at every access.
TEST_CASE("age bounds sandwich the concrete ages along random paths") {
    std::mt19937 rng(41);
    for (int i = 0; i < 50; ++i) {
        cachemc::testing::RandomSpec spec;
        spec.cyclic = i % 2 == 0;
        spec.ways = (i % 2) ? 2 : 4;
        spec.sets = (i % 3 == 0) ? 2 : 1;
        const Program p = cachemc::testing::random_program(rng, spec);
        const FixpointResult r = fixpoint(p);

        for (int walk = 0; walk < 30; ++walk) {
            ConcreteCacheState cache(p.config);
            NodeId n = p.graph.entry();
            for (int step = 0; step < 24; ++step) {
                const auto& accesses = p.graph.node(n).accesses;
                for (std::uint32_t off = 0; off < accesses.size(); ++off) {
                    const MemoryBlock b = accesses[off];
                    const MayMustState& pre = r.before(AccessPoint{n, off});

                    // every cached block is in the may state, at most at its age
                    for (std::uint32_t set = 0; set < p.config.sets; ++set) {
                        const auto& queue = cache.set_contents(set);
                        for (std::uint32_t age = 0; age < queue.size(); ++age) {
                            const auto may_bound = pre.may[set].bound_of(queue[age]);
                            REQUIRE(may_bound.has_value());
                            CHECK(*may_bound <= age);
                        }
                        // every must block is cached, at least as young as its bound
                        for (const auto& e : pre.must[set].entries()) {
                            const auto age = cache.age_of(MemoryBlock{e.block, set});
                            REQUIRE(age.has_value());
                            CHECK(*age <= e.age);
                        }
                    }
                    cache.touch(b);
                }
                const auto& succs = p.graph.successors(n);
                if (succs.empty())
                    break;
                std::uniform_int_distribution<std::size_t> pick(0, succs.size() - 1);
                n = succs[pick(rng)];
            }
        }
    }
}

TEST_SUITE_END();
