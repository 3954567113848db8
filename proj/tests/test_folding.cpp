#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pgfold/folding.hpp"
#include "pgfold/simulator.hpp"

#include <algorithm>
#include <set>

using namespace pgfold;

TEST_CASE("memory sizing for the P(5, GF(2)) folds") {
    {
        FoldPlan plan = fold_plan(5, 2, 2);
        CHECK(plan.units() == 9);
        CHECK(plan.memory.mem_count == 9);
        CHECK(plan.memory.mem_size == 217);  // 1953 / 9 = 49 local + 3*56
        // split: 49 words of each memory belong to the unit's own block
        for (uint32_t i = 0; i < 9; ++i) {
            uint32_t local = 0;
            for (uint64_t e = 0; e < plan.graph.num_edges(); ++e) {
                if (plan.memory.mem_of_edge[e] != i) continue;
                if (plan.graph.edges[e].first % 9 == i) ++local;
            }
            CHECK(local == 49);
        }
    }
    {
        FoldPlan plan = fold_plan(5, 2, 1);
        CHECK(plan.units() == 21);
        CHECK(plan.memory.mem_size == 93);  // 1953 / 21
    }
    {
        FoldPlan plan = fold_plan(1, 2, 0);
        CHECK(plan.units() == 3);
        CHECK(plan.memory.mem_size == 1);
    }
}

TEST_CASE("phase-1 schedule lengths") {
    {
        FoldPlan plan = fold_plan(5, 2, 2);
        CHECK(plan.slots_per_step == 31);  // 7 local + 8 rounds of 3
        CHECK(plan.phase1_slots_per_unit() == 217);
        CHECK(plan.idle_slots == 0);
        for (const auto& unit : plan.phase1) CHECK(unit.size() == 217);
    }
    {
        FoldPlan plan = fold_plan(5, 2, 1);
        CHECK(plan.slots_per_step == 31);  // 3 + 4*3 + 16*1
        CHECK(plan.phase1_slots_per_unit() == 93);
        CHECK(plan.idle_slots == 0);
    }
    {
        FoldPlan plan = fold_plan(3, 2, 1);
        CHECK(plan.slots_per_step == 7);  // 3 + 4*1
        CHECK(plan.phase1_slots_per_unit() == 21);
        CHECK(plan.idle_slots == 0);
    }
}

TEST_CASE("phase-2 schedule lengths") {
    {
        FoldPlan plan = fold_plan(5, 2, 2);
        for (const auto& unit : plan.phase2) {
            CHECK(unit.size() == 7);
            for (const auto& row : unit) CHECK(row.addrs.size() == 31);
        }
        CHECK(plan.phase2_reads_per_unit() == 217);
    }
    {
        FoldPlan plan = fold_plan(5, 2, 1);
        for (const auto& unit : plan.phase2) CHECK(unit.size() == 3);
        CHECK(plan.phase2_reads_per_unit() == 93);
    }
    {
        FoldPlan plan = fold_plan(1, 2, 0);
        CHECK(plan.phase2_reads_per_unit() == 1);
    }
}

TEST_CASE("per-slot injectivity and counter property, exhaustively") {
    for (auto [m, q, k] : {std::tuple<uint32_t, uint64_t, uint32_t>{5, 2, 2},
                           {5, 2, 1},
                           {3, 2, 1},
                           {3, 3, 1},
                           {7, 2, 3},
                           {1, 2, 0}}) {
        CAPTURE(m);
        CAPTURE(q);
        CAPTURE(k);
        FoldPlan plan = fold_plan(m, q, k);
        CHECK(plan.idle_slots == 0);

        // injectivity: per global slot, unit -> memory is a partial injection
        std::set<std::pair<uint64_t, uint32_t>> seen;
        for (uint32_t u = 0; u < plan.units(); ++u) {
            for (const Phase1Slot& s : plan.phase1[u]) {
                CHECK(seen.insert({s.slot, s.mem}).second);
            }
        }

        // counter: per memory, addresses in slot order are 0,1,2,...
        std::vector<std::vector<std::pair<uint64_t, uint32_t>>> per_mem(plan.units());
        for (uint32_t u = 0; u < plan.units(); ++u) {
            for (const Phase1Slot& s : plan.phase1[u]) per_mem[s.mem].push_back({s.slot, s.addr});
        }
        for (auto& acc : per_mem) {
            std::sort(acc.begin(), acc.end());
            for (uint32_t a = 0; a < acc.size(); ++a) CHECK(acc[a].second == a);
        }

        // throughput proxy: with zero idle the per-unit slot count is edges/B
        CHECK(plan.phase1_slots_per_unit() == plan.graph.num_edges() / plan.units());
    }
}

TEST_CASE("static checks pass for generated plans") {
    for (auto [m, q, k] : {std::tuple<uint32_t, uint64_t, uint32_t>{5, 2, 2},
                           {5, 2, 1},
                           {3, 2, 1},
                           {3, 3, 1},
                           {7, 2, 3}}) {
        CAPTURE(m);
        CAPTURE(q);
        CAPTURE(k);
        FoldPlan plan = fold_plan(m, q, k);
        CheckReport rep = check_plan(plan);
        for (const auto& e : rep.entries) {
            CAPTURE(e.name);
            CAPTURE(e.detail);
            CHECK(e.pass);
        }
    }
}

TEST_CASE("odd-case fold of P(7, GF(2)), k = 3") {
    FoldPlan plan = fold_plan(7, 2, 3);
    CHECK(plan.units() == 17);
    CHECK(plan.partition.fold.points_per_block == 15);
    CHECK(plan.graph.degree == 127);
    CHECK(plan.profile.d[0] == 15);
    CHECK(std::count(plan.profile.d.begin(), plan.profile.d.end(), 7u) == 16);
    CHECK(plan.profile.total == 127);  // 15 + 16*7
}

TEST_CASE("round offsets are the profile prefix sums") {
    FoldPlan plan = fold_plan(5, 2, 2);
    CHECK(plan.round_offset.front() == 0);
    for (uint32_t j = 0; j < plan.units(); ++j) {
        CHECK(plan.round_offset[j + 1] - plan.round_offset[j] == plan.profile.d[j]);
    }
    CHECK(plan.round_offset.back() == plan.slots_per_step);
}

TEST_CASE("fold_plan rejects impossible block dimensions") {
    CHECK_THROWS_AS(fold_plan(5, 2, 3), std::invalid_argument);
    CHECK_THROWS_AS(fold_plan(5, 2, 5), std::invalid_argument);
}

TEST_CASE("a valid non-equivariant carrier assignment pads with idle slots") {
    // Reassign carriers of the 21-line spread along the 3-cycle 0 -> 3 -> 6:
    // block-shift differences 18, 18 and 6 all keep S_i inside its carrier,
    // so the spread stays valid but loses shift equivariance.
    auto space = ProjectiveSpace::build(ProjParams::make(5, 2));
    SpreadPartition part = build_partition(space, 1);
    auto contains_block = [&](const Flat& carrier, const Flat& block) {
        return std::includes(carrier.points.begin(), carrier.points.end(),
                             block.points.begin(), block.points.end());
    };
    REQUIRE(contains_block(part.carriers[3], part.blocks[0]));
    REQUIRE(contains_block(part.carriers[6], part.blocks[3]));
    REQUIRE(contains_block(part.carriers[0], part.blocks[6]));

    SpreadPartition twisted = part;
    twisted.carriers[0] = part.carriers[3];
    twisted.carriers[3] = part.carriers[6];
    twisted.carriers[6] = part.carriers[0];
    twisted.hyperplane_groups[0] = part.hyperplane_groups[3];
    twisted.hyperplane_groups[3] = part.hyperplane_groups[6];
    twisted.hyperplane_groups[6] = part.hyperplane_groups[0];
    twisted.equivariant = false;

    FoldPlan plan = plan_from_partition(space, std::move(twisted));
    CHECK(!plan.profile.uniform);
    CHECK(plan.profile.total > plan.graph.degree);
    CHECK(plan.idle_slots > 0);

    // padding keeps every static invariant intact
    CheckReport rep = check_plan(plan);
    for (const auto& e : rep.entries) {
        CAPTURE(e.name);
        CAPTURE(e.detail);
        CHECK(e.pass);
    }

    // and the padded fold still computes the right thing
    EdgeState init = random_edge_state(plan.graph, 42);
    auto [folded, trace] = run_folded(plan, Kernel::xor_assign(), init, 2);
    EdgeState ref = run_reference(plan.graph, Kernel::xor_assign(), init, 2);
    CHECK(folded.values == ref.values);
    CHECK(trace.clean());
    CHECK(trace.idle_slots > 0);
    CHECK(trace.busy_slots < trace.slot_capacity);
}
