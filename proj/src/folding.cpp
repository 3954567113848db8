#include "pgfold/folding.hpp"

#include <algorithm>
#include <stdexcept>

namespace pgfold {

MemoryMap build_memory_map(const ProjectiveSpace& space, const IncidenceGraph& graph,
                           const SpreadPartition& part) {
    const uint32_t B = uint32_t(part.fold.num_blocks);
    const uint64_t total = graph.num_edges();
    if (total % B != 0) {
        throw std::logic_error("edge count " + std::to_string(total) +
                               " not divisible by " + std::to_string(B) + " memories");
    }
    MemoryMap mm;
    mm.mem_count = B;
    mm.mem_size = uint32_t(total / B);
    for (uint32_t g = 0; g < B; ++g) {
        // every group holds points_per_block hyperplanes of full degree
        if (part.hyperplane_groups[g].size() * graph.degree != mm.mem_size) {
            throw std::logic_error("group " + std::to_string(g) +
                                   " size inconsistent with memory size");
        }
    }
    mm.mem_of_edge.resize(total);
    mm.addr_of_edge.assign(total, ~uint32_t{0});
    for (uint64_t e = 0; e < total; ++e) {
        mm.mem_of_edge[e] = part.group_of[graph.edges[e].second];
    }

    // Chronological phase-1 order: point step, then round, then the single
    // unit touching each memory in that round, edges by hyperplane index.
    std::vector<uint32_t> counter(B, 0);
    mm.edge_at.assign(B, std::vector<uint64_t>(mm.mem_size, ~uint64_t{0}));
    const uint32_t ppb = uint32_t(part.fold.points_per_block);
    for (uint32_t r = 0; r < ppb; ++r) {
        for (uint32_t j = 0; j < B; ++j) {
            for (uint32_t i = 0; i < B; ++i) {
                const uint32_t mem = (i + j) % B;
                const uint32_t x = part.blocks[i].points[r];
                for (uint32_t h : part.hyperplane_groups[mem]) {
                    if (!space.incident(x, h)) continue;
                    const uint64_t e = graph.edge_index(x, h);
                    if (mm.addr_of_edge[e] != ~uint32_t{0}) {
                        throw std::logic_error("edge assigned twice in memory layout");
                    }
                    mm.addr_of_edge[e] = counter[mem];
                    mm.edge_at[mem][counter[mem]] = e;
                    ++counter[mem];
                }
            }
        }
    }
    for (uint32_t mem = 0; mem < B; ++mem) {
        if (counter[mem] != mm.mem_size) {
            throw std::logic_error("memory " + std::to_string(mem) + " holds " +
                                   std::to_string(counter[mem]) + " words, expected " +
                                   std::to_string(mm.mem_size));
        }
    }
    return mm;
}

std::vector<std::vector<Phase1Slot>> build_phase1_schedule(
    const ProjectiveSpace& space, const IncidenceGraph& graph, const SpreadPartition& part,
    const DegreeProfile& profile, const MemoryMap& memory, uint64_t* idle_out) {
    const uint32_t B = uint32_t(part.fold.num_blocks);
    const uint32_t ppb = uint32_t(part.fold.points_per_block);
    std::vector<uint64_t> offset(B + 1, 0);
    for (uint32_t j = 0; j < B; ++j) offset[j + 1] = offset[j] + profile.d[j];
    const uint64_t sps = offset[B];

    uint64_t idle = 0;
    std::vector<std::vector<Phase1Slot>> sched(B);
    for (uint32_t i = 0; i < B; ++i) {
        sched[i].reserve(size_t(ppb) * graph.degree);
        for (uint32_t r = 0; r < ppb; ++r) {
            const uint64_t base = uint64_t(r) * sps;
            const uint32_t x = part.blocks[i].points[r];
            for (uint32_t j = 0; j < B; ++j) {
                const uint32_t mem = (i + j) % B;
                uint32_t cnt = 0;
                for (uint32_t h : part.hyperplane_groups[mem]) {
                    if (!space.incident(x, h)) continue;
                    if (cnt >= profile.d[j]) {
                        throw std::logic_error("round " + std::to_string(j) +
                                               " exceeds profile length");
                    }
                    const uint64_t e = graph.edge_index(x, h);
                    sched[i].push_back({base + offset[j] + cnt, mem, memory.addr_of_edge[e], e});
                    ++cnt;
                }
                idle += profile.d[j] - cnt;  // padding slots stay empty
            }
        }
    }
    if (idle_out) *idle_out = idle;
    return sched;
}

std::vector<std::vector<Phase2Hyperplane>> build_phase2_schedule(
    const IncidenceGraph& graph, const SpreadPartition& part, const MemoryMap& memory) {
    const uint32_t B = uint32_t(part.fold.num_blocks);
    std::vector<std::vector<Phase2Hyperplane>> sched(B);
    for (uint32_t i = 0; i < B; ++i) {
        std::vector<bool> covered(memory.mem_size, false);
        for (uint32_t h : part.hyperplane_groups[i]) {
            Phase2Hyperplane row;
            row.hyperplane = h;
            row.addrs.reserve(graph.degree);
            for (uint32_t x : graph.hyper_adj[h]) {
                const uint64_t e = graph.edge_index(x, h);
                if (memory.mem_of_edge[e] != i) {
                    throw std::logic_error("edge of hyperplane " + std::to_string(h) +
                                           " not resident in memory " + std::to_string(i));
                }
                const uint32_t a = memory.addr_of_edge[e];
                if (covered[a]) {
                    throw std::logic_error("address " + std::to_string(a) +
                                           " scheduled twice in phase 2");
                }
                covered[a] = true;
                row.addrs.push_back(a);
            }
            sched[i].push_back(std::move(row));
        }
        if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
            throw std::logic_error("phase 2 leaves addresses of memory " + std::to_string(i) +
                                   " untouched");
        }
    }
    return sched;
}

FoldPlan plan_from_partition(ProjectiveSpace space, SpreadPartition partition) {
    FoldPlan plan;
    plan.space = std::move(space);
    plan.graph = incidence_graph(plan.space);
    plan.partition = std::move(partition);
    plan.partition.group_of.assign(plan.space.num_hyperplanes(), 0);
    for (uint32_t g = 0; g < plan.partition.hyperplane_groups.size(); ++g) {
        for (uint32_t h : plan.partition.hyperplane_groups[g]) plan.partition.group_of[h] = g;
    }
    plan.profile = degree_profile(plan.space, plan.partition);
    plan.memory = build_memory_map(plan.space, plan.graph, plan.partition);
    plan.phase1 = build_phase1_schedule(plan.space, plan.graph, plan.partition, plan.profile,
                                        plan.memory, &plan.idle_slots);
    plan.phase2 = build_phase2_schedule(plan.graph, plan.partition, plan.memory);
    const uint32_t B = plan.units();
    plan.round_offset.assign(B + 1, 0);
    for (uint32_t j = 0; j < B; ++j) {
        plan.round_offset[j + 1] = plan.round_offset[j] + plan.profile.d[j];
    }
    plan.slots_per_step = plan.round_offset[B];
    return plan;
}

FoldPlan fold_plan(uint32_t m, uint64_t q, uint32_t k, PolyCoeffs poly_override,
                   uint64_t max_order) {
    ProjectiveSpace space =
        ProjectiveSpace::build(ProjParams::make(m, q), std::move(poly_override), max_order);
    SpreadPartition partition = build_partition(space, k);
    return plan_from_partition(std::move(space), std::move(partition));
}

}  // namespace pgfold
