#pragma once

#include <cstdint>
#include <vector>

#include "pgfold/partition.hpp"
#include "pgfold/projective.hpp"

namespace pgfold {

/// Edge-to-memory assignment. Edge (p,h) lives in the memory of the group
/// owning h; addresses follow the chronological phase-1 access order, so the
/// phase-1 address generator of each memory is a bare counter.
struct MemoryMap {
    uint32_t mem_count = 0;
    uint32_t mem_size = 0;                        ///< words per memory = edges / B
    std::vector<uint32_t> mem_of_edge;            ///< by dense edge index
    std::vector<uint32_t> addr_of_edge;
    std::vector<std::vector<uint64_t>> edge_at;   ///< [mem][addr] -> edge index
};

struct Phase1Slot {
    uint64_t slot;  ///< global read-slot index within one phase-1 pass
    uint32_t mem;
    uint32_t addr;
    uint64_t edge;
};

/// Phase-2 look-up table row: the local addresses of one hyperplane's edges,
/// ordinal order = ascending incident point.
struct Phase2Hyperplane {
    uint32_t hyperplane;
    std::vector<uint32_t> addrs;
};

/// Complete fold of a point-hyperplane computation graph. Unit i owns block
/// S_i and memory i; in phase-1 round j it talks to memory (i+j) mod B, in
/// phase 2 only to its own memory. Immutable once built.
struct FoldPlan {
    ProjectiveSpace space;
    IncidenceGraph graph;
    SpreadPartition partition;
    DegreeProfile profile;
    MemoryMap memory;
    std::vector<std::vector<Phase1Slot>> phase1;       ///< per unit, slots ascending
    std::vector<std::vector<Phase2Hyperplane>> phase2; ///< per unit, group order
    std::vector<uint64_t> round_offset;  ///< size B+1, cumulative profile prefix
    uint64_t slots_per_step = 0;         ///< read slots per point step
    uint64_t idle_slots = 0;             ///< padding over one phase-1 read pass

    uint32_t units() const { return uint32_t(partition.fold.num_blocks); }
    uint32_t block_point(uint32_t unit, uint32_t step) const {
        return partition.blocks[unit].points[step];
    }
    uint64_t phase1_slots_per_unit() const {
        return slots_per_step * partition.fold.points_per_block;
    }
    uint64_t phase2_reads_per_unit() const {
        return partition.fold.points_per_block * graph.degree;
    }
};

MemoryMap build_memory_map(const ProjectiveSpace& space, const IncidenceGraph& graph,
                           const SpreadPartition& part);

/// Lock-step rotation schedule. Rounds are padded to the profile maximum when
/// the per-cell counts are not uniform; the returned idle count goes through
/// FoldPlan::idle_slots.
std::vector<std::vector<Phase1Slot>> build_phase1_schedule(
    const ProjectiveSpace& space, const IncidenceGraph& graph, const SpreadPartition& part,
    const DegreeProfile& profile, const MemoryMap& memory, uint64_t* idle_out);

std::vector<std::vector<Phase2Hyperplane>> build_phase2_schedule(
    const IncidenceGraph& graph, const SpreadPartition& part, const MemoryMap& memory);

/// Memory map and schedules for an already-built spread (group_of is
/// recomputed from the hyperplane groups).
FoldPlan plan_from_partition(ProjectiveSpace space, SpreadPartition partition);

/// End-to-end: geometry, spread, memory map and both schedules.
FoldPlan fold_plan(uint32_t m, uint64_t q, uint32_t k, PolyCoeffs poly_override = {},
                   uint64_t max_order = kDefaultMaxFieldOrder);

}  // namespace pgfold
