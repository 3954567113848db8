#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pgfold/folding.hpp"

namespace pgfold {

/// Edge values are exact unbounded integers so that equivalence between the
/// folded and the fully parallel run can never hinge on overflow.
using Word = boost::multiprecision::cpp_int;

/// Commutative-associative reduction plus edge-update rule.
struct Kernel {
    enum class Reduce { kXor, kSum };
    enum class Update { kAssign, kAddReduced };

    Reduce reduce = Reduce::kXor;
    Update update = Update::kAssign;
    uint32_t width_bits = 16;  ///< word width of the xor kernel

    Word identity() const { return Word(0); }
    Word combine(const Word& a, const Word& b) const {
        return reduce == Reduce::kXor ? Word(a ^ b) : Word(a + b);
    }
    Word apply(const Word& reduced, const Word& old_value) const {
        return update == Update::kAssign ? reduced : Word(reduced + old_value);
    }

    static Kernel xor_assign(uint32_t width_bits = 16) {
        return {Reduce::kXor, Update::kAssign, width_bits};
    }
    static Kernel sum_assign() { return {Reduce::kSum, Update::kAssign, 16}; }
    static Kernel xor_add(uint32_t width_bits = 16) {
        return {Reduce::kXor, Update::kAddReduced, width_bits};
    }
    static Kernel sum_add() { return {Reduce::kSum, Update::kAddReduced, 16}; }
};

struct EdgeState {
    std::vector<Word> values;  ///< by dense edge index
    uint64_t iteration = 0;
};

EdgeState make_edge_state(const IncidenceGraph& graph, const Word& fill);
/// Deterministic pseudo-random fill: mt19937_64(seed) masked to width_bits.
EdgeState random_edge_state(const IncidenceGraph& graph, uint64_t seed,
                            uint32_t width_bits = 16);

struct AccessRecord {
    uint64_t slot;
    uint32_t unit;
    uint32_t mem;
    uint32_t addr;
    bool write;
    uint64_t edge;
};

struct SlotConflict {
    uint64_t slot;
    uint32_t mem;
    uint32_t first_unit;
    uint32_t second_unit;
    bool write;
};

struct SimOptions {
    bool overlap_writes = false;  ///< dual-port overlap of write-back with next read
    bool capture_records = false;
    bool abort_on_fault = true;
    uint64_t seed = 0;  ///< recorded in the trace, not consumed here
};

/// Thrown on a detected conflict or read/write coverage fault.
class SimFault : public std::runtime_error {
public:
    SimFault(std::string msg, uint64_t slot)
        : std::runtime_error(std::move(msg)), slot_(slot) {}
    uint64_t slot() const { return slot_; }

private:
    uint64_t slot_;
};

struct SimTrace {
    std::vector<AccessRecord> records;  ///< only with capture_records
    std::vector<SlotConflict> conflicts;
    uint64_t idle_slots = 0;       ///< empty unit-slots over the whole run
    uint64_t busy_slots = 0;       ///< unit-slots with at least one access
    uint64_t slot_capacity = 0;    ///< timeline slots times units
    uint64_t phase1_reads_per_unit = 0;
    uint64_t phase2_reads_per_unit = 0;
    uint64_t coverage_faults = 0;  ///< double or missing reads/writes
    uint64_t seed = 0;
    uint64_t iterations = 0;
    EdgeState final_state;

    bool clean() const { return conflicts.empty() && coverage_faults == 0; }
};

/// Fully parallel two-phase execution; the oracle the fold is checked against.
EdgeState run_reference(const IncidenceGraph& graph, const Kernel& kernel, EdgeState init,
                        uint64_t iters, bool include_phase2 = true);

/// Slot-by-slot folded execution of a plan with conflict, coverage and idle
/// accounting. Aborts with SimFault on the first detected fault unless
/// options.abort_on_fault is cleared.
std::pair<EdgeState, SimTrace> run_folded(const FoldPlan& plan, const Kernel& kernel,
                                          EdgeState init, uint64_t iters,
                                          const SimOptions& options = {});

struct CheckReport {
    std::vector<CheckEntry> entries;
    bool all_pass() const;
};

/// Static verification of every plan invariant: memory-map bijection and
/// residency, rotation and lock-step structure, per-slot injectivity, the
/// counter property, read/write-once coverage and profile consistency.
/// Independent of any kernel run.
CheckReport check_plan(const FoldPlan& plan);

}  // namespace pgfold
