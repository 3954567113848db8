#include "pgfold/simulator.hpp"

#include <algorithm>
#include <random>

namespace pgfold {

EdgeState make_edge_state(const IncidenceGraph& graph, const Word& fill) {
    EdgeState s;
    s.values.assign(graph.num_edges(), fill);
    return s;
}

EdgeState random_edge_state(const IncidenceGraph& graph, uint64_t seed, uint32_t width_bits) {
    EdgeState s;
    s.values.reserve(graph.num_edges());
    std::mt19937_64 rng(seed);
    const uint64_t mask = (width_bits >= 64) ? ~uint64_t{0} : ((uint64_t{1} << width_bits) - 1);
    for (uint64_t e = 0; e < graph.num_edges(); ++e) {
        s.values.emplace_back(rng() & mask);
    }
    return s;
}

EdgeState run_reference(const IncidenceGraph& graph, const Kernel& kernel, EdgeState init,
                        uint64_t iters, bool include_phase2) {
    EdgeState state = std::move(init);
    if (state.values.size() != graph.num_edges()) {
        throw std::invalid_argument("edge state does not cover the graph");
    }
    for (uint64_t it = 0; it < iters; ++it) {
        for (uint32_t p = 0; p < graph.n; ++p) {
            Word red = kernel.identity();
            const uint64_t base = uint64_t(p) * graph.degree;
            for (uint32_t t = 0; t < graph.degree; ++t) {
                red = kernel.combine(red, state.values[base + t]);
            }
            for (uint32_t t = 0; t < graph.degree; ++t) {
                state.values[base + t] = kernel.apply(red, state.values[base + t]);
            }
        }
        if (include_phase2) {
            for (uint32_t h = 0; h < graph.n; ++h) {
                Word red = kernel.identity();
                for (uint32_t x : graph.hyper_adj[h]) {
                    red = kernel.combine(red, state.values[graph.edge_index(x, h)]);
                }
                for (uint32_t x : graph.hyper_adj[h]) {
                    const uint64_t e = graph.edge_index(x, h);
                    state.values[e] = kernel.apply(red, state.values[e]);
                }
            }
        }
        ++state.iteration;
    }
    return state;
}

namespace {

struct Runner {
    const FoldPlan& plan;
    const Kernel& kernel;
    const SimOptions& opt;
    SimTrace& trace;
    EdgeState& state;

    uint64_t timeline = 0;
    std::vector<uint8_t> read_seen{};
    std::vector<uint8_t> write_seen{};

    void fault_coverage(const std::string& msg, uint64_t slot) {
        ++trace.coverage_faults;
        if (opt.abort_on_fault) throw SimFault(msg + " (slot " + std::to_string(slot) + ")", slot);
    }

    void conflict(uint64_t slot, uint32_t mem, uint32_t a, uint32_t b, bool write) {
        trace.conflicts.push_back({slot, mem, a, b, write});
        if (opt.abort_on_fault) {
            throw SimFault("memory conflict: units " + std::to_string(a) + " and " +
                               std::to_string(b) + " access memory " + std::to_string(mem) +
                               " at slot " + std::to_string(slot),
                           slot);
        }
    }

    void record(uint64_t slot, uint32_t unit, uint32_t mem, uint32_t addr, bool write,
                uint64_t edge) {
        if (opt.capture_records) trace.records.push_back({slot, unit, mem, addr, write, edge});
    }

    uint64_t lookup_edge(uint32_t mem, uint32_t addr, uint64_t slot) {
        if (mem >= plan.memory.mem_count || addr >= plan.memory.mem_size) {
            fault_coverage("access outside memory bounds", slot);
            return ~uint64_t{0};
        }
        const uint64_t e = plan.memory.edge_at[mem][addr];
        if (e >= plan.graph.num_edges()) {
            fault_coverage("address holds no edge", slot);
        }
        return e;
    }

    void run_phase1(std::vector<uint8_t>& occupied, uint64_t segment_len) {
        const uint32_t B = plan.units();
        const uint32_t ppb = uint32_t(plan.partition.fold.points_per_block);
        const uint64_t sps = plan.slots_per_step;
        const uint64_t total = plan.graph.num_edges();
        read_seen.assign(total, 0);
        write_seen.assign(total, 0);

        // per-unit cursor into the slot list
        std::vector<size_t> cur(B, 0);
        std::vector<int64_t> read_owner(sps * B), write_owner(sps * B);
        for (uint32_t r = 0; r < ppb; ++r) {
            std::fill(read_owner.begin(), read_owner.end(), -1);
            std::fill(write_owner.begin(), write_owner.end(), -1);
            const uint64_t lo = uint64_t(r) * sps, hi = lo + sps;
            const uint64_t read_base = timeline + (opt.overlap_writes ? lo : 2 * lo);
            const uint64_t write_base = read_base + sps;
            std::vector<std::pair<size_t, size_t>> entry_range(B);
            std::vector<Word> reduced(B, kernel.identity());

            for (uint32_t u = 0; u < B; ++u) {
                const auto& slots = plan.phase1[u];
                const size_t begin = cur[u];
                while (cur[u] < slots.size() && slots[cur[u]].slot < hi) {
                    const Phase1Slot& s = slots[cur[u]];
                    if (s.slot < lo) {
                        fault_coverage("slot out of step order", s.slot);
                        ++cur[u];
                        continue;
                    }
                    const uint64_t rel = s.slot - lo;
                    const uint64_t tslot = read_base + rel;
                    const uint64_t e = lookup_edge(s.mem, s.addr, tslot);
                    auto& owner = read_owner[rel * B + s.mem];
                    if (owner != -1) conflict(tslot, s.mem, uint32_t(owner), u, false);
                    owner = u;
                    if (e < read_seen.size()) {
                        if (read_seen[e]) fault_coverage("edge read twice in phase 1", tslot);
                        read_seen[e] = 1;
                        reduced[u] = kernel.combine(reduced[u], state.values[e]);
                    }
                    occupied[(tslot - timeline) * B + u] = 1;
                    record(tslot, u, s.mem, s.addr, false, e);
                    ++cur[u];
                }
                entry_range[u] = {begin, cur[u]};
            }

            // write-back mirrors the read schedule of the same step
            for (uint32_t u = 0; u < B; ++u) {
                for (size_t idx = entry_range[u].first; idx < entry_range[u].second; ++idx) {
                    const Phase1Slot& s = plan.phase1[u][idx];
                    const uint64_t rel = s.slot - lo;
                    const uint64_t tslot = write_base + rel;
                    auto& owner = write_owner[rel * B + s.mem];
                    if (owner != -1) conflict(tslot, s.mem, uint32_t(owner), u, true);
                    owner = u;
                    if (s.edge < write_seen.size()) {
                        if (write_seen[s.edge]) {
                            fault_coverage("edge written twice in phase 1", tslot);
                        }
                        write_seen[s.edge] = 1;
                        state.values[s.edge] = kernel.apply(reduced[u], state.values[s.edge]);
                    }
                    if (tslot - timeline < segment_len) {
                        occupied[(tslot - timeline) * B + u] = 1;
                    }
                    record(tslot, u, s.mem, s.addr, true, s.edge);
                }
            }
        }
        const uint64_t reads =
            uint64_t(std::count(read_seen.begin(), read_seen.end(), uint8_t{1}));
        if (reads != total) {
            fault_coverage("phase 1 covered " + std::to_string(reads) + " of " +
                               std::to_string(total) + " edges",
                           timeline + segment_len);
        }
    }

    void run_phase2(std::vector<uint8_t>& occupied, uint64_t segment_len) {
        const uint32_t B = plan.units();
        const uint64_t total = plan.graph.num_edges();
        read_seen.assign(total, 0);
        write_seen.assign(total, 0);
        for (uint32_t u = 0; u < B; ++u) {
            uint64_t cursor = 0;
            for (const Phase2Hyperplane& row : plan.phase2[u]) {
                const uint64_t len = row.addrs.size();
                Word red = kernel.identity();
                std::vector<uint64_t> edges(len, ~uint64_t{0});
                for (uint64_t o = 0; o < len; ++o) {
                    const uint64_t tslot = timeline + cursor + o;
                    const uint64_t e = lookup_edge(u, row.addrs[o], tslot);
                    edges[o] = e;
                    if (e < read_seen.size()) {
                        if (read_seen[e]) fault_coverage("edge read twice in phase 2", tslot);
                        read_seen[e] = 1;
                        red = kernel.combine(red, state.values[e]);
                    }
                    if (cursor + o < segment_len) occupied[(cursor + o) * B + u] = 1;
                    record(tslot, u, u, row.addrs[o], false, e);
                }
                const uint64_t wbase = cursor + len;
                for (uint64_t o = 0; o < len; ++o) {
                    const uint64_t tslot = timeline + wbase + o;
                    const uint64_t e = edges[o];
                    if (e < write_seen.size()) {
                        if (write_seen[e]) fault_coverage("edge written twice in phase 2", tslot);
                        write_seen[e] = 1;
                        state.values[e] = kernel.apply(red, state.values[e]);
                    }
                    if (wbase + o < segment_len) occupied[(wbase + o) * B + u] = 1;
                    record(tslot, u, u, row.addrs[o], true, e);
                }
                cursor += opt.overlap_writes ? len : 2 * len;
            }
        }
        const uint64_t reads =
            uint64_t(std::count(read_seen.begin(), read_seen.end(), uint8_t{1}));
        if (reads != total) {
            fault_coverage("phase 2 covered " + std::to_string(reads) + " of " +
                               std::to_string(total) + " edges",
                           timeline + segment_len);
        }
    }
};

}  // namespace

std::pair<EdgeState, SimTrace> run_folded(const FoldPlan& plan, const Kernel& kernel,
                                          EdgeState init, uint64_t iters,
                                          const SimOptions& options) {
    if (init.values.size() != plan.graph.num_edges()) {
        throw std::invalid_argument("edge state does not cover the graph");
    }
    const uint32_t B = plan.units();
    const uint32_t ppb = uint32_t(plan.partition.fold.points_per_block);
    const uint64_t sps = plan.slots_per_step;
    const uint64_t deg = plan.graph.degree;

    SimTrace trace;
    trace.seed = options.seed;
    trace.iterations = iters;
    trace.phase1_reads_per_unit = plan.phase1_slots_per_unit();
    trace.phase2_reads_per_unit = plan.phase2_reads_per_unit();

    EdgeState state = std::move(init);
    Runner run{plan, kernel, options, trace, state};

    const uint64_t p1_len = options.overlap_writes ? (ppb + 1ull) * sps : 2ull * ppb * sps;
    const uint64_t p2_len = options.overlap_writes ? (uint64_t(ppb) + 1) * deg
                                                   : 2ull * ppb * deg;
    for (uint64_t it = 0; it < iters; ++it) {
        std::vector<uint8_t> occ1(p1_len * B, 0);
        run.run_phase1(occ1, p1_len);
        trace.busy_slots += uint64_t(std::count(occ1.begin(), occ1.end(), uint8_t{1}));
        trace.slot_capacity += p1_len * B;
        run.timeline += p1_len;

        std::vector<uint8_t> occ2(p2_len * B, 0);
        run.run_phase2(occ2, p2_len);
        trace.busy_slots += uint64_t(std::count(occ2.begin(), occ2.end(), uint8_t{1}));
        trace.slot_capacity += p2_len * B;
        run.timeline += p2_len;

        ++state.iteration;
    }
    trace.idle_slots = trace.slot_capacity - trace.busy_slots;
    trace.final_state = state;
    return {std::move(state), std::move(trace)};
}

bool CheckReport::all_pass() const {
    for (const auto& e : entries) {
        if (!e.pass) return false;
    }
    return true;
}

CheckReport check_plan(const FoldPlan& plan) {
    CheckReport rep;
    auto add = [&rep](std::string name, bool pass, std::string detail) {
        rep.entries.push_back({std::move(name), pass, std::move(detail)});
    };
    const uint32_t B = plan.units();
    const uint32_t ppb = uint32_t(plan.partition.fold.points_per_block);
    const uint64_t total = plan.graph.num_edges();
    const uint64_t sps = plan.slots_per_step;

    // shape
    {
        bool ok = plan.phase1.size() == B && plan.phase2.size() == B &&
                  plan.memory.mem_count == B && plan.profile.d.size() == B &&
                  plan.memory.mem_of_edge.size() == total &&
                  plan.memory.addr_of_edge.size() == total &&
                  uint64_t(plan.memory.mem_size) * B == total &&
                  plan.round_offset.size() == size_t(B) + 1 && plan.round_offset[B] == sps;
        add("plan-shape", ok, ok ? std::to_string(B) + " units, " +
                                       std::to_string(plan.memory.mem_size) + " words/memory"
                                 : "structural sizes inconsistent");
        if (!ok) return rep;
    }

    // memory map: residency and bijection
    {
        bool ok = true;
        std::string detail;
        std::vector<std::vector<uint8_t>> used(B, std::vector<uint8_t>(plan.memory.mem_size, 0));
        for (uint64_t e = 0; e < total && ok; ++e) {
            const auto [p, h] = plan.graph.edges[e];
            const uint32_t mem = plan.memory.mem_of_edge[e];
            const uint32_t addr = plan.memory.addr_of_edge[e];
            if (mem >= B || addr >= plan.memory.mem_size) {
                ok = false;
                detail = "edge (" + std::to_string(p) + "," + std::to_string(h) +
                         ") mapped out of range";
            } else if (mem != plan.partition.group_of[h]) {
                ok = false;
                detail = "edge (" + std::to_string(p) + "," + std::to_string(h) +
                         ") stored in memory " + std::to_string(mem) + " but hyperplane " +
                         std::to_string(h) + " belongs to group " +
                         std::to_string(plan.partition.group_of[h]);
            } else if (used[mem][addr]) {
                ok = false;
                detail = "memory " + std::to_string(mem) + " address " + std::to_string(addr) +
                         " assigned twice";
            } else {
                used[mem][addr] = 1;
                if (plan.memory.edge_at[mem][addr] != e) {
                    ok = false;
                    detail = "edge_at inverse disagrees at memory " + std::to_string(mem) +
                             " address " + std::to_string(addr);
                }
            }
        }
        add("memory-residency", ok, ok ? "each edge in its group's memory, addresses bijective"
                                       : detail);
    }

    // phase 1: rotation, per-round counts, point consistency, intra-round order
    {
        bool ok = true;
        std::string detail;
        uint64_t idle = 0;
        for (uint32_t u = 0; u < B && ok; ++u) {
            size_t idx = 0;
            const auto& slots = plan.phase1[u];
            for (uint32_t r = 0; r < ppb && ok; ++r) {
                const uint32_t x = plan.block_point(u, r);
                for (uint32_t j = 0; j < B && ok; ++j) {
                    const uint32_t mem = (u + j) % B;
                    const uint64_t lo = uint64_t(r) * sps + plan.round_offset[j];
                    uint32_t cnt = 0;
                    int64_t prev_h = -1;
                    while (idx < slots.size() && slots[idx].slot < lo + plan.profile.d[j]) {
                        const Phase1Slot& s = slots[idx];
                        if (s.slot < lo || s.slot != lo + cnt) {
                            ok = false;
                            detail = "unit " + std::to_string(u) + " slot " +
                                     std::to_string(s.slot) + " breaks round packing";
                            break;
                        }
                        if (s.edge >= total) {
                            ok = false;
                            detail = "unit " + std::to_string(u) + " slot " +
                                     std::to_string(s.slot) + " resolves to no edge";
                            break;
                        }
                        const auto [ep, eh] = plan.graph.edges[s.edge];
                        if (s.mem != mem) {
                            ok = false;
                            detail = "unit " + std::to_string(u) + " round " + std::to_string(j) +
                                     " touches memory " + std::to_string(s.mem) + ", expected " +
                                     std::to_string(mem);
                        } else if (ep != x) {
                            ok = false;
                            detail = "unit " + std::to_string(u) + " step " + std::to_string(r) +
                                     " reads edge of point " + std::to_string(ep) +
                                     ", expected " + std::to_string(x);
                        } else if (plan.memory.addr_of_edge[s.edge] != s.addr ||
                                   plan.memory.mem_of_edge[s.edge] != s.mem) {
                            ok = false;
                            detail = "slot " + std::to_string(s.slot) +
                                     " disagrees with the memory map";
                        } else if (int64_t(eh) <= prev_h) {
                            ok = false;
                            detail = "unit " + std::to_string(u) +
                                     " round not in hyperplane order at slot " +
                                     std::to_string(s.slot);
                        }
                        prev_h = int64_t(eh);
                        ++cnt;
                        ++idx;
                    }
                    if (!ok) break;
                    uint32_t expect = 0;
                    for (uint32_t h : plan.partition.hyperplane_groups[mem]) {
                        if (plan.space.incident(x, h)) ++expect;
                    }
                    if (cnt != expect) {
                        ok = false;
                        detail = "unit " + std::to_string(u) + " step " + std::to_string(r) +
                                 " round " + std::to_string(j) + " has " + std::to_string(cnt) +
                                 " accesses, incidence gives " + std::to_string(expect);
                    }
                    idle += plan.profile.d[j] - cnt;
                }
            }
            if (ok && idx != slots.size()) {
                ok = false;
                detail = "unit " + std::to_string(u) + " has slots beyond the last round";
            }
        }
        if (ok && idle != plan.idle_slots) {
            ok = false;
            detail = "idle accounting: " + std::to_string(idle) + " != " +
                     std::to_string(plan.idle_slots);
        }
        add("phase1-rotation", ok,
            ok ? "lock-step (i+j) mod B rotation, " + std::to_string(plan.idle_slots) +
                     " idle slots"
               : detail);
    }

    // phase 1: per-slot unit -> memory injectivity
    {
        bool ok = true;
        std::string detail;
        std::vector<int64_t> owner(sps * ppb * B, -1);
        for (uint32_t u = 0; u < B && ok; ++u) {
            for (const Phase1Slot& s : plan.phase1[u]) {
                if (s.slot >= sps * ppb || s.mem >= B) {
                    ok = false;
                    detail = "slot " + std::to_string(s.slot) + " out of range";
                    break;
                }
                auto& o = owner[s.slot * B + s.mem];
                if (o != -1) {
                    ok = false;
                    detail = "units " + std::to_string(o) + " and " + std::to_string(u) +
                             " both access memory " + std::to_string(s.mem) + " at slot " +
                             std::to_string(s.slot);
                    break;
                }
                o = u;
            }
        }
        add("phase1-injectivity", ok, ok ? "unit-to-memory map injective at every slot" : detail);
    }

    // phase 1: counter property and read-once coverage
    {
        bool ok = true;
        std::string detail;
        std::vector<std::vector<std::pair<uint64_t, uint32_t>>> per_mem(B);
        for (uint32_t u = 0; u < B; ++u) {
            for (const Phase1Slot& s : plan.phase1[u]) per_mem[s.mem].push_back({s.slot, s.addr});
        }
        for (uint32_t mem = 0; mem < B && ok; ++mem) {
            auto& acc = per_mem[mem];
            std::sort(acc.begin(), acc.end());
            if (acc.size() != plan.memory.mem_size) {
                ok = false;
                detail = "memory " + std::to_string(mem) + " read " +
                         std::to_string(acc.size()) + " times, expected " +
                         std::to_string(plan.memory.mem_size);
                break;
            }
            for (uint32_t a = 0; a < acc.size(); ++a) {
                if (acc[a].second != a) {
                    ok = false;
                    detail = "memory " + std::to_string(mem) + " access " + std::to_string(a) +
                             " reads address " + std::to_string(acc[a].second) +
                             "; phase-1 addresses must replay a counter";
                    break;
                }
            }
        }
        add("phase1-counter", ok,
            ok ? "every memory reads addresses 0,1,2,... in slot order" : detail);
    }

    // phase 2: group alignment, LUT consistency, coverage
    {
        bool ok = true;
        std::string detail;
        for (uint32_t u = 0; u < B && ok; ++u) {
            const auto& group = plan.partition.hyperplane_groups[u];
            if (plan.phase2[u].size() != group.size()) {
                ok = false;
                detail = "unit " + std::to_string(u) + " schedules " +
                         std::to_string(plan.phase2[u].size()) + " hyperplanes, group has " +
                         std::to_string(group.size());
                break;
            }
            std::vector<uint8_t> covered(plan.memory.mem_size, 0);
            for (size_t row = 0; row < group.size() && ok; ++row) {
                const Phase2Hyperplane& ph = plan.phase2[u][row];
                if (ph.hyperplane != group[row]) {
                    ok = false;
                    detail = "unit " + std::to_string(u) + " row " + std::to_string(row) +
                             " handles hyperplane " + std::to_string(ph.hyperplane) +
                             ", group order gives " + std::to_string(group[row]);
                    break;
                }
                const auto& pts = plan.graph.hyper_adj[ph.hyperplane];
                if (ph.addrs.size() != pts.size()) {
                    ok = false;
                    detail = "unit " + std::to_string(u) + " hyperplane " +
                             std::to_string(ph.hyperplane) + " lists " +
                             std::to_string(ph.addrs.size()) + " addresses, degree is " +
                             std::to_string(pts.size());
                    break;
                }
                for (size_t o = 0; o < ph.addrs.size(); ++o) {
                    const uint32_t a = ph.addrs[o];
                    if (a >= plan.memory.mem_size || covered[a]) {
                        ok = false;
                        detail = "unit " + std::to_string(u) + " address " + std::to_string(a) +
                                 (a >= plan.memory.mem_size ? " out of range" : " covered twice");
                        break;
                    }
                    covered[a] = 1;
                    const uint64_t e = plan.memory.edge_at[u][a];
                    if (e >= total) {
                        ok = false;
                        detail = "unit " + std::to_string(u) + " address " + std::to_string(a) +
                                 " resolves to no edge";
                        break;
                    }
                    const auto [ep, eh] = plan.graph.edges[e];
                    if (eh != ph.hyperplane || ep != pts[o]) {
                        ok = false;
                        detail = "unit " + std::to_string(u) + " LUT entry (" +
                                 std::to_string(ph.hyperplane) + "," + std::to_string(o) +
                                 ") resolves to edge (" + std::to_string(ep) + "," +
                                 std::to_string(eh) + ")";
                        break;
                    }
                }
            }
            if (ok && std::count(covered.begin(), covered.end(), uint8_t{1}) !=
                          int64_t(plan.memory.mem_size)) {
                ok = false;
                detail = "unit " + std::to_string(u) + " phase 2 misses addresses";
            }
        }
        add("phase2-local-lut", ok,
            ok ? "local sweeps cover every address exactly once" : detail);
    }

    // profile: sum equals vertex degree (plus padding when not uniform)
    {
        const uint64_t want = plan.graph.degree;
        bool ok = plan.profile.total >= want &&
                  (plan.profile.uniform ? plan.profile.total == want : true);
        add("degree-profile", ok,
            "sum " + std::to_string(plan.profile.total) + (plan.profile.uniform ? " (uniform)"
                                                                                : " (padded)") +
                ", vertex degree " + std::to_string(want));
    }

    return rep;
}

}  // namespace pgfold
