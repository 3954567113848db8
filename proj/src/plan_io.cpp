#include "pgfold/plan_io.hpp"

#include <fstream>

namespace pgfold {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const json& need(const json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) {
        throw PlanSchemaError(path + "/" + key, "missing field");
    }
    return j.at(key);
}

uint64_t need_uint(const json& j, const char* key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_number_unsigned()) {
        throw PlanSchemaError(path + "/" + key, "expected a non-negative integer");
    }
    return v.get<uint64_t>();
}

const json& need_array(const json& j, const char* key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_array()) throw PlanSchemaError(path + "/" + key, "expected an array");
    return v;
}

uint64_t uint_at(const json& arr, size_t i, const std::string& path) {
    if (i >= arr.size() || !arr[i].is_number_unsigned()) {
        throw PlanSchemaError(path + "/" + std::to_string(i),
                              "expected a non-negative integer");
    }
    return arr[i].get<uint64_t>();
}

}  // namespace

ordered_json plan_to_json(const FoldPlan& plan) {
    const auto& proj = plan.space.params();
    const auto& fold = plan.partition.fold;
    ordered_json j;
    j["schema"] = kPlanSchema;
    ordered_json params;
    params["m"] = proj.m;
    params["q"] = proj.q;
    params["p"] = proj.p;
    params["e"] = proj.field_degree();
    params["poly"] = plan.space.field().spec().poly;
    params["k"] = fold.k;
    params["t"] = fold.t;
    params["case"] = fold.fold_case == FoldCase::kOdd ? "odd" : "even";
    params["num_points"] = plan.space.num_points();
    params["num_blocks"] = fold.num_blocks;
    params["points_per_block"] = fold.points_per_block;
    params["degree"] = plan.graph.degree;
    j["params"] = std::move(params);
    j["memories"] = {{"count", plan.memory.mem_count}, {"size", plan.memory.mem_size}};

    ordered_json mm = ordered_json::array();
    for (uint64_t e = 0; e < plan.graph.num_edges(); ++e) {
        const auto [p, h] = plan.graph.edges[e];
        mm.push_back({p, h, plan.memory.mem_of_edge[e], plan.memory.addr_of_edge[e]});
    }
    j["memory_map"] = std::move(mm);

    ordered_json p1 = ordered_json::array();
    for (const auto& unit : plan.phase1) {
        ordered_json rows = ordered_json::array();
        for (const Phase1Slot& s : unit) rows.push_back({s.slot, s.mem, s.addr});
        p1.push_back(std::move(rows));
    }
    j["phase1"] = std::move(p1);

    ordered_json p2 = ordered_json::array();
    for (const auto& unit : plan.phase2) {
        ordered_json rows = ordered_json::array();
        for (const Phase2Hyperplane& row : unit) rows.push_back({row.hyperplane, row.addrs});
        p2.push_back(std::move(rows));
    }
    j["phase2"] = std::move(p2);

    j["degree_profile"] = plan.profile.d;
    j["idle_slots"] = plan.idle_slots;
    return j;
}

std::string plan_to_string(const FoldPlan& plan) { return plan_to_json(plan).dump(); }

FoldPlan plan_from_json(const json& j, uint64_t max_order) {
    if (!j.is_object()) throw PlanSchemaError("", "plan must be a JSON object");
    const json& schema = need(j, "schema", "");
    if (!schema.is_string() || schema.get<std::string>() != kPlanSchema) {
        throw PlanSchemaError("/schema", "expected \"" + std::string(kPlanSchema) + "\"");
    }
    const json& params = need(j, "params", "");
    const uint32_t m = uint32_t(need_uint(params, "m", "/params"));
    const uint64_t q = need_uint(params, "q", "/params");
    const uint32_t k = uint32_t(need_uint(params, "k", "/params"));
    const json& jpoly = need_array(params, "poly", "/params");
    PolyCoeffs poly;
    for (size_t i = 0; i < jpoly.size(); ++i) {
        poly.push_back(uint32_t(uint_at(jpoly, i, "/params/poly")));
    }

    FoldPlan plan;
    try {
        plan.space = ProjectiveSpace::build(ProjParams::make(m, q), std::move(poly), max_order);
        plan.graph = incidence_graph(plan.space);
        plan.partition = build_partition(plan.space, k);
    } catch (const std::exception& ex) {
        throw PlanSchemaError("/params", ex.what());
    }
    const uint32_t B = plan.units();
    const uint64_t total = plan.graph.num_edges();

    const json& memories = need(j, "memories", "");
    if (need_uint(memories, "count", "/memories") != B) {
        throw PlanSchemaError("/memories/count", "expected " + std::to_string(B));
    }
    const uint64_t mem_size = need_uint(memories, "size", "/memories");
    if (mem_size * B != total) {
        throw PlanSchemaError("/memories/size",
                              "expected " + std::to_string(total / B));
    }

    plan.memory.mem_count = B;
    plan.memory.mem_size = uint32_t(mem_size);
    plan.memory.mem_of_edge.assign(total, 0);
    plan.memory.addr_of_edge.assign(total, 0);
    plan.memory.edge_at.assign(B, std::vector<uint64_t>(mem_size, ~uint64_t{0}));
    const json& mm = need_array(j, "memory_map", "");
    if (mm.size() != total) {
        throw PlanSchemaError("/memory_map", "expected " + std::to_string(total) + " rows");
    }
    for (size_t o = 0; o < mm.size(); ++o) {
        const std::string path = "/memory_map/" + std::to_string(o);
        const json& row = mm[o];
        if (!row.is_array() || row.size() != 4) {
            throw PlanSchemaError(path, "expected [point, hyperplane, mem, addr]");
        }
        const uint64_t p = uint_at(row, 0, path);
        const uint64_t h = uint_at(row, 1, path);
        const uint64_t mem = uint_at(row, 2, path);
        const uint64_t addr = uint_at(row, 3, path);
        if (o >= plan.graph.edges.size() ||
            plan.graph.edges[o] != std::pair{uint32_t(p), uint32_t(h)}) {
            throw PlanSchemaError(path, "rows must list edges in canonical point-major order");
        }
        if (mem >= B) throw PlanSchemaError(path + "/2", "memory index out of range");
        if (addr >= mem_size) throw PlanSchemaError(path + "/3", "address out of range");
        plan.memory.mem_of_edge[o] = uint32_t(mem);
        plan.memory.addr_of_edge[o] = uint32_t(addr);
        plan.memory.edge_at[mem][addr] = o;
    }

    const json& dp = need_array(j, "degree_profile", "");
    if (dp.size() != B) {
        throw PlanSchemaError("/degree_profile", "expected " + std::to_string(B) + " rounds");
    }
    plan.profile.d.clear();
    plan.profile.total = 0;
    for (size_t i = 0; i < dp.size(); ++i) {
        plan.profile.d.push_back(uint32_t(uint_at(dp, i, "/degree_profile")));
        plan.profile.total += plan.profile.d.back();
    }
    plan.profile.uniform = plan.profile.total == plan.graph.degree;
    plan.round_offset.assign(B + 1, 0);
    for (uint32_t i = 0; i < B; ++i) {
        plan.round_offset[i + 1] = plan.round_offset[i] + plan.profile.d[i];
    }
    plan.slots_per_step = plan.round_offset[B];
    plan.idle_slots = need_uint(j, "idle_slots", "");

    const json& p1 = need_array(j, "phase1", "");
    if (p1.size() != B) {
        throw PlanSchemaError("/phase1", "expected " + std::to_string(B) + " units");
    }
    plan.phase1.assign(B, {});
    for (size_t u = 0; u < B; ++u) {
        const std::string upath = "/phase1/" + std::to_string(u);
        if (!p1[u].is_array()) throw PlanSchemaError(upath, "expected an array of slots");
        uint64_t prev_slot = 0;
        bool first = true;
        for (size_t s = 0; s < p1[u].size(); ++s) {
            const std::string path = upath + "/" + std::to_string(s);
            const json& row = p1[u][s];
            if (!row.is_array() || row.size() != 3) {
                throw PlanSchemaError(path, "expected [slot, mem, addr]");
            }
            Phase1Slot slot;
            slot.slot = uint_at(row, 0, path);
            slot.mem = uint32_t(uint_at(row, 1, path));
            slot.addr = uint32_t(uint_at(row, 2, path));
            if (!first && slot.slot <= prev_slot) {
                throw PlanSchemaError(path + "/0", "slots must be strictly ascending");
            }
            if (slot.mem >= B) throw PlanSchemaError(path + "/1", "memory index out of range");
            if (slot.addr >= mem_size) throw PlanSchemaError(path + "/2", "address out of range");
            slot.edge = plan.memory.edge_at[slot.mem][slot.addr];
            prev_slot = slot.slot;
            first = false;
            plan.phase1[u].push_back(slot);
        }
    }

    const json& p2 = need_array(j, "phase2", "");
    if (p2.size() != B) {
        throw PlanSchemaError("/phase2", "expected " + std::to_string(B) + " units");
    }
    plan.phase2.assign(B, {});
    for (size_t u = 0; u < B; ++u) {
        const std::string upath = "/phase2/" + std::to_string(u);
        if (!p2[u].is_array()) throw PlanSchemaError(upath, "expected an array of rows");
        for (size_t r = 0; r < p2[u].size(); ++r) {
            const std::string path = upath + "/" + std::to_string(r);
            const json& row = p2[u][r];
            if (!row.is_array() || row.size() != 2 || !row[1].is_array()) {
                throw PlanSchemaError(path, "expected [hyperplane, [addr, ...]]");
            }
            Phase2Hyperplane ph;
            ph.hyperplane = uint32_t(uint_at(row, 0, path));
            if (ph.hyperplane >= plan.space.num_hyperplanes()) {
                throw PlanSchemaError(path + "/0", "hyperplane index out of range");
            }
            for (size_t a = 0; a < row[1].size(); ++a) {
                const uint64_t addr = uint_at(row[1], a, path + "/1");
                if (addr >= mem_size) {
                    throw PlanSchemaError(path + "/1/" + std::to_string(a),
                                          "address out of range");
                }
                ph.addrs.push_back(uint32_t(addr));
            }
            plan.phase2[u].push_back(std::move(ph));
        }
    }
    return plan;
}

FoldPlan load_plan_file(const std::string& path, uint64_t max_order) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open plan file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& ex) {
        throw PlanSchemaError("", std::string("not valid JSON: ") + ex.what());
    }
    return plan_from_json(j, max_order);
}

void save_plan_file(const FoldPlan& plan, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << plan_to_string(plan) << '\n';
}

ordered_json partition_to_json(const ProjectiveSpace& space, const SpreadPartition& part,
                               const DegreeProfile& profile) {
    const auto& proj = space.params();
    ordered_json j;
    ordered_json params;
    params["m"] = proj.m;
    params["q"] = proj.q;
    params["poly"] = space.field().spec().poly;
    params["k"] = part.fold.k;
    params["t"] = part.fold.t;
    params["case"] = part.fold.fold_case == FoldCase::kOdd ? "odd" : "even";
    params["num_blocks"] = part.fold.num_blocks;
    params["points_per_block"] = part.fold.points_per_block;
    params["equivariant"] = part.equivariant;
    j["params"] = std::move(params);
    ordered_json blocks = ordered_json::array();
    for (const Flat& f : part.blocks) blocks.push_back(f.points);
    j["blocks"] = std::move(blocks);
    ordered_json carriers = ordered_json::array();
    for (const Flat& f : part.carriers) carriers.push_back(f.points);
    j["carriers"] = std::move(carriers);
    j["hyperplane_blocks"] = part.hyperplane_groups;
    j["degree_profile"] = profile.d;
    return j;
}

}  // namespace pgfold
