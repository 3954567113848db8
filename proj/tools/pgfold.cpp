#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pgfold/folding.hpp"
#include "pgfold/partition.hpp"
#include "pgfold/plan_io.hpp"
#include "pgfold/projective.hpp"
#include "pgfold/simulator.hpp"

namespace {

using nlohmann::ordered_json;
using namespace pgfold;

int fail(const std::string& type, const std::string& message) {
    ordered_json err;
    err["error"] = {{"type", type}, {"message", message}};
    std::cerr << err.dump() << '\n';
    return type == "usage" ? 1 : 2;
}

PolyCoeffs parse_poly(const std::string& csv) {
    PolyCoeffs poly;
    if (csv.empty()) return poly;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        poly.push_back(uint32_t(std::stoul(tok)));
    }
    return poly;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

struct Options {
    uint32_t m = 5;
    uint64_t q = 2;
    uint32_t k = 2;
    uint64_t p = 2;
    uint32_t e = 3;
    std::string poly_csv;
    std::string out;
    std::string dump;
    std::string plan_path;
    std::string kernel = "xor";
    std::string trace_path;
    uint64_t seed = 1;
    uint64_t iters = 1;
    bool overlap = false;
    uint64_t max_order = kDefaultMaxFieldOrder;
    int64_t phi_n = 0, phi_l = 0;
    uint64_t phi_s = 2;
};

int run_field(const Options& o) {
    FieldSpec spec;
    spec.p = o.p;
    spec.e = o.e;
    spec.poly = o.poly_csv.empty() ? default_primitive_poly(o.p, o.e, o.max_order)
                                   : parse_poly(o.poly_csv);
    auto field = FiniteField::build(spec, o.max_order);
    std::ostringstream csv;
    csv << "exponent,coeffs\n";
    for (uint64_t i = 0; i < field.group_order(); ++i) {
        auto c = field.coeffs(field.from_log(int64_t(i)));
        csv << i << ",";
        for (auto it = c.rbegin(); it != c.rend(); ++it) csv << *it;
        csv << "\n";
    }
    if (o.out.empty()) {
        std::cout << csv.str();
    } else {
        write_text(o.out, csv.str());
        std::cout << "wrote " << field.group_order() << " rows to " << o.out << "\n";
    }
    return 0;
}

int run_geometry(const Options& o) {
    auto space = ProjectiveSpace::build(ProjParams::make(o.m, o.q), parse_poly(o.poly_csv),
                                        o.max_order);
    auto graph = incidence_graph(space);
    if (!o.dump.empty()) {
        std::ostringstream csv;
        csv << "point,hyperplane\n";
        for (const auto& [p, h] : graph.edges) csv << p << "," << h << "\n";
        write_text(o.dump, csv.str());
    }
    ordered_json summary;
    summary["m"] = o.m;
    summary["q"] = o.q;
    summary["points"] = space.num_points();
    summary["hyperplanes"] = space.num_hyperplanes();
    summary["degree"] = graph.degree;
    summary["edges"] = graph.num_edges();
    std::cout << summary.dump() << '\n';
    return 0;
}

int run_partition(const Options& o) {
    auto space = ProjectiveSpace::build(ProjParams::make(o.m, o.q), parse_poly(o.poly_csv),
                                        o.max_order);
    auto part = build_partition(space, o.k);
    auto profile = degree_profile(space, part);
    const std::string text = partition_to_json(space, part, profile).dump() + "\n";
    if (o.out.empty()) {
        std::cout << text;
    } else {
        write_text(o.out, text);
        std::cout << "wrote " << part.blocks.size() << " blocks to " << o.out << "\n";
    }
    return 0;
}

int run_schedule(const Options& o) {
    FoldPlan plan = fold_plan(o.m, o.q, o.k, parse_poly(o.poly_csv), o.max_order);
    const std::string text = plan_to_string(plan) + "\n";
    if (o.out.empty()) {
        std::cout << text;
        return 0;
    }
    write_text(o.out, text);
    ordered_json summary;
    summary["units"] = plan.units();
    summary["memories"] = {{"count", plan.memory.mem_count}, {"size", plan.memory.mem_size}};
    summary["degree_profile"] = plan.profile.d;
    summary["phase1_slots_per_unit"] = plan.phase1_slots_per_unit();
    summary["idle_slots"] = plan.idle_slots;
    summary["plan"] = o.out;
    std::cout << summary.dump() << '\n';
    return 0;
}

int run_verify(const Options& o) {
    FoldPlan plan = load_plan_file(o.plan_path, o.max_order);
    CheckReport rep = check_plan(plan);
    std::cout << "plan: " << plan.units() << " units, " << plan.memory.mem_count
              << " memories x " << plan.memory.mem_size << " words\n";
    for (const auto& e : rep.entries) {
        std::cout << (e.pass ? "[ok]   " : "[FAIL] ") << e.name << ": " << e.detail << "\n";
    }
    if (!rep.all_pass()) return fail("verification", "plan checks failed");
    std::cout << "all checks pass\n";
    return 0;
}

Kernel kernel_from_name(const std::string& name) {
    if (name == "xor") return Kernel::xor_assign();
    if (name == "sum") return Kernel::sum_assign();
    throw std::invalid_argument("unknown kernel: " + name + " (expected xor or sum)");
}

int run_simulate(const Options& o) {
    FoldPlan plan = load_plan_file(o.plan_path, o.max_order);
    const Kernel kernel = kernel_from_name(o.kernel);
    EdgeState init = random_edge_state(plan.graph, o.seed, kernel.width_bits);

    SimOptions opts;
    opts.overlap_writes = o.overlap;
    opts.capture_records = !o.trace_path.empty();
    opts.seed = o.seed;
    auto [folded, trace] = run_folded(plan, kernel, init, o.iters, opts);
    EdgeState ref = run_reference(plan.graph, kernel, init, o.iters);
    const bool equivalent = folded.values == ref.values;

    if (!o.trace_path.empty()) {
        std::ostringstream csv;
        csv << "slot,unit,mem,addr,op,edge_point,edge_hyperplane\n";
        for (const AccessRecord& r : trace.records) {
            const auto [p, h] = plan.graph.edges[r.edge];
            csv << r.slot << "," << r.unit << "," << r.mem << "," << r.addr << ","
                << (r.write ? "write" : "read") << "," << p << "," << h << "\n";
        }
        write_text(o.trace_path, csv.str());
    }

    ordered_json summary;
    summary["kernel"] = o.kernel;
    summary["seed"] = o.seed;
    summary["iters"] = o.iters;
    summary["conflicts"] = trace.conflicts.size();
    summary["coverage_faults"] = trace.coverage_faults;
    summary["idle_slots"] = trace.idle_slots;
    summary["busy_slots"] = trace.busy_slots;
    summary["slot_capacity"] = trace.slot_capacity;
    summary["phase1_slots_per_unit"] = trace.phase1_reads_per_unit;
    summary["phase2_slots_per_unit"] = trace.phase2_reads_per_unit;
    summary["equivalent"] = equivalent;
    std::cout << summary.dump() << '\n';

    if (!trace.clean()) return fail("simulation", "conflicts or coverage faults detected");
    if (!equivalent) {
        return fail("simulation", "folded execution differs from the parallel reference");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "pgfold: conflict-free folding of point-hyperplane computation graphs\n"
        "over finite projective geometries (plan schema pgfold-plan/1)"};
    app.require_subcommand(1);
    Options o;

    auto* field = app.add_subcommand("field", "dump GF(p^e) exp/log tables as CSV");
    field->add_option("--p", o.p, "prime characteristic")->required();
    field->add_option("--e", o.e, "extension degree")->required();
    field->add_option("--poly", o.poly_csv, "primitive polynomial, ascending coefficients CSV");
    field->add_option("--out", o.out, "output file (default stdout)");
    field->add_option("--max-field-order", o.max_order, "field size bound");

    auto* geometry = app.add_subcommand("geometry", "build P(m, GF(q)) and dump incidences");
    geometry->add_option("--m", o.m, "projective dimension")->required();
    geometry->add_option("--q", o.q, "base field order")->required();
    geometry->add_option("--poly", o.poly_csv, "primitive polynomial override");
    geometry->add_option("--dump", o.dump, "write edge CSV (point,hyperplane)");
    geometry->add_option("--max-field-order", o.max_order, "field size bound");

    auto* partition = app.add_subcommand("partition", "coset spread, carriers, hyperplane groups");
    partition->add_option("--m", o.m, "projective dimension")->required();
    partition->add_option("--q", o.q, "base field order")->required();
    partition->add_option("--block-dim", o.k, "projective dimension of each block")->required();
    partition->add_option("--poly", o.poly_csv, "primitive polynomial override");
    partition->add_option("--out", o.out, "output file (default stdout)");
    partition->add_option("--max-field-order", o.max_order, "field size bound");

    auto* schedule = app.add_subcommand(
        "schedule", "emit a complete fold plan (plan.json, schema pgfold-plan/1)");
    schedule->add_option("--m", o.m, "projective dimension")->required();
    schedule->add_option("--q", o.q, "base field order")->required();
    schedule->add_option("--block-dim", o.k, "projective dimension of each block")->required();
    schedule->add_option("--poly", o.poly_csv, "primitive polynomial override");
    schedule->add_option("--out", o.out, "plan file (default stdout)");
    schedule->add_option("--max-field-order", o.max_order, "field size bound");

    auto* verify = app.add_subcommand("verify", "static checks of a plan file");
    verify->add_option("plan", o.plan_path, "plan.json (schema pgfold-plan/1)")->required();
    verify->add_option("--max-field-order", o.max_order, "field size bound");

    auto* simulate = app.add_subcommand(
        "simulate", "run a plan against the fully parallel reference");
    simulate->add_option("plan", o.plan_path, "plan.json (schema pgfold-plan/1)")->required();
    simulate->add_option("--kernel", o.kernel, "xor | sum")->required();
    simulate->add_option("--seed", o.seed, "edge-state seed");
    simulate->add_option("--iters", o.iters, "iterations");
    simulate->add_option("--trace", o.trace_path, "write access trace CSV");
    simulate->add_flag("--overlap", o.overlap, "overlap write-back with the next read");
    simulate->add_option("--max-field-order", o.max_order, "field size bound");

    auto* phi_cmd = app.add_subcommand("phi", "count l-dimensional subspaces in an n-dimensional space");
    phi_cmd->add_option("n", o.phi_n, "ambient projective dimension")->required();
    phi_cmd->add_option("l", o.phi_l, "subspace dimension")->required();
    phi_cmd->add_option("s", o.phi_s, "field order")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*field) return run_field(o);
        if (*geometry) return run_geometry(o);
        if (*partition) return run_partition(o);
        if (*schedule) return run_schedule(o);
        if (*verify) return run_verify(o);
        if (*simulate) return run_simulate(o);
        if (*phi_cmd) {
            std::cout << phi(o.phi_n, o.phi_l, o.phi_s) << '\n';
            return 0;
        }
    } catch (const SimFault& ex) {
        return fail("conflict", ex.what());
    } catch (const PlanSchemaError& ex) {
        return fail("schema", ex.what());
    } catch (const std::invalid_argument& ex) {
        return fail("usage", ex.what());
    } catch (const std::exception& ex) {
        return fail("internal", ex.what());
    }
    return 1;
}
