#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "pgfold/folding.hpp"

namespace pgfold {

inline constexpr const char* kPlanSchema = "pgfold-plan/1";

/// Schema violation in a plan file; path points at the offending field.
class PlanSchemaError : public std::runtime_error {
public:
    PlanSchemaError(std::string path, const std::string& msg)
        : std::runtime_error(path + ": " + msg), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// Canonical serialization: fixed key order, integers only, units ascending,
/// slots ascending. Re-serializing a parsed plan is byte-identical.
nlohmann::ordered_json plan_to_json(const FoldPlan& plan);
std::string plan_to_string(const FoldPlan& plan);

/// Rebuilds the geometry and partition from the recorded parameters, then
/// adopts the serialized memory map and schedules as-is (semantic validity is
/// check_plan's job). Throws PlanSchemaError on malformed input.
FoldPlan plan_from_json(const nlohmann::json& j,
                        uint64_t max_order = kDefaultMaxFieldOrder);

FoldPlan load_plan_file(const std::string& path,
                        uint64_t max_order = kDefaultMaxFieldOrder);
void save_plan_file(const FoldPlan& plan, const std::string& path);

nlohmann::ordered_json partition_to_json(const ProjectiveSpace& space,
                                         const SpreadPartition& part,
                                         const DegreeProfile& profile);

}  // namespace pgfold
