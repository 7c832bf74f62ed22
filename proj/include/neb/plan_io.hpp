#pragma once

#include <filesystem>
#include <string>

#include "neb/harness.hpp"

namespace neb {

// Canonical JSON serialization of an experiment plan. Parsing is strict:
// unknown or missing keys are rejected with a field diagnostic, and the
// loaded plan is validated. load(emit(plan)) == plan.
ExperimentPlan parse_plan_json(const std::string& text);
ExperimentPlan load_plan(const std::filesystem::path& path);
std::string emit_plan_json(const ExperimentPlan& plan);

}  // namespace neb
