#pragma once

#include "regcheck/geom.hpp"
#include "regcheck/infer.hpp"
#include "regcheck/lift.hpp"
#include "regcheck/pack.hpp"
#include "regcheck/report.hpp"
#include "regcheck/step.hpp"

#include <optional>
#include <set>
#include <string>

namespace regcheck::check {

class CheckError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckConfig {
    std::set<std::string> topics;  // empty = all pack topics
    double ground_datum = 0.0;
    std::optional<std::string> lift_config_path;
    // byte-stable output: per-rule timings are reported as 0
    bool deterministic = true;
};

// The fully pre-processed knowledge base for one model.
struct PreparedModel {
    step::StepFile file;
    lift::UnitScale scale;
    rdf::Graph graph;
    geom::GeomIndex geometry;
    std::vector<dsl::Diagnostic> diagnostics;
};

// parse -> lift -> geometric pre-process -> semantic pre-process
PreparedModel prepare_model(const std::string& model_path, const CheckConfig& config);

// Instance ids of all lifted subjects, for the geometric stage.
std::vector<std::int64_t> lifted_instances(const rdf::Graph& graph);

// Full pipeline plus rule execution for the selected topics.
// Parse failures throw CheckError; a rule that fails at runtime is
// reported in diagnostics without affecting other rules.
report::ComplianceReport run_check(const std::string& model_path, const dsl::RulePack& pack,
                                   const CheckConfig& config);

}  // namespace regcheck::check
