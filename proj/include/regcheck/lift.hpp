#pragma once

#include "regcheck/graph.hpp"
#include "regcheck/step.hpp"

#include <set>
#include <string>
#include <vector>

namespace regcheck::lift {

struct UnitScale {
    double length_to_meters = 1.0;
};

struct PropertyMapping {
    std::string pset;  // "*" matches any property set name
    std::string prop;
    rdf::Iri predicate;
};

struct LiftConfig {
    std::set<std::string> keep_entities;
    std::set<std::string> keep_relations;
    std::vector<PropertyMapping> property_map;
};

struct LiftResult {
    rdf::Graph graph;
    std::vector<std::string> warnings;
};

LiftConfig default_lift_config();

// Parses the lift.json schema:
//   { "keep_entities": [...], "keep_relations": [...],
//     "property_map": [{"pset": "...", "prop": "...", "predicate": "..."}] }
LiftConfig load_lift_config(const std::string& json_text);

// Reads IFCSIUNIT; metre-based models yield 1.0, MILLI prefix 0.001.
// Missing declaration yields 1.0 plus a warning.
UnitScale extract_units(const step::StepFile& file, std::vector<std::string>& warnings);

// Converts kept entities and relations into ifc-namespace triples with all
// lengths scaled to meters. Deterministic for a given (file, scale, config).
LiftResult lift_model(const step::StepFile& file, const UnitScale& scale,
                      const LiftConfig& config);

}  // namespace regcheck::lift
