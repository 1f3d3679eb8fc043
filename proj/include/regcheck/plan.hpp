#pragma once

#include "regcheck/dsl.hpp"
#include "regcheck/geom.hpp"
#include "regcheck/graph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace regcheck::dsl {

struct PackDefaults {
    double freespace_height_m = 2.0;
    double adjacency_eps_m = 0.001;
    // (upper bound meters, required minutes); bounds strictly increasing,
    // last bound infinity. Empty means not configured.
    std::vector<std::pair<double, double>> fire_threshold_table;
    bool exempt_floor_beneath = true;
};

// First row whose upper bound is >= height, intervals half-open
// (lower, upper]. Negative heights are an error.
double resolve_fire_threshold(double height_m,
                              const std::vector<std::pair<double, double>>& table);

struct Diagnostic {
    std::string stage;
    std::string message;
};

struct PlanOp {
    enum class Kind { Scan, HashJoin, Filter, AntiJoin, Geo, Bind, Project };
    Kind kind = Kind::Scan;

    std::optional<rdf::TriplePattern> pattern;  // Scan / HashJoin
    std::vector<std::string> join_vars;         // HashJoin

    Expr expr;             // Filter condition or Bind call
    std::string bind_var;  // Bind output

    std::vector<PlanOp> body;  // AntiJoin sub-plan

    GeoKind geo_kind = GeoKind::Intersects;  // Geo
    std::string geo_a, geo_b;
    std::optional<double> geo_eps;

    std::string target;                         // Project
    std::vector<std::string> explanation_vars;  // Project
    int line = 1;
};

struct QueryPlan {
    RuleAst ast;
    std::vector<PlanOp> ops;
    std::size_t last_positive = 0;  // candidates counted after this op
    std::vector<std::string> warnings;
};

// Positive patterns ordered most-selective-first (constant count, ties by
// source order) and joined on shared variables; FILTER/GEO/BIND and
// NOT EXISTS anti-joins placed at the earliest point where their
// variables are bound. Vocabulary terms outside the declared layers
// produce warnings, not errors.
QueryPlan compile_rule(const RuleAst& ast, const vocab::VocabTable& table);

struct RuleFinding {
    rdf::Term target;
    // (role, element IRI text), deduplicated and sorted
    std::vector<std::pair<std::string, std::string>> explanation;
};

struct ExecStats {
    std::size_t candidates = 0;
};

// Set semantics over the target variable; geo predicates and CLEAR record
// the concrete obstructing elements as explanations. Candidates without a
// box for a geo predicate are skipped and recorded in diagnostics.
std::vector<RuleFinding> execute(const QueryPlan& plan, const rdf::Graph& graph,
                                 const geom::GeomIndex& geom, const PackDefaults& defaults,
                                 ExecStats* stats = nullptr,
                                 std::vector<Diagnostic>* diagnostics = nullptr);

}  // namespace regcheck::dsl
