#pragma once

#include "regcheck/graph.hpp"
#include "regcheck/vocab.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace regcheck::dsl {

class RuleParseError : public std::runtime_error {
public:
    RuleParseError(int line, int col, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          line_(line),
          col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_, col_;
};

// Filter / bind expression tree. Symbols are bare identifiers such as
// LEFT and RIGHT, only meaningful as builtin call arguments.
struct Expr {
    enum class Kind { Number, String, Symbol, Var, Compare, And, Or, Not, Call };
    Kind kind = Kind::Number;
    double number = 0.0;
    std::string text;    // String value / Symbol / Var name / Call name
    std::string cmp_op;  // Compare: < <= > >= = !=
    std::vector<Expr> args;
    int line = 1, col = 1;
};

enum class GeoKind { Intersects, Adjacent };

struct Clause {
    enum class Kind { Type, Prop, Filter, NotExists, Geo, Bind };
    Kind kind = Kind::Type;
    int line = 1;

    // Type / Prop
    std::string subject_var;
    rdf::Iri predicate;                  // rdf:type for Type clauses
    rdf::PatternTerm object{rdf::Term()};

    Expr expr;              // Filter condition / Bind call
    std::string bind_var;   // Bind output variable

    std::vector<Clause> body;  // NotExists

    GeoKind geo_kind = GeoKind::Intersects;
    std::string geo_a, geo_b;
    std::optional<double> geo_eps;
};

struct RuleAst {
    std::string id;
    std::string topic;
    std::string severity = "error";
    std::vector<Clause> clauses;
    std::string target;
    std::string message;
};

// Grammar:
//   RULE <qid> TOPIC <id> [SEVERITY <id>]
//   IF <clause>+ THEN NON-COMPLIANT <var> [MESSAGE <text>]
// Clauses: `?v TYPE <iri>`, `?v PROP <iri> ?w|<lit>`, `FILTER <expr>`,
// `NOT EXISTS { <clause>+ }`, `GEO INTERSECTS|ADJACENT ?a ?b [EPS <num>]`,
// `BIND <fn>(args) AS ?v`. Curies resolve against the given namespace
// table. Unbound variable uses and unknown builtin names are errors.
RuleAst parse_rule(const std::string& source, const vocab::VocabTable& table);

// Parses a file containing one or more RULE blocks.
std::vector<RuleAst> parse_rules(const std::string& source, const vocab::VocabTable& table);

bool is_builtin(const std::string& name);

}  // namespace regcheck::dsl
