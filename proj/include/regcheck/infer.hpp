#pragma once

#include "regcheck/graph.hpp"
#include "regcheck/vocab.hpp"

#include <memory>
#include <string>
#include <vector>

namespace regcheck::infer {

class InferError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Small arithmetic tree over antecedent bindings: constants, numeric
// variables, +, -, *, abs.
struct ArithExpr {
    enum class Kind { Const, Var, Add, Sub, Mul, Abs };
    Kind kind = Kind::Const;
    double value = 0.0;
    std::string var;
    std::vector<ArithExpr> args;

    static ArithExpr constant(double v);
    static ArithExpr variable(std::string name);
    static ArithExpr add(ArithExpr a, ArithExpr b);
    static ArithExpr sub(ArithExpr a, ArithExpr b);
    static ArithExpr mul(ArithExpr a, ArithExpr b);
    static ArithExpr abs(ArithExpr a);

    double eval(const rdf::Bindings& bindings, const std::string& rule_name) const;
};

// Consequent position: a constant term, a copied variable, or a numeric
// expression rendered as a decimal literal.
struct TemplateTerm {
    enum class Kind { Const, Var, Computed };
    Kind kind = Kind::Const;
    rdf::Term term;
    std::string var;
    ArithExpr expr;

    TemplateTerm(rdf::Term t) : kind(Kind::Const), term(std::move(t)) {}
    static TemplateTerm variable(std::string name);
    static TemplateTerm computed(ArithExpr e);

    rdf::Term instantiate(const rdf::Bindings& bindings, const std::string& rule_name) const;
};

struct TripleTemplate {
    TemplateTerm subject;
    TemplateTerm predicate;
    TemplateTerm object;
};

struct RewriteRule {
    std::string name;
    int stratum = 0;
    std::vector<rdf::TriplePattern> antecedent;  // shared variables join
    std::vector<TripleTemplate> consequent;
};

enum class AggregateKind { Max, Min };

struct AggregateRule {
    std::string name;
    int stratum = 1;
    std::vector<rdf::TriplePattern> antecedent;
    ArithExpr value;                      // must evaluate numerically per group row
    std::vector<std::string> group_vars;  // grouping key
    std::string subject_var;              // tie-break: natural-order smallest IRI text
    AggregateKind kind = AggregateKind::Max;
    std::vector<TripleTemplate> consequent;
};

struct RuleSet {
    std::vector<RewriteRule> rewrites;
    std::vector<AggregateRule> aggregates;
    std::vector<rdf::TriplePattern> prune_patterns;
};

// Throws InferError when a rule's antecedent depends on a predicate
// produced only at a higher stratum.
void validate_stratification(const RuleSet& rules);

// Runs rewrite rules stratum by stratum to fixpoint; returns triples added.
std::size_t apply_fixpoint(rdf::Graph& graph, const std::vector<RewriteRule>& rules);

// Asserts the extremal binding's consequents per group; returns triples
// added. Non-numeric aggregated values raise InferError naming the rule.
std::size_t apply_aggregates(rdf::Graph& graph, const std::vector<AggregateRule>& rules);

// Rewrites and aggregates interleaved in stratum order, then pruning.
std::size_t run_inference(rdf::Graph& graph, const RuleSet& rules);

// Removes every triple matching any pattern; returns the count removed.
std::size_t prune(rdf::Graph& graph, const std::vector<rdf::TriplePattern>& patterns);

// The standard Regulations-vocabulary rule set: classification shortcut,
// WC / building / physical / structure element typing, fire duration
// copy, storey floor and highest storey aggregates, and the building
// fire-height derivation measured from the given ground datum.
RuleSet builtin_rules(double ground_datum = 0.0);

// reg-vocab.json: namespaces plus rule/aggregate/prune declarations.
RuleSet load_vocab(const std::string& json_text, vocab::VocabTable& table);

}  // namespace regcheck::infer
