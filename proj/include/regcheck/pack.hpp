#pragma once

#include "regcheck/plan.hpp"

#include <string>
#include <vector>

namespace regcheck::dsl {

class PackError : public std::runtime_error {
public:
    explicit PackError(const std::vector<std::string>& errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

struct PackManifest {
    std::string name;
    std::string version;
    std::string description;
    std::vector<std::string> topics;
    std::vector<std::string> authors;
};

struct RulePack {
    PackManifest manifest;
    PackDefaults defaults;
    vocab::VocabTable vocabulary;
    std::vector<QueryPlan> rules;  // parsed and compiled

    const QueryPlan* find_rule(const std::string& id) const;
};

// ZIP archive holding manifest.json and rules/*.rule. All parse errors are
// collected and reported together; duplicate rule ids and topics missing
// from the manifest are load errors. Defaults merge over engine defaults.
RulePack load_pack(const std::string& zip_bytes);

RulePack load_pack_file(const std::string& path);

// Zips a pack directory (deterministically) after checking the layout.
std::string write_pack(const std::string& directory);

struct LintDiagnostic {
    std::string rule_id;
    std::string kind;  // unknown-term | unused-variable | unreachable-clause | vacuous-rule
    std::string message;
};

// Unknown vocabulary terms, unused variables, constant FILTER clauses and
// rules with no geometric or property constraint.
std::vector<LintDiagnostic> lint_pack(const RulePack& pack, const vocab::VocabTable& table);

}  // namespace regcheck::dsl
