#pragma once

#include "regcheck/plan.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace regcheck::report {

struct ExplanationEntry {
    std::string role;
    std::string iri;
    std::string guid;
};

struct Finding {
    std::string rule_id;
    std::string topic;
    std::string severity;
    std::string target_iri;
    std::string target_guid;
    std::string message;
    std::vector<ExplanationEntry> explanation;
};

struct RuleStats {
    std::string id;
    std::string topic;
    std::size_t candidates = 0;
    std::size_t findings = 0;
    std::int64_t ms = 0;
};

struct ComplianceReport {
    std::string model_path;
    std::string model_hash;
    std::string pack_name;
    std::string pack_version;
    std::vector<RuleStats> rules;
    std::vector<Finding> findings;  // sorted by (rule id, target IRI)
    std::vector<dsl::Diagnostic> diagnostics;
};

// UTF-8 JSON with stable key order; byte-identical for equal reports.
std::string write_report_json(const ComplianceReport& report);

ComplianceReport read_report_json(const std::string& json_text);

// BCF 2.1-shaped ZIP: bcf.version plus one markup.bcf per finding under a
// deterministic name-based UUID folder. Findings without a GUID are
// emitted with an empty component list and reported via `diagnostics`.
std::string write_bcf(const ComplianceReport& report,
                      std::vector<dsl::Diagnostic>* diagnostics = nullptr);

// Name-based UUID over rule id + target GUID (stable across runs).
std::string finding_uuid(const std::string& rule_id, const std::string& guid);

}  // namespace regcheck::report
