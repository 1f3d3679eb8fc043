#include "regcheck/checker.hpp"

#include "regcheck/util.hpp"
#include "regcheck/vocab.hpp"

#include <algorithm>
#include <chrono>

namespace regcheck::check {

using rdf::PatternTerm;
using rdf::Term;
using rdf::TriplePattern;

std::vector<std::int64_t> lifted_instances(const rdf::Graph& graph) {
    std::vector<std::int64_t> out;
    TriplePattern typed{PatternTerm::var("s"), PatternTerm(Term(vocab::rdf_type())),
                        PatternTerm::var("c")};
    const std::string prefix(vocab::ns::inst);
    for (const auto& b : graph.match(typed)) {
        const Term& s = b.at("s");
        if (!s.is_iri()) continue;
        const std::string& text = s.iri().text();
        if (text.rfind(prefix, 0) != 0) continue;
        out.push_back(std::stoll(text.substr(prefix.size())));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

PreparedModel prepare_model(const std::string& model_path, const CheckConfig& config) {
    PreparedModel model;

    std::string source;
    try {
        source = read_file(model_path);
    } catch (const std::exception& e) {
        throw CheckError(e.what());
    }
    try {
        model.file = step::parse_step(source);
    } catch (const step::ParseError& e) {
        throw CheckError(model_path + ": " + e.what());
    }
    for (const auto& w : model.file.warnings) model.diagnostics.push_back({"parse", w});

    lift::LiftConfig lift_config = lift::default_lift_config();
    if (config.lift_config_path) {
        try {
            lift_config = lift::load_lift_config(read_file(*config.lift_config_path));
        } catch (const std::exception& e) {
            throw CheckError(std::string("lift config: ") + e.what());
        }
    }

    std::vector<std::string> unit_warnings;
    model.scale = lift::extract_units(model.file, unit_warnings);
    for (const auto& w : unit_warnings) model.diagnostics.push_back({"units", w});

    auto lifted = lift::lift_model(model.file, model.scale, lift_config);
    model.graph = std::move(lifted.graph);
    for (const auto& w : lifted.warnings) model.diagnostics.push_back({"lift", w});

    auto instances = lifted_instances(model.graph);
    model.geometry = geom::build_geometry(model.file, model.scale, instances, model.graph);
    for (const auto& [iri, reason] : model.geometry.missing)
        model.diagnostics.push_back({"geometry", "<" + iri + ">: " + reason});

    infer::run_inference(model.graph, infer::builtin_rules(config.ground_datum));
    return model;
}

namespace {

std::string guid_of(const rdf::Graph& graph, const std::string& iri_text) {
    TriplePattern p{PatternTerm(Term(rdf::Iri(iri_text))),
                    PatternTerm(Term(vocab::ifc("guid"))), PatternTerm::var("g")};
    for (const auto& b : graph.match(p)) {
        const Term& g = b.at("g");
        if (g.is_literal()) return g.literal().lexical();
    }
    return "";
}

std::string instantiate_message(const std::string& message, const std::string& target_iri) {
    // the only supported placeholder is {target}
    std::string out = message;
    const std::string key = "{target}";
    for (auto at = out.find(key); at != std::string::npos; at = out.find(key))
        out.replace(at, key.size(), target_iri);
    return out;
}

}  // namespace

report::ComplianceReport run_check(const std::string& model_path, const dsl::RulePack& pack,
                                   const CheckConfig& config) {
    for (const auto& topic : config.topics)
        if (std::find(pack.manifest.topics.begin(), pack.manifest.topics.end(), topic) ==
            pack.manifest.topics.end())
            throw CheckError("selected topic '" + topic + "' is not a topic of pack '" +
                             pack.manifest.name + "'");

    PreparedModel model = prepare_model(model_path, config);

    report::ComplianceReport out;
    out.model_path = model_path;
    out.model_hash = sha256_hex(read_file(model_path));
    out.pack_name = pack.manifest.name;
    out.pack_version = pack.manifest.version;
    out.diagnostics = std::move(model.diagnostics);

    for (const auto& plan : pack.rules) {
        if (!config.topics.empty() && !config.topics.count(plan.ast.topic)) continue;
        for (const auto& w : plan.warnings) out.diagnostics.push_back({"compile", w});

        report::RuleStats stats;
        stats.id = plan.ast.id;
        stats.topic = plan.ast.topic;

        auto start = std::chrono::steady_clock::now();
        try {
            dsl::ExecStats exec_stats;
            auto findings =
                dsl::execute(plan, model.graph, model.geometry, pack.defaults, &exec_stats,
                             &out.diagnostics);
            stats.candidates = exec_stats.candidates;
            stats.findings = findings.size();
            for (const auto& f : findings) {
                report::Finding finding;
                finding.rule_id = plan.ast.id;
                finding.topic = plan.ast.topic;
                finding.severity = plan.ast.severity;
                finding.target_iri = f.target.is_iri() ? f.target.iri().text() : f.target.token();
                finding.target_guid = guid_of(model.graph, finding.target_iri);
                finding.message = instantiate_message(plan.ast.message, finding.target_iri);
                for (const auto& [role, iri] : f.explanation)
                    finding.explanation.push_back({role, iri, guid_of(model.graph, iri)});
                out.findings.push_back(std::move(finding));
            }
        } catch (const std::exception& e) {
            // per-rule isolation: record and continue with the other rules
            out.diagnostics.push_back(
                {"execute", "rule '" + plan.ast.id + "' failed: " + e.what()});
        }
        auto elapsed = std::chrono::steady_clock::now() - start;
        stats.ms = config.deterministic
                       ? 0
                       : std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
        out.rules.push_back(std::move(stats));
    }

    std::sort(out.findings.begin(), out.findings.end(),
              [](const report::Finding& a, const report::Finding& b) {
                  if (a.rule_id != b.rule_id) return a.rule_id < b.rule_id;
                  return a.target_iri < b.target_iri;
              });
    return out;
}

}  // namespace regcheck::check
