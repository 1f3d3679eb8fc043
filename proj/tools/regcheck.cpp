#include "regcheck/checker.hpp"
#include "regcheck/util.hpp"
#include "regcheck/vocab.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

using namespace regcheck;

int cmd_check(const std::string& model, const std::string& pack_path, const std::string& topics,
              const std::string& out_path, const std::string& bcf_path,
              const std::string& lift_config, double ground, bool timings) {
    auto pack = dsl::load_pack_file(pack_path);

    check::CheckConfig config;
    config.ground_datum = ground;
    config.deterministic = !timings;
    if (!lift_config.empty()) config.lift_config_path = lift_config;
    if (!topics.empty()) {
        std::istringstream ss(topics);
        std::string topic;
        while (std::getline(ss, topic, ','))
            if (!topic.empty()) config.topics.insert(topic);
    }

    auto result = check::run_check(model, pack, config);
    std::string json = report::write_report_json(result);
    if (out_path.empty())
        std::cout << json;
    else
        write_file(out_path, json);

    if (!bcf_path.empty()) {
        std::vector<dsl::Diagnostic> bcf_diags;
        write_file(bcf_path, report::write_bcf(result, &bcf_diags));
        for (const auto& d : bcf_diags) std::cerr << d.stage << ": " << d.message << "\n";
    }

    std::cerr << result.findings.size() << " finding(s) across " << result.rules.size()
              << " rule(s)\n";
    return result.findings.empty() ? 0 : 1;
}

int cmd_convert(const std::string& model, const std::string& out_path, const std::string& stage,
                double ground) {
    check::CheckConfig config;
    config.ground_datum = ground;

    std::string source = read_file(model);
    auto file = step::parse_step(source);
    std::vector<std::string> warnings;
    auto scale = lift::extract_units(file, warnings);
    auto lifted = lift::lift_model(file, scale, lift::default_lift_config());
    rdf::Graph graph = std::move(lifted.graph);
    if (stage != "lifted") {
        auto instances = check::lifted_instances(graph);
        geom::build_geometry(file, scale, instances, graph);
    }
    if (stage == "inferred") infer::run_inference(graph, infer::builtin_rules(ground));

    std::string nt = rdf::serialize_ntriples(graph);
    if (out_path.empty())
        std::cout << nt;
    else
        write_file(out_path, nt);
    std::cerr << graph.count() << " triple(s) at stage '" << stage << "'\n";
    return 0;
}

int cmd_lint(const std::string& pack_path) {
    auto pack = dsl::load_pack_file(pack_path);
    auto diagnostics = dsl::lint_pack(pack, pack.vocabulary);
    for (const auto& d : diagnostics)
        std::cout << d.kind << ": " << d.message << "\n";
    std::cerr << pack.rules.size() << " rule(s), " << diagnostics.size() << " diagnostic(s)\n";
    return 0;
}

int cmd_explain(const std::string& report_path, const std::string& rule_id) {
    auto rep = report::read_report_json(read_file(report_path));
    std::size_t shown = 0;
    for (const auto& f : rep.findings) {
        if (f.rule_id != rule_id) continue;
        ++shown;
        std::cout << f.rule_id << " [" << f.severity << "] " << f.target_iri;
        if (!f.target_guid.empty()) std::cout << " (guid " << f.target_guid << ")";
        std::cout << "\n  " << f.message << "\n";
        for (const auto& e : f.explanation) {
            std::cout << "  - " << e.role << " " << e.iri;
            if (!e.guid.empty()) std::cout << " (guid " << e.guid << ")";
            std::cout << "\n";
        }
    }
    if (shown == 0) std::cout << "no findings for rule '" << rule_id << "'\n";
    return 0;
}

int cmd_pack(const std::string& directory, const std::string& out_path) {
    write_file(out_path, dsl::write_pack(directory));
    std::cerr << "wrote " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"regcheck - building code compliance checker for IFC models"};
    app.require_subcommand(1);

    std::string model, pack_path, topics, out_path, bcf_path, lift_config, stage = "inferred";
    std::string report_path, rule_id, directory;
    double ground = 0.0;
    bool timings = false;

    auto* check_cmd = app.add_subcommand("check", "run a rule pack against a model");
    check_cmd->add_option("model", model, "IFC model file")->required();
    check_cmd->add_option("--pack", pack_path, "rule pack ZIP")->required();
    check_cmd->add_option("--topics", topics, "comma-separated topic filter");
    check_cmd->add_option("--out", out_path, "write report JSON here (default stdout)");
    check_cmd->add_option("--bcf", bcf_path, "write BCF-style ZIP here");
    check_cmd->add_option("--lift-config", lift_config, "lift configuration JSON");
    check_cmd->add_option("--ground", ground, "ground datum in meters (default 0)");
    check_cmd->add_flag("--timings", timings, "include real per-rule timings (non-deterministic)");

    auto* convert_cmd = app.add_subcommand("convert", "lift a model to N-Triples");
    convert_cmd->add_option("model", model, "IFC model file")->required();
    convert_cmd->add_option("--out", out_path, "output .nt file")->required();
    convert_cmd->add_option("--stage", stage, "lifted|geom|inferred (default inferred)")
        ->check(CLI::IsMember({"lifted", "geom", "inferred"}));
    convert_cmd->add_option("--ground", ground, "ground datum in meters (default 0)");

    auto* lint_cmd = app.add_subcommand("lint-rules", "lint a rule pack");
    lint_cmd->add_option("pack", pack_path, "rule pack ZIP")->required();

    auto* explain_cmd = app.add_subcommand("explain", "print findings for one rule");
    explain_cmd->add_option("report", report_path, "report JSON")->required();
    explain_cmd->add_option("rule", rule_id, "rule id")->required();

    auto* pack_cmd = app.add_subcommand("pack", "zip a rule pack directory");
    pack_cmd->add_option("directory", directory, "pack directory")->required();
    pack_cmd->add_option("--out", out_path, "output ZIP")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (check_cmd->parsed())
            return cmd_check(model, pack_path, topics, out_path, bcf_path, lift_config, ground,
                             timings);
        if (convert_cmd->parsed()) return cmd_convert(model, out_path, stage, ground);
        if (lint_cmd->parsed()) return cmd_lint(pack_path);
        if (explain_cmd->parsed()) return cmd_explain(report_path, rule_id);
        if (pack_cmd->parsed()) return cmd_pack(directory, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
