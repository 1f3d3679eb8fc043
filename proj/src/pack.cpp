#include "regcheck/pack.hpp"

#include "regcheck/util.hpp"
#include "regcheck/ziparchive.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <limits>
#include <map>
#include <set>

namespace regcheck::dsl {

using nlohmann::json;

PackError::PackError(const std::vector<std::string>& errors)
    : std::runtime_error([&] {
          std::string msg = "rule pack failed to load:";
          for (const auto& e : errors) msg += "\n  - " + e;
          return msg;
      }()),
      errors_(errors) {}

const QueryPlan* RulePack::find_rule(const std::string& id) const {
    for (const auto& r : rules)
        if (r.ast.id == id) return &r;
    return nullptr;
}

namespace {

void merge_defaults(PackDefaults& defaults, const json& j, std::vector<std::string>& errors) {
    if (j.contains("freespace_height_m")) defaults.freespace_height_m = j["freespace_height_m"];
    if (j.contains("adjacency_eps_m")) defaults.adjacency_eps_m = j["adjacency_eps_m"];
    if (j.contains("exempt_floor_beneath")) defaults.exempt_floor_beneath = j["exempt_floor_beneath"];
    if (j.contains("fire_threshold_table")) {
        defaults.fire_threshold_table.clear();
        double previous = -std::numeric_limits<double>::infinity();
        for (const auto& row : j["fire_threshold_table"]) {
            if (!row.is_array() || row.size() != 2) {
                errors.push_back("fire_threshold_table rows must be [upper_bound, minutes]");
                return;
            }
            double upper = row[0].is_null() ? std::numeric_limits<double>::infinity()
                                            : row[0].get<double>();
            if (upper <= previous) {
                errors.push_back("fire_threshold_table bounds must be strictly increasing");
                return;
            }
            previous = upper;
            defaults.fire_threshold_table.emplace_back(upper, row[1].get<double>());
        }
        if (!defaults.fire_threshold_table.empty() &&
            defaults.fire_threshold_table.back().first != std::numeric_limits<double>::infinity())
            errors.push_back("fire_threshold_table must end with an unbounded (null) row");
    }
}

RulePack load_pack_entries(const std::map<std::string, std::string>& entries) {
    std::vector<std::string> errors;
    RulePack pack;
    pack.vocabulary = vocab::default_vocab();

    auto manifest_it = entries.find("manifest.json");
    if (manifest_it == entries.end()) throw PackError({"manifest.json is missing"});

    std::set<std::string> topics;
    try {
        json m = json::parse(manifest_it->second);
        pack.manifest.name = m.value("name", "");
        pack.manifest.version = m.value("version", "");
        pack.manifest.description = m.value("description", "");
        for (const auto& t : m.value("topics", json::array())) {
            pack.manifest.topics.push_back(t.get<std::string>());
            topics.insert(t.get<std::string>());
        }
        for (const auto& a : m.value("authors", json::array()))
            pack.manifest.authors.push_back(a.get<std::string>());
        for (auto& [prefix, iri] : m.value("namespaces", json::object()).items())
            pack.vocabulary.declare(prefix, iri.get<std::string>());
        if (m.contains("defaults")) merge_defaults(pack.defaults, m["defaults"], errors);
        if (pack.manifest.name.empty()) errors.push_back("manifest has no pack name");
    } catch (const json::exception& e) {
        throw PackError({std::string("manifest.json does not parse: ") + e.what()});
    }

    std::set<std::string> seen_ids;
    for (const auto& [name, content] : entries) {
        if (name.rfind("rules/", 0) != 0 || name.size() < 6 + 5 ||
            name.substr(name.size() - 5) != ".rule")
            continue;
        try {
            for (auto& ast : parse_rules(content, pack.vocabulary)) {
                if (!seen_ids.insert(ast.id).second) {
                    errors.push_back(name + ": duplicate rule id \"" + ast.id + "\"");
                    continue;
                }
                if (!topics.count(ast.topic)) {
                    errors.push_back(name + ": rule \"" + ast.id + "\" has topic '" + ast.topic +
                                     "' which the manifest does not declare");
                    continue;
                }
                pack.rules.push_back(compile_rule(ast, pack.vocabulary));
            }
        } catch (const RuleParseError& e) {
            errors.push_back(name + ": " + e.what());
        }
    }

    if (pack.rules.empty() && errors.empty()) errors.push_back("pack contains no rules");
    if (!errors.empty()) throw PackError(errors);

    std::sort(pack.rules.begin(), pack.rules.end(),
              [](const QueryPlan& a, const QueryPlan& b) { return a.ast.id < b.ast.id; });
    return pack;
}

}  // namespace

RulePack load_pack(const std::string& zip_bytes) {
    return load_pack_entries(zip::read_archive(zip_bytes));
}

RulePack load_pack_file(const std::string& path) { return load_pack(read_file(path)); }

std::string write_pack(const std::string& directory) {
    namespace fs = std::filesystem;
    fs::path root(directory);
    if (!fs::exists(root / "manifest.json"))
        throw PackError({"pack directory has no manifest.json"});

    zip::Writer writer;
    writer.add("manifest.json", read_file((root / "manifest.json").string()));
    std::vector<std::string> rule_files;
    if (fs::exists(root / "rules"))
        for (const auto& entry : fs::directory_iterator(root / "rules"))
            if (entry.is_regular_file() && entry.path().extension() == ".rule")
                rule_files.push_back(entry.path().filename().string());
    std::sort(rule_files.begin(), rule_files.end());
    for (const auto& name : rule_files)
        writer.add("rules/" + name, read_file((root / "rules" / name).string()));

    std::string bytes = writer.finish();
    load_pack(bytes);  // validate before handing out
    return bytes;
}

namespace {

void collect_clause_vars(const std::vector<Clause>& clauses,
                         std::map<std::string, int>& counts) {
    for (const auto& c : clauses) {
        switch (c.kind) {
            case Clause::Kind::Type:
                ++counts[c.subject_var];
                break;
            case Clause::Kind::Prop:
                ++counts[c.subject_var];
                if (c.object.is_var()) ++counts[c.object.var_name];
                break;
            case Clause::Kind::Filter:
            case Clause::Kind::Bind: {
                std::vector<const Expr*> stack{&c.expr};
                while (!stack.empty()) {
                    const Expr* e = stack.back();
                    stack.pop_back();
                    if (e->kind == Expr::Kind::Var) ++counts[e->text];
                    for (const auto& a : e->args) stack.push_back(&a);
                }
                if (c.kind == Clause::Kind::Bind) ++counts[c.bind_var];
                break;
            }
            case Clause::Kind::Geo:
                ++counts[c.geo_a];
                ++counts[c.geo_b];
                break;
            case Clause::Kind::NotExists:
                collect_clause_vars(c.body, counts);
                break;
        }
    }
}

bool expr_has_var(const Expr& e) {
    if (e.kind == Expr::Kind::Var) return true;
    for (const auto& a : e.args)
        if (expr_has_var(a)) return true;
    return false;
}

bool expr_calls_geometry(const Expr& e) {
    if (e.kind == Expr::Kind::Call && (e.text == "FREESPACE" || e.text == "CLEAR")) return true;
    for (const auto& a : e.args)
        if (expr_calls_geometry(a)) return true;
    return false;
}

}  // namespace

std::vector<LintDiagnostic> lint_pack(const RulePack& pack, const vocab::VocabTable& table) {
    std::vector<LintDiagnostic> out;
    for (const auto& plan : pack.rules) {
        const RuleAst& ast = plan.ast;

        // unknown vocabulary terms (recomputed against the given table)
        for (const auto& w : compile_rule(ast, table).warnings)
            out.push_back({ast.id, "unknown-term", w});

        // unused variables: bound once, never consumed, and not the target
        std::map<std::string, int> counts;
        collect_clause_vars(ast.clauses, counts);
        for (const auto& [var, count] : counts) {
            if (var == ast.target) continue;
            if (count <= 1)
                out.push_back({ast.id, "unused-variable",
                               "rule '" + ast.id + "': variable ?" + var + " is never used"});
        }

        bool has_constraint = false;
        for (const auto& c : ast.clauses) {
            if (c.kind == Clause::Kind::Filter && !expr_has_var(c.expr))
                out.push_back({ast.id, "unreachable-clause",
                               "rule '" + ast.id +
                                   "': FILTER over constants always evaluates the same way"});
            if (c.kind == Clause::Kind::Prop || c.kind == Clause::Kind::Geo ||
                c.kind == Clause::Kind::NotExists)
                has_constraint = true;
            if ((c.kind == Clause::Kind::Filter || c.kind == Clause::Kind::Bind) &&
                (expr_has_var(c.expr) || expr_calls_geometry(c.expr)))
                has_constraint = true;
        }
        if (!has_constraint)
            out.push_back({ast.id, "vacuous-rule",
                           "rule '" + ast.id +
                               "': no geometric or property constraint; likely vacuous"});
    }
    return out;
}

}  // namespace regcheck::dsl
