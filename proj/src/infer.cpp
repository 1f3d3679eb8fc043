#include "regcheck/infer.hpp"

#include "regcheck/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace regcheck::infer {

using rdf::Bindings;
using rdf::Graph;
using rdf::Literal;
using rdf::PatternTerm;
using rdf::Term;
using rdf::Triple;
using rdf::TriplePattern;

ArithExpr ArithExpr::constant(double v) {
    ArithExpr e;
    e.kind = Kind::Const;
    e.value = v;
    return e;
}

ArithExpr ArithExpr::variable(std::string name) {
    ArithExpr e;
    e.kind = Kind::Var;
    e.var = std::move(name);
    return e;
}

ArithExpr ArithExpr::add(ArithExpr a, ArithExpr b) {
    ArithExpr e;
    e.kind = Kind::Add;
    e.args = {std::move(a), std::move(b)};
    return e;
}

ArithExpr ArithExpr::sub(ArithExpr a, ArithExpr b) {
    ArithExpr e;
    e.kind = Kind::Sub;
    e.args = {std::move(a), std::move(b)};
    return e;
}

ArithExpr ArithExpr::mul(ArithExpr a, ArithExpr b) {
    ArithExpr e;
    e.kind = Kind::Mul;
    e.args = {std::move(a), std::move(b)};
    return e;
}

ArithExpr ArithExpr::abs(ArithExpr a) {
    ArithExpr e;
    e.kind = Kind::Abs;
    e.args = {std::move(a)};
    return e;
}

double ArithExpr::eval(const Bindings& bindings, const std::string& rule_name) const {
    switch (kind) {
        case Kind::Const:
            return value;
        case Kind::Var: {
            auto it = bindings.find(var);
            if (it == bindings.end())
                throw InferError("rule '" + rule_name + "': unbound variable ?" + var);
            const Term& t = it->second;
            if (!t.is_literal() || !t.literal().is_numeric())
                throw InferError("rule '" + rule_name + "': variable ?" + var +
                                 " is bound to a non-numeric value");
            return t.literal().number();
        }
        case Kind::Add: return args[0].eval(bindings, rule_name) + args[1].eval(bindings, rule_name);
        case Kind::Sub: return args[0].eval(bindings, rule_name) - args[1].eval(bindings, rule_name);
        case Kind::Mul: return args[0].eval(bindings, rule_name) * args[1].eval(bindings, rule_name);
        case Kind::Abs: return std::abs(args[0].eval(bindings, rule_name));
    }
    throw InferError("rule '" + rule_name + "': bad expression");
}

TemplateTerm TemplateTerm::variable(std::string name) {
    TemplateTerm t{Term()};
    t.kind = Kind::Var;
    t.var = std::move(name);
    return t;
}

TemplateTerm TemplateTerm::computed(ArithExpr e) {
    TemplateTerm t{Term()};
    t.kind = Kind::Computed;
    t.expr = std::move(e);
    return t;
}

Term TemplateTerm::instantiate(const Bindings& bindings, const std::string& rule_name) const {
    switch (kind) {
        case Kind::Const: return term;
        case Kind::Var: {
            auto it = bindings.find(var);
            if (it == bindings.end())
                throw InferError("rule '" + rule_name + "': consequent variable ?" + var +
                                 " does not appear in the antecedent");
            return it->second;
        }
        case Kind::Computed: return Term(Literal::decimal(expr.eval(bindings, rule_name)));
    }
    throw InferError("rule '" + rule_name + "': bad template");
}

namespace {

// index nested-loop conjunctive match
std::vector<Bindings> match_all(const Graph& graph, const std::vector<TriplePattern>& patterns) {
    std::vector<Bindings> rows{Bindings{}};
    for (const auto& pattern : patterns) {
        std::vector<Bindings> next;
        for (const auto& row : rows) {
            TriplePattern bound = pattern;
            for (PatternTerm* pt : {&bound.subject, &bound.predicate, &bound.object}) {
                if (!pt->is_var()) continue;
                auto it = row.find(pt->var_name);
                if (it != row.end()) {
                    pt->term = it->second;
                    pt->var_name.clear();
                }
            }
            for (auto& m : graph.match(bound)) {
                Bindings merged = row;
                merged.insert(m.begin(), m.end());
                next.push_back(std::move(merged));
            }
        }
        rows = std::move(next);
        if (rows.empty()) break;
    }
    return rows;
}

std::size_t assert_consequents(Graph& graph, const std::vector<TripleTemplate>& templates,
                               const Bindings& row, const std::string& rule_name) {
    std::size_t added = 0;
    for (const auto& tpl : templates) {
        Triple t(tpl.subject.instantiate(row, rule_name), tpl.predicate.instantiate(row, rule_name),
                 tpl.object.instantiate(row, rule_name));
        if (graph.insert(t)) ++added;
    }
    return added;
}

void collect_expr_vars(const ArithExpr& e, std::set<std::string>& out) {
    if (e.kind == ArithExpr::Kind::Var) out.insert(e.var);
    for (const auto& a : e.args) collect_expr_vars(a, out);
}

}  // namespace

void validate_stratification(const RuleSet& rules) {
    // Derived facts are keyed by predicate, except typing triples which are
    // keyed by their class (rdf:type fans out over many unrelated concepts).
    // kind 0 = plain predicate, kind 1 = rdf:type of a specific class.
    using Key = std::pair<int, std::uint32_t>;
    const std::uint32_t type_id = vocab::rdf_type().id();
    std::map<Key, int> produced_at;
    int any_type_max = std::numeric_limits<int>::min();
    int any_max = std::numeric_limits<int>::min();

    auto note_consequents = [&](const std::vector<TripleTemplate>& templates, int stratum) {
        for (const auto& tpl : templates) {
            any_max = std::max(any_max, stratum);
            if (tpl.predicate.kind != TemplateTerm::Kind::Const || !tpl.predicate.term.is_iri())
                continue;
            Key key{0, tpl.predicate.term.iri().id()};
            if (tpl.predicate.term.iri().id() == type_id) {
                any_type_max = std::max(any_type_max, stratum);
                if (tpl.object.kind == TemplateTerm::Kind::Const && tpl.object.term.is_iri())
                    key = Key{1, tpl.object.term.iri().id()};
                else
                    continue;  // covered by any_type_max
            }
            auto it = produced_at.find(key);
            if (it == produced_at.end() || stratum > it->second) produced_at[key] = stratum;
        }
    };
    for (const auto& r : rules.rewrites) note_consequents(r.consequent, r.stratum);
    for (const auto& r : rules.aggregates) note_consequents(r.consequent, r.stratum);

    auto fail = [](const std::string& name, int stratum, const std::string& what, int at) {
        throw InferError("rule '" + name + "' (stratum " + std::to_string(stratum) +
                         ") depends on " + what + " produced at stratum " + std::to_string(at));
    };
    auto check = [&](const std::string& name, int stratum,
                     const std::vector<TriplePattern>& antecedent) {
        for (const auto& p : antecedent) {
            if (p.predicate.is_var()) {
                if (any_max > stratum) fail(name, stratum, "derived triples", any_max);
                continue;
            }
            if (!p.predicate.term.is_iri()) continue;
            if (p.predicate.term.iri().id() == type_id) {
                if (!p.object.is_var() && p.object.term.is_iri()) {
                    auto it = produced_at.find(Key{1, p.object.term.iri().id()});
                    if (it != produced_at.end() && it->second > stratum)
                        fail(name, stratum, "class <" + p.object.term.iri().text() + ">",
                             it->second);
                } else if (any_type_max > stratum) {
                    fail(name, stratum, "typing triples", any_type_max);
                }
                continue;
            }
            auto it = produced_at.find(Key{0, p.predicate.term.iri().id()});
            if (it != produced_at.end() && it->second > stratum)
                fail(name, stratum, "predicate <" + p.predicate.term.iri().text() + ">",
                     it->second);
        }
    };
    for (const auto& r : rules.rewrites) check(r.name, r.stratum, r.antecedent);
    for (const auto& r : rules.aggregates) check(r.name, r.stratum, r.antecedent);
}

std::size_t apply_fixpoint(Graph& graph, const std::vector<RewriteRule>& rules) {
    std::set<int> strata;
    for (const auto& r : rules) strata.insert(r.stratum);

    std::size_t total = 0;
    for (int stratum : strata) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& rule : rules) {
                if (rule.stratum != stratum) continue;
                for (const auto& row : match_all(graph, rule.antecedent)) {
                    std::size_t added = assert_consequents(graph, rule.consequent, row, rule.name);
                    if (added) {
                        total += added;
                        changed = true;
                    }
                }
            }
        }
    }
    return total;
}

std::size_t apply_aggregates(Graph& graph, const std::vector<AggregateRule>& rules) {
    std::size_t total = 0;
    for (const auto& rule : rules) {
        auto rows = match_all(graph, rule.antecedent);
        // group key -> chosen row
        std::map<std::vector<Term>, std::pair<double, Bindings>,
                 bool (*)(const std::vector<Term>&, const std::vector<Term>&)>
            groups(+[](const std::vector<Term>& a, const std::vector<Term>& b) {
                if (a.size() != b.size()) return a.size() < b.size();
                for (std::size_t i = 0; i < a.size(); ++i) {
                    if (a[i] == b[i]) continue;
                    return a[i].token() < b[i].token();
                }
                return false;
            });

        auto subject_text = [&](const Bindings& row) -> std::string {
            auto it = row.find(rule.subject_var);
            if (it == row.end())
                throw InferError("rule '" + rule.name + "': subject variable ?" +
                                 rule.subject_var + " unbound");
            return it->second.token();
        };

        for (const auto& row : rows) {
            double v = rule.value.eval(row, rule.name);
            std::vector<Term> key;
            for (const auto& g : rule.group_vars) {
                auto it = row.find(g);
                if (it == row.end())
                    throw InferError("rule '" + rule.name + "': group variable ?" + g + " unbound");
                key.push_back(it->second);
            }
            auto it = groups.find(key);
            if (it == groups.end()) {
                groups.emplace(std::move(key), std::make_pair(v, row));
                continue;
            }
            auto& [best_v, best_row] = it->second;
            bool better;
            if (v == best_v)
                better = natural_less(subject_text(row), subject_text(best_row));
            else
                better = rule.kind == AggregateKind::Max ? v > best_v : v < best_v;
            if (better) it->second = std::make_pair(v, row);
        }

        for (const auto& [key, chosen] : groups)
            total += assert_consequents(graph, rule.consequent, chosen.second, rule.name);
    }
    return total;
}

std::size_t prune(Graph& graph, const std::vector<TriplePattern>& patterns) {
    std::size_t removed = 0;
    for (const auto& p : patterns) removed += graph.remove_matching(p);
    return removed;
}

std::size_t run_inference(Graph& graph, const RuleSet& rules) {
    validate_stratification(rules);
    std::set<int> strata;
    for (const auto& r : rules.rewrites) strata.insert(r.stratum);
    for (const auto& r : rules.aggregates) strata.insert(r.stratum);

    std::size_t total = 0;
    for (int stratum : strata) {
        std::vector<RewriteRule> rw;
        for (const auto& r : rules.rewrites)
            if (r.stratum == stratum) rw.push_back(r);
        std::vector<AggregateRule> ag;
        for (const auto& r : rules.aggregates)
            if (r.stratum == stratum) ag.push_back(r);
        total += apply_fixpoint(graph, rw);
        total += apply_aggregates(graph, ag);
    }
    prune(graph, rules.prune_patterns);
    return total;
}

namespace {

PatternTerm pvar(const char* name) { return PatternTerm::var(name); }

TriplePattern pat(PatternTerm s, PatternTerm p, PatternTerm o) {
    return TriplePattern{std::move(s), std::move(p), std::move(o)};
}

TripleTemplate tpl(TemplateTerm s, TemplateTerm p, TemplateTerm o) {
    return TripleTemplate{std::move(s), std::move(p), std::move(o)};
}

}  // namespace

RuleSet builtin_rules(double ground_datum) {
    using vocab::geo;
    using vocab::ifc;
    using vocab::rdf_type;
    using vocab::reg;

    RuleSet rules;
    auto type_iri = rdf_type();

    // classification shortcut: the lifted chain collapses to one triple
    rules.rewrites.push_back(RewriteRule{
        "classification-shortcut",
        0,
        {pat(pvar("rel"), type_iri, Term(ifc("IFCRELASSOCIATESCLASSIFICATION"))),
         pat(pvar("rel"), ifc("relatedObject"), pvar("obj")),
         pat(pvar("rel"), ifc("relatingClassification"), pvar("ref")),
         pat(pvar("ref"), ifc("itemReference"), pvar("code"))},
        {tpl(TemplateTerm::variable("obj"), Term(reg("hasClassification")),
             TemplateTerm::variable("code"))}});

    rules.rewrites.push_back(RewriteRule{
        "wc-typing",
        0,
        {pat(pvar("t"), type_iri, Term(ifc("IFCFLOWTERMINAL"))),
         pat(pvar("t"), ifc("definedByType"), pvar("tt")),
         pat(pvar("tt"), ifc("predefinedType"), Term(Literal::text("WCSEAT")))},
        {tpl(TemplateTerm::variable("t"), Term(type_iri), Term(reg("WC")))}});

    for (const char* cls : {"IFCWALL", "IFCWALLSTANDARDCASE", "IFCSLAB", "IFCCOLUMN", "IFCBEAM",
                            "IFCDOOR", "IFCRAILING", "IFCFLOWTERMINAL"}) {
        rules.rewrites.push_back(
            RewriteRule{std::string("physical-element-") + cls,
                        0,
                        {pat(pvar("e"), type_iri, Term(ifc(cls)))},
                        {tpl(TemplateTerm::variable("e"), Term(type_iri),
                             Term(reg("PhysicalElement")))}});
    }

    rules.rewrites.push_back(
        RewriteRule{"building-typing",
                    0,
                    {pat(pvar("b"), type_iri, Term(ifc("IFCBUILDING")))},
                    {tpl(TemplateTerm::variable("b"), Term(type_iri), Term(reg("Building")))}});

    rules.rewrites.push_back(RewriteRule{
        "structure-element",
        0,
        {pat(pvar("e"), ifc("loadBearing"), Term(Literal::boolean(true)))},
        {tpl(TemplateTerm::variable("e"), Term(type_iri), Term(reg("StructureElement")))}});

    rules.rewrites.push_back(RewriteRule{
        "fire-duration",
        0,
        {pat(pvar("e"), ifc("fireLoadBearingDurationMinutes"), pvar("d"))},
        {tpl(TemplateTerm::variable("e"), Term(reg("fireLoadBearingDuration")),
             TemplateTerm::variable("d"))}});

    // storey floor: lowest slab base per storey
    {
        AggregateRule floor_rule;
        floor_rule.name = "storey-floor";
        floor_rule.stratum = 1;
        floor_rule.kind = AggregateKind::Min;
        floor_rule.antecedent = {
            pat(pvar("slab"), type_iri, Term(ifc("IFCSLAB"))),
            pat(pvar("slab"), ifc("containedIn"), pvar("storey")),
            pat(pvar("slab"), geo("hasObb"), pvar("box")),
            pat(pvar("box"), geo("centerZ"), pvar("cz")),
            pat(pvar("box"), geo("halfExtentX"), pvar("h0")),
            pat(pvar("box"), geo("halfExtentY"), pvar("h1")),
            pat(pvar("box"), geo("halfExtentZ"), pvar("h2")),
            pat(pvar("box"), geo("axis0Z"), pvar("a0")),
            pat(pvar("box"), geo("axis1Z"), pvar("a1")),
            pat(pvar("box"), geo("axis2Z"), pvar("a2")),
        };
        // base elevation of the slab box: cz - sum |axis_i.z| * h_i
        ArithExpr spread = ArithExpr::add(
            ArithExpr::add(
                ArithExpr::mul(ArithExpr::abs(ArithExpr::variable("a0")), ArithExpr::variable("h0")),
                ArithExpr::mul(ArithExpr::abs(ArithExpr::variable("a1")), ArithExpr::variable("h1"))),
            ArithExpr::mul(ArithExpr::abs(ArithExpr::variable("a2")), ArithExpr::variable("h2")));
        floor_rule.value = ArithExpr::sub(ArithExpr::variable("cz"), std::move(spread));
        floor_rule.group_vars = {"storey"};
        floor_rule.subject_var = "slab";
        floor_rule.consequent = {tpl(TemplateTerm::variable("slab"), Term(reg("floorOf")),
                                     TemplateTerm::variable("storey"))};
        rules.aggregates.push_back(std::move(floor_rule));
    }

    {
        AggregateRule highest;
        highest.name = "highest-storey";
        highest.stratum = 1;
        highest.kind = AggregateKind::Max;
        highest.antecedent = {
            pat(pvar("b"), ifc("aggregates"), pvar("s")),
            pat(pvar("s"), type_iri, Term(ifc("IFCBUILDINGSTOREY"))),
            pat(pvar("s"), ifc("elevation"), pvar("e")),
        };
        highest.value = ArithExpr::variable("e");
        highest.group_vars = {"b"};
        highest.subject_var = "s";
        highest.consequent = {
            tpl(TemplateTerm::variable("s"), Term(type_iri), Term(reg("HighestStorey")))};
        rules.aggregates.push_back(std::move(highest));
    }

    // fire height: highest storey elevation minus the ground datum
    rules.rewrites.push_back(RewriteRule{
        "building-fire-height",
        2,
        {pat(pvar("b"), type_iri, Term(reg("Building"))),
         pat(pvar("b"), ifc("aggregates"), pvar("s")),
         pat(pvar("s"), type_iri, Term(reg("HighestStorey"))),
         pat(pvar("s"), ifc("elevation"), pvar("e"))},
        {tpl(TemplateTerm::variable("b"), Term(reg("fireHeight")),
             TemplateTerm::computed(ArithExpr::sub(ArithExpr::variable("e"),
                                                   ArithExpr::constant(ground_datum))))}});

    return rules;
}

namespace {

using nlohmann::json;

PatternTerm json_pattern_term(const json& j, const vocab::VocabTable& table) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (!s.empty() && s[0] == '?') return PatternTerm::var(s.substr(1));
        if (s.find("://") != std::string::npos || s.find(':') != std::string::npos) {
            if (s.find("://") != std::string::npos)
                return PatternTerm(Term(rdf::Iri(s)));
            auto prefix = s.substr(0, s.find(':'));
            if (table.prefixes.count(prefix)) return PatternTerm(Term(table.resolve(s)));
        }
        return PatternTerm(Term(Literal::text(s)));
    }
    if (j.is_boolean()) return PatternTerm(Term(Literal::boolean(j.get<bool>())));
    if (j.is_number_integer()) return PatternTerm(Term(Literal::integer(j.get<std::int64_t>())));
    if (j.is_number()) return PatternTerm(Term(Literal::decimal(j.get<double>())));
    throw InferError("bad pattern term in vocabulary file: " + j.dump());
}

TriplePattern json_pattern(const json& j, const vocab::VocabTable& table) {
    if (!j.is_array() || j.size() != 3)
        throw InferError("pattern must be a [subject, predicate, object] array: " + j.dump());
    return TriplePattern{json_pattern_term(j[0], table), json_pattern_term(j[1], table),
                         json_pattern_term(j[2], table)};
}

ArithExpr json_expr(const json& j) {
    if (j.is_number()) return ArithExpr::constant(j.get<double>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (!s.empty() && s[0] == '?') return ArithExpr::variable(s.substr(1));
        throw InferError("bad expression atom: " + s);
    }
    if (j.is_array() && !j.empty() && j[0].is_string()) {
        const std::string op = j[0].get<std::string>();
        if (op == "abs" && j.size() == 2) return ArithExpr::abs(json_expr(j[1]));
        if (j.size() == 3) {
            if (op == "+") return ArithExpr::add(json_expr(j[1]), json_expr(j[2]));
            if (op == "-") return ArithExpr::sub(json_expr(j[1]), json_expr(j[2]));
            if (op == "*") return ArithExpr::mul(json_expr(j[1]), json_expr(j[2]));
        }
    }
    throw InferError("bad expression in vocabulary file: " + j.dump());
}

TemplateTerm json_template_term(const json& j, const vocab::VocabTable& table) {
    if (j.is_array()) return TemplateTerm::computed(json_expr(j));
    PatternTerm p = json_pattern_term(j, table);
    if (p.is_var()) return TemplateTerm::variable(p.var_name);
    return TemplateTerm(p.term);
}

TripleTemplate json_template(const json& j, const vocab::VocabTable& table) {
    if (!j.is_array() || j.size() != 3)
        throw InferError("template must be a [subject, predicate, object] array: " + j.dump());
    return TripleTemplate{json_template_term(j[0], table), json_template_term(j[1], table),
                          json_template_term(j[2], table)};
}

}  // namespace

RuleSet load_vocab(const std::string& json_text, vocab::VocabTable& table) {
    json j = json::parse(json_text);
    for (auto& [prefix, iri] : j.value("namespaces", json::object()).items())
        table.declare(prefix, iri.get<std::string>());

    RuleSet rules;
    for (const auto& r : j.value("rules", json::array())) {
        RewriteRule rule;
        rule.name = r.at("name").get<std::string>();
        rule.stratum = r.value("stratum", 0);
        for (const auto& p : r.at("if")) rule.antecedent.push_back(json_pattern(p, table));
        for (const auto& t : r.at("then")) rule.consequent.push_back(json_template(t, table));
        rules.rewrites.push_back(std::move(rule));
    }
    for (const auto& r : j.value("aggregates", json::array())) {
        AggregateRule rule;
        rule.name = r.at("name").get<std::string>();
        rule.stratum = r.value("stratum", 1);
        const std::string kind = r.at("kind").get<std::string>();
        if (kind == "MAX") rule.kind = AggregateKind::Max;
        else if (kind == "MIN") rule.kind = AggregateKind::Min;
        else throw InferError("aggregate kind must be MAX or MIN: " + kind);
        for (const auto& p : r.at("if")) rule.antecedent.push_back(json_pattern(p, table));
        rule.value = json_expr(r.at("value"));
        for (const auto& g : r.at("group")) rule.group_vars.push_back(g.get<std::string>().substr(1));
        rule.subject_var = r.at("subject").get<std::string>().substr(1);
        for (const auto& t : r.at("then")) rule.consequent.push_back(json_template(t, table));
        rules.aggregates.push_back(std::move(rule));
    }
    for (const auto& p : j.value("prune", json::array()))
        rules.prune_patterns.push_back(json_pattern(p, table));

    // consequent variables must appear in the antecedent
    auto check_rule = [](const std::string& name, const std::vector<TriplePattern>& antecedent,
                         const std::vector<TripleTemplate>& consequent) {
        std::set<std::string> bound;
        for (const auto& p : antecedent)
            for (const PatternTerm* pt : {&p.subject, &p.predicate, &p.object})
                if (pt->is_var()) bound.insert(pt->var_name);
        for (const auto& t : consequent) {
            std::set<std::string> used;
            for (const TemplateTerm* tt : {&t.subject, &t.predicate, &t.object}) {
                if (tt->kind == TemplateTerm::Kind::Var) used.insert(tt->var);
                if (tt->kind == TemplateTerm::Kind::Computed) collect_expr_vars(tt->expr, used);
            }
            for (const auto& v : used)
                if (!bound.count(v))
                    throw InferError("rule '" + name + "': consequent variable ?" + v +
                                     " not bound by the antecedent");
        }
    };
    for (const auto& r : rules.rewrites) check_rule(r.name, r.antecedent, r.consequent);
    for (const auto& r : rules.aggregates) check_rule(r.name, r.antecedent, r.consequent);

    validate_stratification(rules);
    return rules;
}

}  // namespace regcheck::infer
