#include "regcheck/plan.hpp"

#include "regcheck/util.hpp"
#include "regcheck/vocab.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace regcheck::dsl {

using rdf::Bindings;
using rdf::Graph;
using rdf::Literal;
using rdf::PatternTerm;
using rdf::Term;
using rdf::TriplePattern;

double resolve_fire_threshold(double height_m,
                              const std::vector<std::pair<double, double>>& table) {
    if (table.empty()) throw std::runtime_error("fire threshold table is empty");
    if (height_m < 0) throw std::runtime_error("building height is negative");
    for (const auto& [upper, minutes] : table)
        if (height_m <= upper) return minutes;
    return table.back().second;
}

namespace {

void expr_vars(const Expr& e, std::set<std::string>& out) {
    if (e.kind == Expr::Kind::Var) out.insert(e.text);
    for (const auto& a : e.args) expr_vars(a, out);
}

void clause_term_iris(const Clause& c, std::vector<rdf::Iri>& out) {
    if (c.kind == Clause::Kind::Type) {
        out.push_back(c.object.term.iri());
    } else if (c.kind == Clause::Kind::Prop) {
        out.push_back(c.predicate);
        if (!c.object.is_var() && c.object.term.is_iri()) out.push_back(c.object.term.iri());
    }
    for (const auto& inner : c.body) clause_term_iris(inner, out);
}

TriplePattern clause_pattern(const Clause& c) {
    PatternTerm object = c.object;
    return TriplePattern{PatternTerm::var(c.subject_var), PatternTerm(Term(c.predicate)),
                         std::move(object)};
}

int constant_count(const Clause& c) {
    // subject is always a variable; predicate is always constant
    return 1 + (c.object.is_var() ? 0 : 1);
}

std::set<std::string> pattern_vars(const TriplePattern& p) {
    std::set<std::string> out;
    for (const PatternTerm* pt : {&p.subject, &p.predicate, &p.object})
        if (pt->is_var()) out.insert(pt->var_name);
    return out;
}

struct PendingClause {
    const Clause* clause;
    std::set<std::string> required;
    std::size_t source_index;
};

// outer_bound: variables guaranteed bound before this clause group runs
std::vector<PlanOp> compile_clauses(const std::vector<Clause>& clauses,
                                    std::set<std::string> available, bool top_level,
                                    std::size_t* last_positive_out) {
    // order positive clauses most-selective-first
    struct Positive {
        const Clause* clause;
        std::size_t source_index;
    };
    std::vector<Positive> positives;
    std::vector<PendingClause> dependents;
    std::size_t index = 0;
    for (const auto& c : clauses) {
        if (c.kind == Clause::Kind::Type || c.kind == Clause::Kind::Prop) {
            positives.push_back({&c, index});
        } else {
            PendingClause p{&c, {}, index};
            switch (c.kind) {
                case Clause::Kind::Filter: expr_vars(c.expr, p.required); break;
                case Clause::Kind::Bind: expr_vars(c.expr, p.required); break;
                case Clause::Kind::Geo:
                    p.required = {c.geo_a, c.geo_b};
                    break;
                case Clause::Kind::NotExists: {
                    // outer variables the body refers to
                    std::set<std::string> body_uses;
                    std::set<std::string> body_binds;
                    std::vector<const Clause*> stack;
                    for (const auto& b : c.body) stack.push_back(&b);
                    while (!stack.empty()) {
                        const Clause* b = stack.back();
                        stack.pop_back();
                        if (b->kind == Clause::Kind::Type || b->kind == Clause::Kind::Prop) {
                            body_uses.insert(b->subject_var);
                            if (b->object.is_var()) body_uses.insert(b->object.var_name);
                        } else if (b->kind == Clause::Kind::Filter || b->kind == Clause::Kind::Bind) {
                            expr_vars(b->expr, body_uses);
                            if (b->kind == Clause::Kind::Bind) body_binds.insert(b->bind_var);
                        } else if (b->kind == Clause::Kind::Geo) {
                            body_uses.insert(b->geo_a);
                            body_uses.insert(b->geo_b);
                        } else {
                            for (const auto& inner : b->body) stack.push_back(&inner);
                        }
                    }
                    // required = body uses that the outer scope can provide
                    p.required = body_uses;  // trimmed against `available` at placement time
                    for (const auto& v : body_binds) p.required.erase(v);
                    break;
                }
                default: break;
            }
            dependents.push_back(std::move(p));
        }
        ++index;
    }
    std::stable_sort(positives.begin(), positives.end(), [](const Positive& a, const Positive& b) {
        return constant_count(*a.clause) > constant_count(*b.clause);
    });

    // For NOT EXISTS, variables never bound in the outer scope are
    // body-local; drop them from the requirement.
    std::set<std::string> eventually_bound = available;
    for (const auto& p : positives) {
        eventually_bound.insert(p.clause->subject_var);
        if (p.clause->object.is_var()) eventually_bound.insert(p.clause->object.var_name);
    }
    for (const auto& d : dependents)
        if (d.clause->kind == Clause::Kind::Bind) eventually_bound.insert(d.clause->bind_var);
    for (auto& d : dependents) {
        if (d.clause->kind != Clause::Kind::NotExists) continue;
        std::set<std::string> trimmed;
        for (const auto& v : d.required)
            if (eventually_bound.count(v)) trimmed.insert(v);
        d.required = trimmed;
    }

    std::vector<PlanOp> ops;
    std::size_t last_positive = 0;

    auto place_ready = [&]() {
        bool progress = true;
        while (progress) {
            progress = false;
            for (auto it = dependents.begin(); it != dependents.end(); ++it) {
                bool ready = true;
                for (const auto& v : it->required)
                    if (!available.count(v)) ready = false;
                if (!ready) continue;
                const Clause& c = *it->clause;
                PlanOp op;
                op.line = c.line;
                switch (c.kind) {
                    case Clause::Kind::Filter:
                        op.kind = PlanOp::Kind::Filter;
                        op.expr = c.expr;
                        break;
                    case Clause::Kind::Bind:
                        op.kind = PlanOp::Kind::Bind;
                        op.expr = c.expr;
                        op.bind_var = c.bind_var;
                        available.insert(c.bind_var);
                        break;
                    case Clause::Kind::Geo:
                        op.kind = PlanOp::Kind::Geo;
                        op.geo_kind = c.geo_kind;
                        op.geo_a = c.geo_a;
                        op.geo_b = c.geo_b;
                        op.geo_eps = c.geo_eps;
                        break;
                    case Clause::Kind::NotExists:
                        op.kind = PlanOp::Kind::AntiJoin;
                        op.body = compile_clauses(c.body, available, false, nullptr);
                        break;
                    default: break;
                }
                ops.push_back(std::move(op));
                dependents.erase(it);
                progress = true;
                break;
            }
        }
    };

    place_ready();
    bool first_positive = ops.empty() && top_level;
    for (const auto& p : positives) {
        TriplePattern pattern = clause_pattern(*p.clause);
        PlanOp op;
        op.line = p.clause->line;
        auto vars = pattern_vars(pattern);
        if (first_positive) {
            op.kind = PlanOp::Kind::Scan;
            first_positive = false;
        } else {
            op.kind = PlanOp::Kind::HashJoin;
            for (const auto& v : vars)
                if (available.count(v)) op.join_vars.push_back(v);
        }
        op.pattern = std::move(pattern);
        available.insert(vars.begin(), vars.end());
        ops.push_back(std::move(op));
        last_positive = ops.size() - 1;
        place_ready();
    }

    if (!dependents.empty())
        throw std::logic_error("internal: clause requirements unsatisfiable after validation");

    if (last_positive_out) *last_positive_out = last_positive;
    return ops;
}

}  // namespace

QueryPlan compile_rule(const RuleAst& ast, const vocab::VocabTable& table) {
    QueryPlan plan;
    plan.ast = ast;
    plan.ops = compile_clauses(ast.clauses, {}, true, &plan.last_positive);

    PlanOp project;
    project.kind = PlanOp::Kind::Project;
    project.target = ast.target;
    std::set<std::string> expl;
    for (const auto& c : ast.clauses) {
        if (c.kind != Clause::Kind::Geo) continue;
        if (c.geo_a != ast.target) expl.insert(c.geo_a);
        if (c.geo_b != ast.target) expl.insert(c.geo_b);
    }
    project.explanation_vars.assign(expl.begin(), expl.end());
    plan.ops.push_back(std::move(project));

    // vocabulary layering check: warn on terms outside the declared layers
    std::vector<rdf::Iri> used;
    for (const auto& c : ast.clauses) clause_term_iris(c, used);
    for (const auto& iri : used) {
        const std::string& text = iri.text();
        for (const auto& [prefix, ns] : table.prefixes) {
            if (text.rfind(ns, 0) != 0) continue;
            std::string local = text.substr(ns.size());
            auto terms = table.known_terms.find(prefix);
            if (terms == table.known_terms.end() || !terms->second.count(local))
                plan.warnings.push_back("rule '" + ast.id + "': term " + prefix + ":" + local +
                                        " is not declared in the vocabulary layers");
            break;
        }
    }
    return plan;
}

namespace {

// runtime value: graph term, synthesized box, number, boolean, or a bare
// symbol argument such as LEFT
struct RtValue {
    enum class Kind { Term, Box, Number, Bool, Symbol };
    Kind kind = Kind::Number;
    Term term;
    geom::Obb box;
    double number = 0.0;
    bool truth = false;
    std::string symbol;

    static RtValue of(Term t) {
        RtValue v;
        v.kind = Kind::Term;
        v.term = std::move(t);
        return v;
    }
    static RtValue of(geom::Obb b) {
        RtValue v;
        v.kind = Kind::Box;
        v.box = b;
        return v;
    }
    static RtValue of(double n) {
        RtValue v;
        v.kind = Kind::Number;
        v.number = n;
        return v;
    }
    static RtValue of(bool b) {
        RtValue v;
        v.kind = Kind::Bool;
        v.truth = b;
        return v;
    }
};

struct Row {
    std::map<std::string, RtValue> vars;
    std::vector<std::pair<std::string, std::string>> notes;  // (role, iri text)
};

// drop this candidate row, with a diagnostic
struct RowSkip {
    std::string message;
};

class Executor {
public:
    Executor(const QueryPlan& plan, const Graph& graph, const geom::GeomIndex& geom,
             const PackDefaults& defaults, std::vector<Diagnostic>* diagnostics)
        : plan_(plan), graph_(graph), geom_(geom), defaults_(defaults), diagnostics_(diagnostics) {}

    std::vector<RuleFinding> run(ExecStats* stats) {
        std::vector<Row> rel{Row{}};
        rel = pipeline(plan_.ops, std::move(rel), stats);

        // set semantics per target plus merged explanations
        std::map<std::string, RuleFinding> by_target;
        const PlanOp& project = plan_.ops.back();
        for (auto& row : rel) {
            auto it = row.vars.find(project.target);
            if (it == row.vars.end() || it->second.kind != RtValue::Kind::Term) continue;
            const Term& target = it->second.term;
            std::string key = target.token();
            auto& finding = by_target[key];
            finding.target = target;
            std::string target_iri = target.is_iri() ? target.iri().text() : "";
            for (auto& note : row.notes)
                if (note.second != target_iri) finding.explanation.push_back(note);
            for (const auto& var : project.explanation_vars) {
                auto vit = row.vars.find(var);
                if (vit == row.vars.end() || vit->second.kind != RtValue::Kind::Term) continue;
                if (!vit->second.term.is_iri()) continue;
                std::string iri = vit->second.term.iri().text();
                if (iri != target_iri) finding.explanation.emplace_back("intersects", iri);
            }
        }

        std::vector<RuleFinding> findings;
        findings.reserve(by_target.size());
        for (auto& [key, finding] : by_target) {
            std::sort(finding.explanation.begin(), finding.explanation.end());
            finding.explanation.erase(
                std::unique(finding.explanation.begin(), finding.explanation.end()),
                finding.explanation.end());
            findings.push_back(std::move(finding));
        }
        return findings;
    }

private:
    const QueryPlan& plan_;
    const Graph& graph_;
    const geom::GeomIndex& geom_;
    const PackDefaults& defaults_;
    std::vector<Diagnostic>* diagnostics_;
    std::optional<std::vector<std::pair<std::string, const geom::Obb*>>> physical_;

    void diagnose(const std::string& message) {
        if (!diagnostics_) return;
        for (const auto& d : *diagnostics_)
            if (d.message == message) return;
        diagnostics_->push_back({"execute", message});
    }

    const std::vector<std::pair<std::string, const geom::Obb*>>& physical_elements() {
        if (!physical_) {
            physical_.emplace();
            TriplePattern p{PatternTerm::var("e"), PatternTerm(Term(vocab::rdf_type())),
                            PatternTerm(Term(vocab::reg("PhysicalElement")))};
            for (const auto& b : graph_.match(p)) {
                const Term& t = b.at("e");
                if (!t.is_iri()) continue;
                if (const geom::Obb* box = geom_.find(t.iri()))
                    physical_->emplace_back(t.iri().text(), box);
            }
        }
        return *physical_;
    }

    std::vector<Row> pipeline(const std::vector<PlanOp>& ops, std::vector<Row> rel,
                              ExecStats* stats) {
        for (std::size_t i = 0; i < ops.size(); ++i) {
            const PlanOp& op = ops[i];
            switch (op.kind) {
                case PlanOp::Kind::Scan:
                case PlanOp::Kind::HashJoin:
                    // a scan is a join with no shared variables against the
                    // current (initially unit) relation
                    rel = hash_join(std::move(rel), op);
                    break;
                case PlanOp::Kind::Filter: {
                    std::vector<Row> next;
                    for (auto& row : rel) {
                        try {
                            RtValue v = eval(op.expr, row);
                            if (v.kind != RtValue::Kind::Bool)
                                throw std::runtime_error("FILTER expression is not boolean");
                            if (v.truth) next.push_back(std::move(row));
                        } catch (const RowSkip& skip) {
                            diagnose(skip.message);
                        }
                    }
                    rel = std::move(next);
                    break;
                }
                case PlanOp::Kind::Bind: {
                    std::vector<Row> next;
                    for (auto& row : rel) {
                        try {
                            RtValue v = eval(op.expr, row);
                            row.vars.insert_or_assign(op.bind_var, std::move(v));
                            next.push_back(std::move(row));
                        } catch (const RowSkip& skip) {
                            diagnose(skip.message);
                        }
                    }
                    rel = std::move(next);
                    break;
                }
                case PlanOp::Kind::Geo: {
                    std::vector<Row> next;
                    for (auto& row : rel) {
                        try {
                            if (geo_holds(op, row)) next.push_back(std::move(row));
                        } catch (const RowSkip& skip) {
                            diagnose(skip.message);
                        }
                    }
                    rel = std::move(next);
                    break;
                }
                case PlanOp::Kind::AntiJoin: {
                    std::vector<Row> next;
                    for (auto& row : rel) {
                        Row probe;
                        probe.vars = row.vars;
                        std::vector<Row> seed{std::move(probe)};
                        if (pipeline(op.body, std::move(seed), nullptr).empty())
                            next.push_back(std::move(row));
                    }
                    rel = std::move(next);
                    break;
                }
                case PlanOp::Kind::Project: break;
            }
            if (stats && i == plan_.last_positive) {
                std::set<std::string> distinct;
                for (const auto& row : rel) {
                    auto it = row.vars.find(plan_.ast.target);
                    if (it != row.vars.end() && it->second.kind == RtValue::Kind::Term)
                        distinct.insert(it->second.term.token());
                }
                stats->candidates = distinct.size();
            }
        }
        return rel;
    }

    std::vector<Row> hash_join(std::vector<Row> left, const PlanOp& op) {
        auto matches = graph_.match(*op.pattern);
        // bucket the pattern side by join-key
        std::unordered_map<std::string, std::vector<const Bindings*>> buckets;
        buckets.reserve(matches.size());
        auto key_of_binding = [&](const Bindings& b) {
            std::string key;
            for (const auto& v : op.join_vars) {
                key += b.at(v).token();
                key += '\x1f';
            }
            return key;
        };
        for (const auto& m : matches) buckets[key_of_binding(m)].push_back(&m);

        std::vector<Row> out;
        for (auto& row : left) {
            std::string key;
            bool ok = true;
            for (const auto& v : op.join_vars) {
                auto it = row.vars.find(v);
                if (it == row.vars.end() || it->second.kind != RtValue::Kind::Term) {
                    ok = false;
                    break;
                }
                key += it->second.term.token();
                key += '\x1f';
            }
            if (!ok) continue;
            auto bucket = buckets.find(key);
            if (bucket == buckets.end()) continue;
            for (const Bindings* m : bucket->second) {
                Row merged = row;
                for (const auto& [name, term] : *m)
                    merged.vars.insert_or_assign(name, RtValue::of(term));
                out.push_back(std::move(merged));
            }
        }
        return out;
    }

    const geom::Obb& box_of(const RtValue& v, const std::string& var) {
        if (v.kind == RtValue::Kind::Box) return v.box;
        if (v.kind == RtValue::Kind::Term && v.term.is_iri()) {
            if (const geom::Obb* box = geom_.find(v.term.iri())) return *box;
            throw RowSkip{"rule '" + plan_.ast.id + "': ?" + var + " = <" + v.term.iri().text() +
                          "> has no bounding box; candidate skipped"};
        }
        throw RowSkip{"rule '" + plan_.ast.id + "': ?" + var + " is not box-valued"};
    }

    bool geo_holds(const PlanOp& op, Row& row) {
        const RtValue& va = row.vars.at(op.geo_a);
        const RtValue& vb = row.vars.at(op.geo_b);
        const geom::Obb& a = box_of(va, op.geo_a);
        const geom::Obb& b = box_of(vb, op.geo_b);
        bool holds;
        const char* role;
        if (op.geo_kind == GeoKind::Intersects) {
            holds = geom::intersects(a, b);
            role = "intersects";
        } else {
            holds = geom::adjacent(a, b, op.geo_eps.value_or(defaults_.adjacency_eps_m));
            role = "adjacent to";
        }
        if (holds) {
            for (const RtValue* v : {&va, &vb})
                if (v->kind == RtValue::Kind::Term && v->term.is_iri())
                    row.notes.emplace_back(role, v->term.iri().text());
        }
        return holds;
    }

    static double as_number(const RtValue& v, const Expr& at) {
        if (v.kind == RtValue::Kind::Number) return v.number;
        if (v.kind == RtValue::Kind::Term && v.term.is_literal() && v.term.literal().is_numeric())
            return v.term.literal().number();
        throw std::runtime_error("line " + std::to_string(at.line) + ": value is not numeric");
    }

    static bool as_bool(const RtValue& v, const Expr& at) {
        if (v.kind == RtValue::Kind::Bool) return v.truth;
        if (v.kind == RtValue::Kind::Term && v.term.is_literal() &&
            v.term.literal().kind() == rdf::LiteralKind::Boolean)
            return v.term.literal().truth();
        throw std::runtime_error("line " + std::to_string(at.line) + ": value is not boolean");
    }

    static std::string as_text(const RtValue& v) {
        switch (v.kind) {
            case RtValue::Kind::Term:
                if (v.term.is_literal()) return v.term.literal().lexical();
                if (v.term.is_iri()) return v.term.iri().text();
                return v.term.token();
            case RtValue::Kind::Symbol: return v.symbol;
            case RtValue::Kind::Number: return format_double(v.number);
            case RtValue::Kind::Bool: return v.truth ? "true" : "false";
            default: return "";
        }
    }

    static bool numericish(const RtValue& v) {
        return v.kind == RtValue::Kind::Number ||
               (v.kind == RtValue::Kind::Term && v.term.is_literal() &&
                v.term.literal().is_numeric());
    }

    RtValue eval(const Expr& e, Row& row) {
        switch (e.kind) {
            case Expr::Kind::Number: return RtValue::of(e.number);
            case Expr::Kind::String: {
                RtValue v;
                v.kind = RtValue::Kind::Term;
                v.term = Term(Literal::text(e.text));
                return v;
            }
            case Expr::Kind::Symbol: {
                if (e.text == "true") return RtValue::of(true);
                if (e.text == "false") return RtValue::of(false);
                RtValue v;
                v.kind = RtValue::Kind::Symbol;
                v.symbol = e.text;
                return v;
            }
            case Expr::Kind::Var: {
                auto it = row.vars.find(e.text);
                if (it == row.vars.end())
                    throw std::runtime_error("line " + std::to_string(e.line) +
                                             ": unbound variable ?" + e.text);
                return it->second;
            }
            case Expr::Kind::And: {
                if (!as_bool(eval(e.args[0], row), e)) return RtValue::of(false);
                return RtValue::of(as_bool(eval(e.args[1], row), e));
            }
            case Expr::Kind::Or: {
                if (as_bool(eval(e.args[0], row), e)) return RtValue::of(true);
                return RtValue::of(as_bool(eval(e.args[1], row), e));
            }
            case Expr::Kind::Not: return RtValue::of(!as_bool(eval(e.args[0], row), e));
            case Expr::Kind::Compare: {
                RtValue a = eval(e.args[0], row);
                RtValue b = eval(e.args[1], row);
                if (e.cmp_op == "=" || e.cmp_op == "!=") {
                    bool eq;
                    if (numericish(a) && numericish(b))
                        eq = as_number(a, e) == as_number(b, e);
                    else
                        eq = as_text(a) == as_text(b);
                    return RtValue::of(e.cmp_op == "=" ? eq : !eq);
                }
                double x = as_number(a, e), y = as_number(b, e);
                if (e.cmp_op == "<") return RtValue::of(x < y);
                if (e.cmp_op == "<=") return RtValue::of(x <= y);
                if (e.cmp_op == ">") return RtValue::of(x > y);
                return RtValue::of(x >= y);
            }
            case Expr::Kind::Call: return call(e, row);
        }
        throw std::runtime_error("bad expression");
    }

    RtValue call(const Expr& e, Row& row) {
        std::vector<RtValue> args;
        args.reserve(e.args.size());
        for (const auto& a : e.args) args.push_back(eval(a, row));

        if (e.text == "FREESPACE") {
            const RtValue& elem = args[0];
            if (elem.kind != RtValue::Kind::Term || !elem.term.is_iri())
                throw std::runtime_error("FREESPACE needs an element variable");
            if (args[1].kind != RtValue::Kind::Symbol ||
                (args[1].symbol != "LEFT" && args[1].symbol != "RIGHT"))
                throw std::runtime_error("FREESPACE side must be LEFT or RIGHT");
            const geom::Obb* anchor = geom_.find(elem.term.iri());
            if (!anchor)
                throw RowSkip{"rule '" + plan_.ast.id + "': <" + elem.term.iri().text() +
                              "> has no bounding box; candidate skipped"};
            double width = as_number(args[2], e);
            double depth = as_number(args[3], e);
            double height = args.size() > 4 ? as_number(args[4], e) : defaults_.freespace_height_m;
            return RtValue::of(geom::make_freespace(
                *anchor, args[1].symbol == "LEFT" ? geom::Side::Left : geom::Side::Right, width,
                depth, height));
        }
        if (e.text == "CLEAR") {
            const geom::Obb& box = box_of(args[0], "box");
            std::string excluded;
            if (args[1].kind == RtValue::Kind::Term && args[1].term.is_iri())
                excluded = args[1].term.iri().text();
            bool clear = true;
            for (const auto& [iri, elem_box] : physical_elements()) {
                if (iri == excluded) continue;
                if (defaults_.exempt_floor_beneath &&
                    std::abs(elem_box->top_z() - box.base_z()) <= defaults_.adjacency_eps_m)
                    continue;  // the floor the box stands on
                if (geom::intersects(box, *elem_box)) {
                    row.notes.emplace_back("intersects FreeSpace", iri);
                    clear = false;
                }
            }
            return RtValue::of(clear);
        }
        if (e.text == "FIRETHRESHOLD") {
            if (defaults_.fire_threshold_table.empty())
                throw std::runtime_error("fire threshold table is not configured in the pack");
            return RtValue::of(
                resolve_fire_threshold(as_number(args[0], e), defaults_.fire_threshold_table));
        }
        if (e.text == "HEIGHT_OF") {
            if (args[0].kind != RtValue::Kind::Term || !args[0].term.is_iri())
                throw std::runtime_error("HEIGHT_OF needs an element variable");
            TriplePattern p{PatternTerm(args[0].term), PatternTerm(Term(vocab::reg("fireHeight"))),
                            PatternTerm::var("h")};
            for (const auto& b : graph_.match(p)) {
                const Term& t = b.at("h");
                if (t.is_literal() && t.literal().is_numeric())
                    return RtValue::of(t.literal().number());
            }
            throw RowSkip{"rule '" + plan_.ast.id + "': <" + args[0].term.iri().text() +
                          "> has no derived fire height; candidate skipped"};
        }
        throw std::runtime_error("unknown builtin: " + e.text);
    }
};

}  // namespace

std::vector<RuleFinding> execute(const QueryPlan& plan, const Graph& graph,
                                 const geom::GeomIndex& geom, const PackDefaults& defaults,
                                 ExecStats* stats, std::vector<Diagnostic>* diagnostics) {
    Executor ex(plan, graph, geom, defaults, diagnostics);
    return ex.run(stats);
}

}  // namespace regcheck::dsl
