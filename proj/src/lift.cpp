#include "regcheck/lift.hpp"

#include "regcheck/util.hpp"
#include "regcheck/vocab.hpp"

#include <json.hpp>

#include <stdexcept>

namespace regcheck::lift {

using rdf::Literal;
using rdf::Term;
using rdf::Triple;
using step::StepEntity;
using step::StepFile;
using step::StepValue;

LiftConfig default_lift_config() {
    LiftConfig c;
    c.keep_entities = {"IFCPROJECT", "IFCBUILDING", "IFCBUILDINGSTOREY", "IFCSPACE",
                       "IFCWALL", "IFCWALLSTANDARDCASE", "IFCSLAB", "IFCCOLUMN", "IFCBEAM",
                       "IFCDOOR", "IFCFLOWTERMINAL", "IFCFLOWTERMINALTYPE",
                       "IFCSANITARYTERMINALTYPE", "IFCRAILING", "IFCCLASSIFICATIONREFERENCE",
                       "IFCCLASSIFICATION"};
    c.keep_relations = {"IFCRELCONTAINEDINSPATIALSTRUCTURE", "IFCRELAGGREGATES",
                        "IFCRELDEFINESBYTYPE", "IFCRELDEFINESBYPROPERTIES",
                        "IFCRELASSOCIATESCLASSIFICATION"};
    c.property_map = {
        {"*", "LoadBearing", vocab::ifc("loadBearing")},
        {"*", "FireLoadBearingDuration", vocab::ifc("fireLoadBearingDurationMinutes")},
    };
    return c;
}

LiftConfig load_lift_config(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    LiftConfig c;
    for (const auto& e : j.value("keep_entities", nlohmann::json::array()))
        c.keep_entities.insert(to_upper(e.get<std::string>()));
    for (const auto& e : j.value("keep_relations", nlohmann::json::array()))
        c.keep_relations.insert(to_upper(e.get<std::string>()));
    for (const auto& m : j.value("property_map", nlohmann::json::array())) {
        PropertyMapping pm;
        pm.pset = m.at("pset").get<std::string>();
        pm.prop = m.at("prop").get<std::string>();
        pm.predicate = vocab::default_vocab().resolve(m.at("predicate").get<std::string>());
        c.property_map.push_back(std::move(pm));
    }
    return c;
}

UnitScale extract_units(const StepFile& file, std::vector<std::string>& warnings) {
    for (const auto& [id, entity] : file.entities) {
        if (entity.name != "IFCSIUNIT" || entity.args.size() < 4) continue;
        const StepValue& unit_type = entity.args[1];
        if (!unit_type.is(StepValue::Kind::Enum) || unit_type.text != "LENGTHUNIT") continue;
        const StepValue& prefix = entity.args[2];
        const StepValue& name = entity.args[3];
        if (!name.is(StepValue::Kind::Enum) || name.text != "METRE") {
            warnings.push_back("#" + std::to_string(id) + ": unsupported length unit, assuming meters");
            return {1.0};
        }
        if (prefix.is(StepValue::Kind::Unset)) return {1.0};
        if (prefix.is(StepValue::Kind::Enum)) {
            if (prefix.text == "MILLI") return {0.001};
            if (prefix.text == "CENTI") return {0.01};
            if (prefix.text == "DECI") return {0.1};
            if (prefix.text == "KILO") return {1000.0};
            warnings.push_back("#" + std::to_string(id) + ": unsupported SI prefix ." +
                               prefix.text + "., assuming meters");
        }
        return {1.0};
    }
    warnings.push_back("no length unit declaration found, assuming meters");
    return {1.0};
}

namespace {

struct Lifter {
    const StepFile& file;
    const UnitScale& scale;
    const LiftConfig& config;
    LiftResult out;

    bool kept(std::int64_t id) const {
        auto it = file.entities.find(id);
        return it != file.entities.end() && config.keep_entities.count(it->second.name) != 0;
    }

    const StepEntity* resolve(const StepValue& v) const {
        if (!v.is(StepValue::Kind::Ref)) return nullptr;
        auto it = file.entities.find(v.integer);
        return it == file.entities.end() ? nullptr : &it->second;
    }

    void add(Term s, rdf::Iri p, Term o) { out.graph.insert(Triple(std::move(s), p, std::move(o))); }

    void warn_skip(const StepEntity& rel, const char* what) {
        out.warnings.push_back("#" + std::to_string(rel.id) + " (" + rel.name +
                               "): dangling reference, " + what + " skipped");
    }

    static bool arg_text(const StepEntity& e, std::size_t i, std::string& s) {
        if (i >= e.args.size() || !e.args[i].is(StepValue::Kind::Text)) return false;
        s = e.args[i].text;
        return true;
    }

    void lift_entity(const StepEntity& e) {
        Term subject(vocab::inst(e.id));
        add(subject, vocab::rdf_type(), Term(vocab::ifc(e.name)));

        if (e.name == "IFCCLASSIFICATIONREFERENCE") {
            std::string s;
            if (arg_text(e, 0, s)) add(subject, vocab::ifc("location"), Term(Literal::text(s)));
            if (arg_text(e, 1, s)) add(subject, vocab::ifc("itemReference"), Term(Literal::text(s)));
            if (arg_text(e, 2, s)) add(subject, vocab::ifc("name"), Term(Literal::text(s)));
            if (e.args.size() > 3 && e.args[3].is(StepValue::Kind::Ref)) {
                if (resolve(e.args[3]))
                    add(subject, vocab::ifc("referencedSource"), Term(vocab::inst(e.args[3].integer)));
                else
                    warn_skip(e, "referenced source");
            }
            return;
        }
        if (e.name == "IFCCLASSIFICATION") {
            std::string s;
            if (arg_text(e, 0, s)) add(subject, vocab::ifc("source"), Term(Literal::text(s)));
            if (arg_text(e, 1, s)) add(subject, vocab::ifc("edition"), Term(Literal::text(s)));
            if (arg_text(e, 3, s)) add(subject, vocab::ifc("name"), Term(Literal::text(s)));
            return;
        }

        // rooted entity: GlobalId at 0, Name at 2
        std::string s;
        if (arg_text(e, 0, s)) add(subject, vocab::ifc("guid"), Term(Literal::text(s)));
        if (arg_text(e, 2, s) && !s.empty()) add(subject, vocab::ifc("name"), Term(Literal::text(s)));

        if (e.name == "IFCBUILDINGSTOREY" && e.args.size() > 9) {
            const StepValue& elev = e.args[9];
            if (elev.is(StepValue::Kind::Real))
                add(subject, vocab::ifc("elevation"),
                    Term(Literal::decimal(elev.real * scale.length_to_meters)));
            else if (elev.is(StepValue::Kind::Integer))
                add(subject, vocab::ifc("elevation"),
                    Term(Literal::decimal(static_cast<double>(elev.integer) * scale.length_to_meters)));
        }

        if (!e.args.empty()) {
            const StepValue& last = e.args.back();
            if (last.is(StepValue::Kind::Enum) && last.text != "T" && last.text != "F" &&
                last.text != "U")
                add(subject, vocab::ifc("predefinedType"), Term(Literal::text(last.text)));
        }
    }

    // property single value -> literal; typed values unwrap to their payload
    bool value_literal(const StepValue& v, Literal& out_lit) const {
        const StepValue* inner = &v;
        std::string type_name;
        if (v.is(StepValue::Kind::Typed)) {
            type_name = v.text;
            inner = &v.items[0];
        }
        switch (inner->kind) {
            case StepValue::Kind::Real: out_lit = Literal::decimal(inner->real); return true;
            case StepValue::Kind::Integer: out_lit = Literal::integer(inner->integer); return true;
            case StepValue::Kind::Text: out_lit = Literal::text(inner->text); return true;
            case StepValue::Kind::Enum:
                if (inner->text == "T") { out_lit = Literal::boolean(true); return true; }
                if (inner->text == "F") { out_lit = Literal::boolean(false); return true; }
                out_lit = Literal::text(inner->text);
                return true;
            default: return false;
        }
    }

    void lift_properties(const StepEntity& rel) {
        if (rel.args.size() < 6) return;
        const StepEntity* pset = resolve(rel.args[5]);
        if (!pset) { warn_skip(rel, "relation"); return; }
        if (pset->name != "IFCPROPERTYSET" || pset->args.size() < 5) return;
        std::string pset_name;
        arg_text(*pset, 2, pset_name);

        const StepValue& objects = rel.args[4];
        if (!objects.is(StepValue::Kind::List)) return;

        for (const auto& prop_ref : pset->args[4].items) {
            const StepEntity* prop = resolve(prop_ref);
            if (!prop) { warn_skip(*pset, "property"); continue; }
            if (prop->name != "IFCPROPERTYSINGLEVALUE" || prop->args.size() < 3) continue;
            std::string prop_name;
            if (!arg_text(*prop, 0, prop_name)) continue;
            for (const auto& mapping : config.property_map) {
                if (mapping.pset != "*" && mapping.pset != pset_name) continue;
                if (mapping.prop != prop_name) continue;
                Literal lit = Literal::text("");
                if (!value_literal(prop->args[2], lit)) continue;
                for (const auto& obj_ref : objects.items) {
                    if (!resolve(obj_ref)) { warn_skip(rel, "object"); continue; }
                    if (!kept(obj_ref.integer)) continue;
                    add(Term(vocab::inst(obj_ref.integer)), mapping.predicate, Term(lit));
                }
            }
        }
    }

    void link_each(const StepEntity& rel, const StepValue& many, std::int64_t one,
                   rdf::Iri predicate, bool many_as_subject) {
        if (!resolve(StepValue::of_ref(one))) { warn_skip(rel, "relation"); return; }
        if (!kept(one)) return;
        if (!many.is(StepValue::Kind::List)) return;
        for (const auto& item : many.items) {
            if (!item.is(StepValue::Kind::Ref)) continue;
            if (!resolve(item)) { warn_skip(rel, "related object"); continue; }
            if (!kept(item.integer)) continue;
            Term many_term(vocab::inst(item.integer));
            Term one_term(vocab::inst(one));
            if (many_as_subject)
                add(many_term, predicate, one_term);
            else
                add(one_term, predicate, many_term);
        }
    }

    void lift_relation(const StepEntity& rel) {
        if (rel.name == "IFCRELCONTAINEDINSPATIALSTRUCTURE" && rel.args.size() >= 6 &&
            rel.args[5].is(StepValue::Kind::Ref)) {
            link_each(rel, rel.args[4], rel.args[5].integer, vocab::ifc("containedIn"), true);
        } else if (rel.name == "IFCRELAGGREGATES" && rel.args.size() >= 6 &&
                   rel.args[4].is(StepValue::Kind::Ref)) {
            link_each(rel, rel.args[5], rel.args[4].integer, vocab::ifc("aggregates"), false);
        } else if (rel.name == "IFCRELDEFINESBYTYPE" && rel.args.size() >= 6 &&
                   rel.args[5].is(StepValue::Kind::Ref)) {
            link_each(rel, rel.args[4], rel.args[5].integer, vocab::ifc("definedByType"), true);
        } else if (rel.name == "IFCRELDEFINESBYPROPERTIES") {
            lift_properties(rel);
        } else if (rel.name == "IFCRELASSOCIATESCLASSIFICATION" && rel.args.size() >= 6) {
            // lifted verbatim; the shortcut to one triple happens in inference
            Term subject(vocab::inst(rel.id));
            add(subject, vocab::rdf_type(), Term(vocab::ifc(rel.name)));
            std::string s;
            if (arg_text(rel, 0, s)) add(subject, vocab::ifc("guid"), Term(Literal::text(s)));
            if (arg_text(rel, 2, s) && !s.empty()) add(subject, vocab::ifc("name"), Term(Literal::text(s)));
            if (rel.args[4].is(StepValue::Kind::List)) {
                for (const auto& obj : rel.args[4].items) {
                    if (!obj.is(StepValue::Kind::Ref)) continue;
                    if (!resolve(obj)) { warn_skip(rel, "related object"); continue; }
                    if (kept(obj.integer))
                        add(subject, vocab::ifc("relatedObject"), Term(vocab::inst(obj.integer)));
                }
            }
            if (rel.args[5].is(StepValue::Kind::Ref)) {
                if (resolve(rel.args[5]))
                    add(subject, vocab::ifc("relatingClassification"),
                        Term(vocab::inst(rel.args[5].integer)));
                else
                    warn_skip(rel, "relating classification");
            }
        }
    }

    void run() {
        for (const auto& [id, entity] : file.entities)
            if (config.keep_entities.count(entity.name)) lift_entity(entity);
        for (const auto& [id, entity] : file.entities)
            if (config.keep_relations.count(entity.name)) lift_relation(entity);
    }
};

}  // namespace

LiftResult lift_model(const StepFile& file, const UnitScale& scale, const LiftConfig& config) {
    if (scale.length_to_meters <= 0.0)
        throw std::invalid_argument("unit scale must be positive");
    Lifter lifter{file, scale, config, {}};
    lifter.run();
    return std::move(lifter.out);
}

}  // namespace regcheck::lift
