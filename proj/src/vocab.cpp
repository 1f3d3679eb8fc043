#include "regcheck/vocab.hpp"

#include <stdexcept>

namespace regcheck::vocab {

rdf::Iri rdf_type() { return rdf::Iri(std::string(ns::rdf) + "type"); }

rdf::Iri ifc(std::string_view local) { return rdf::Iri(std::string(ns::ifc) + std::string(local)); }

rdf::Iri reg(std::string_view local) { return rdf::Iri(std::string(ns::reg) + std::string(local)); }

rdf::Iri geo(std::string_view local) { return rdf::Iri(std::string(ns::geo) + std::string(local)); }

rdf::Iri inst(std::int64_t instance_number) {
    return rdf::Iri(std::string(ns::inst) + std::to_string(instance_number));
}

rdf::Iri VocabTable::resolve(std::string_view curie_or_iri, bool* known) const {
    if (known) *known = true;
    if (curie_or_iri.find("://") != std::string_view::npos)
        return rdf::Iri(curie_or_iri);
    auto colon = curie_or_iri.find(':');
    if (colon == std::string_view::npos)
        throw std::runtime_error("not a curie or absolute IRI: " + std::string(curie_or_iri));
    std::string prefix(curie_or_iri.substr(0, colon));
    std::string local(curie_or_iri.substr(colon + 1));
    auto it = prefixes.find(prefix);
    if (it == prefixes.end())
        throw std::runtime_error("unknown namespace prefix: " + prefix);
    if (known) {
        auto terms = known_terms.find(prefix);
        *known = terms != known_terms.end() && terms->second.count(local) != 0;
    }
    return rdf::Iri(it->second + local);
}

void VocabTable::declare(const std::string& prefix, const std::string& iri) {
    prefixes[prefix] = iri;
}

void VocabTable::add_term(const std::string& prefix, const std::string& local) {
    known_terms[prefix].insert(local);
}

const VocabTable& default_vocab() {
    static const VocabTable table = [] {
        VocabTable t;
        t.declare("rdf", std::string(ns::rdf));
        t.declare("ifc", std::string(ns::ifc));
        t.declare("reg", std::string(ns::reg));
        t.declare("geo", std::string(ns::geo));
        t.add_term("rdf", "type");

        for (const char* cls : {"IFCPROJECT", "IFCBUILDING", "IFCBUILDINGSTOREY", "IFCSPACE",
                                "IFCWALL", "IFCWALLSTANDARDCASE", "IFCSLAB", "IFCCOLUMN",
                                "IFCBEAM", "IFCDOOR", "IFCFLOWTERMINAL", "IFCFLOWTERMINALTYPE",
                                "IFCSANITARYTERMINALTYPE", "IFCRAILING",
                                "IFCRELASSOCIATESCLASSIFICATION", "IFCCLASSIFICATIONREFERENCE",
                                "IFCCLASSIFICATION"})
            t.add_term("ifc", cls);
        for (const char* p : {"guid", "name", "elevation", "predefinedType", "containedIn",
                              "aggregates", "definedByType", "loadBearing",
                              "fireLoadBearingDurationMinutes", "relatedObject",
                              "relatingClassification", "itemReference", "referencedSource",
                              "location", "source", "edition"})
            t.add_term("ifc", p);

        for (const char* r : {"WC", "Building", "PhysicalElement", "StructureElement",
                              "HighestStorey", "hasClassification", "floorOf", "fireHeight",
                              "fireLoadBearingDuration"})
            t.add_term("reg", r);

        for (const char* g : {"hasObb", "centerX", "centerY", "centerZ", "axis0X", "axis0Y",
                              "axis0Z", "axis1X", "axis1Y", "axis1Z", "axis2X", "axis2Y",
                              "axis2Z", "halfExtentX", "halfExtentY", "halfExtentZ"})
            t.add_term("geo", g);
        return t;
    }();
    return table;
}

}  // namespace regcheck::vocab
