#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "regcheck/lift.hpp"
#include "regcheck/step.hpp"
#include "regcheck/util.hpp"
#include "regcheck/vocab.hpp"
#include "support/fixtures.hpp"

#include <algorithm>

using namespace regcheck;
using rdf::Literal;
using rdf::PatternTerm;
using rdf::Term;
using rdf::Triple;

namespace {

std::string wrap(const std::string& statements) {
    return "ISO-10303-21;\nHEADER;\nFILE_SCHEMA(('IFC2X3'));\nENDSEC;\nDATA;\n" + statements +
           "\nENDSEC;\nEND-ISO-10303-21;\n";
}

bool has(const rdf::Graph& g, Term s, rdf::Iri p, Term o) {
    return g.contains(Triple(std::move(s), p, std::move(o)));
}

}  // namespace

TEST_CASE("unit extraction") {
    std::vector<std::string> warnings;

    auto metre = step::parse_step(wrap("#1=IFCSIUNIT(*,.LENGTHUNIT.,$,.METRE.);"));
    CHECK(lift::extract_units(metre, warnings).length_to_meters == 1.0);
    CHECK(warnings.empty());

    auto milli = step::parse_step(wrap("#1=IFCSIUNIT(*,.LENGTHUNIT.,.MILLI.,.METRE.);"));
    CHECK(lift::extract_units(milli, warnings).length_to_meters == 0.001);
    CHECK(warnings.empty());

    auto none = step::parse_step(wrap("#1=IFCWALL('g',$,$,$,$,$,$,$);"));
    CHECK(lift::extract_units(none, warnings).length_to_meters == 1.0);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("no length unit") != std::string::npos);
}

TEST_CASE("storey elevation is scaled to meters") {
    auto file = step::parse_step(wrap(
        "#5=IFCBUILDINGSTOREY('0sToReYscaled00000001',$,'L3',$,$,$,$,$,.ELEMENT.,9000.);"));
    auto lifted = lift::lift_model(file, {0.001}, lift::default_lift_config());
    CHECK(has(lifted.graph, Term(vocab::inst(5)), vocab::ifc("elevation"),
              Term(Literal::decimal(9.0))));
}

TEST_CASE("wc typing chain from the bathroom fixture") {
    auto file = step::parse_step(read_file(testsupport::fixture_path("bathroom.ifc")));
    std::vector<std::string> warnings;
    auto scale = lift::extract_units(file, warnings);
    CHECK(scale.length_to_meters == 0.001);
    auto lifted = lift::lift_model(file, scale, lift::default_lift_config());

    CHECK(has(lifted.graph, Term(vocab::inst(30)), vocab::ifc("definedByType"),
              Term(vocab::inst(40))));
    CHECK(has(lifted.graph, Term(vocab::inst(40)), vocab::ifc("predefinedType"),
              Term(Literal::text("WCSEAT"))));
    CHECK(has(lifted.graph, Term(vocab::inst(30)), vocab::rdf_type(),
              Term(vocab::ifc("IFCFLOWTERMINAL"))));
    CHECK(has(lifted.graph, Term(vocab::inst(30)), vocab::ifc("guid"),
              Term(Literal::text("1wCgU1dAAAAAAAAAAAAAA1"))));
    CHECK(has(lifted.graph, Term(vocab::inst(30)), vocab::ifc("containedIn"),
              Term(vocab::inst(11))));
    CHECK(has(lifted.graph, Term(vocab::inst(10)), vocab::ifc("aggregates"),
              Term(vocab::inst(11))));
}

TEST_CASE("unkept entities produce no triples") {
    auto file = step::parse_step(wrap("#1=IFCCHIMNEY('x',$,$,$,$,$,$,$);\n"
                                      "#2=IFCSENSOR('y',$,$,$,$,$,$);"));
    auto lifted = lift::lift_model(file, {1.0}, lift::default_lift_config());
    CHECK(lifted.graph.count() == 0);
}

TEST_CASE("property set mapping") {
    auto file = step::parse_step(read_file(testsupport::fixture_path("tower.ifc")));
    std::vector<std::string> warnings;
    auto lifted =
        lift::lift_model(file, lift::extract_units(file, warnings), lift::default_lift_config());

    CHECK(has(lifted.graph, Term(vocab::inst(30)), vocab::ifc("loadBearing"),
              Term(Literal::boolean(true))));
    CHECK(has(lifted.graph, Term(vocab::inst(30)), vocab::ifc("fireLoadBearingDurationMinutes"),
              Term(Literal::decimal(30.0))));
    CHECK(has(lifted.graph, Term(vocab::inst(40)), vocab::ifc("fireLoadBearingDurationMinutes"),
              Term(Literal::decimal(90.0))));
}

TEST_CASE("dangling relation reference warns and skips") {
    auto file = step::parse_step(
        wrap("#1=IFCWALL('w',$,$,$,$,$,$,$);\n"
             "#2=IFCRELCONTAINEDINSPATIALSTRUCTURE('r',$,$,$,(#1),#99);"));
    auto lifted = lift::lift_model(file, {1.0}, lift::default_lift_config());
    bool warned = false;
    for (const auto& w : lifted.warnings)
        if (w.find("dangling") != std::string::npos) warned = true;
    CHECK(warned);
    rdf::TriplePattern contained{PatternTerm::var("s"),
                                 PatternTerm(Term(vocab::ifc("containedIn"))),
                                 PatternTerm::var("o")};
    CHECK(lifted.graph.match(contained).empty());
}

TEST_CASE("lift is deterministic") {
    auto file = step::parse_step(read_file(testsupport::fixture_path("bathroom.ifc")));
    std::vector<std::string> warnings;
    auto scale = lift::extract_units(file, warnings);
    auto a = lift::lift_model(file, scale, lift::default_lift_config());
    auto b = lift::lift_model(file, scale, lift::default_lift_config());
    CHECK(rdf::serialize_ntriples(a.graph) == rdf::serialize_ntriples(b.graph));
    CHECK(a.graph.count() == b.graph.count());
}

TEST_CASE("ntriples serialization shape") {
    rdf::Graph empty;
    CHECK(rdf::serialize_ntriples(empty) == "");

    rdf::Graph one;
    one.insert(Triple(Term(vocab::inst(1)), vocab::rdf_type(), Term(vocab::ifc("IFCWALL"))));
    std::string nt = rdf::serialize_ntriples(one);
    REQUIRE(nt.size() > 3);
    CHECK(nt.find(" .\n") == nt.size() - 3);
    CHECK(std::count(nt.begin(), nt.end(), '\n') == 1);
}

TEST_CASE("instance IRIs embed the step id injectively") {
    CHECK(vocab::inst(30).text() == std::string(vocab::ns::inst) + "30");
    CHECK(vocab::inst(30).id() != vocab::inst(40).id());
    CHECK(vocab::inst(30) == vocab::inst(30));
}

TEST_CASE("lift config from JSON") {
    auto config = lift::load_lift_config(R"({
        "keep_entities": ["IFCWALL"],
        "keep_relations": [],
        "property_map": [{"pset": "Pset_Custom", "prop": "Reference", "predicate": "ifc:name"}]
    })");
    CHECK(config.keep_entities == std::set<std::string>{"IFCWALL"});
    CHECK(config.keep_relations.empty());
    REQUIRE(config.property_map.size() == 1);
    CHECK(config.property_map[0].predicate == vocab::ifc("name"));

    auto file = step::parse_step(wrap("#1=IFCWALL('w',$,$,$,$,$,$,$);\n"
                                      "#2=IFCDOOR('d',$,$,$,$,$,$,$,2.1,0.9);"));
    auto lifted = lift::lift_model(file, {1.0}, config);
    CHECK(has(lifted.graph, Term(vocab::inst(1)), vocab::rdf_type(), Term(vocab::ifc("IFCWALL"))));
    rdf::TriplePattern door{PatternTerm(Term(vocab::inst(2))), PatternTerm::var("p"),
                            PatternTerm::var("o")};
    CHECK(lifted.graph.match(door).empty());
}

TEST_CASE("classification chain is lifted verbatim") {
    auto file = step::parse_step(read_file(testsupport::fixture_path("bathroom.ifc")));
    std::vector<std::string> warnings;
    auto lifted =
        lift::lift_model(file, lift::extract_units(file, warnings), lift::default_lift_config());

    std::size_t chain_triples = 0;
    for (std::int64_t id : {90, 91, 92}) {
        rdf::TriplePattern p{PatternTerm(Term(vocab::inst(id))), PatternTerm::var("p"),
                             PatternTerm::var("o")};
        chain_triples += lifted.graph.match(p).size();
    }
    CHECK(chain_triples >= 10);
    CHECK(has(lifted.graph, Term(vocab::inst(91)), vocab::ifc("itemReference"),
              Term(Literal::text("F-74"))));
}
