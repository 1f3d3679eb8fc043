#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "regcheck/geom.hpp"
#include "regcheck/step.hpp"
#include "regcheck/util.hpp"
#include "regcheck/vocab.hpp"
#include "support/fixtures.hpp"
#include "support/geom_oracle.hpp"

#include <cmath>

using namespace regcheck;
using geom::AxisPlacement;
using geom::Obb;
using geom::Side;
using geom::Transform;
using geom::Vec3;
using testsupport::Mat4;
using testsupport::Rng;

namespace {

Obb cube(Vec3 center, double half = 0.5) {
    return Obb::make(center, {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}, {half, half, half});
}

bool close(const Vec3& a, const Vec3& b, double eps = 1e-12) {
    return std::abs(a.x - b.x) <= eps && std::abs(a.y - b.y) <= eps && std::abs(a.z - b.z) <= eps;
}

}  // namespace

TEST_CASE("placement composition") {
    lift::UnitScale meters{1.0};

    SUBCASE("identity chain") {
        Transform t = geom::compose_placements({}, meters);
        CHECK(close(t.apply(Vec3{1, 2, 3}), Vec3{1, 2, 3}));
    }

    SUBCASE("two pure translations add") {
        AxisPlacement chain[2] = {{Vec3{1, 2, 3}, {}, {}}, {Vec3{10, 0, 0}, {}, {}}};
        Transform t = geom::compose_placements(chain, meters);
        CHECK(close(t.translation, Vec3{11, 2, 3}));
    }

    SUBCASE("rotation then translation, against a 4x4 reference") {
        // element frame rotated 90 degrees about Z, parent translated (1,0,0)
        AxisPlacement chain[2] = {{Vec3{0, 0, 0}, Vec3{0, 0, 1}, Vec3{0, 1, 0}},
                                  {Vec3{1, 0, 0}, {}, {}}};
        Transform t = geom::compose_placements(chain, meters);
        Vec3 p = t.apply(Vec3{1, 0, 0});
        CHECK(close(p, Vec3{1, 1, 0}, 1e-12));

        // independent reference: homogeneous matrix product
        Transform rot;
        rot.rotation.col = {Vec3{0, 1, 0}, Vec3{-1, 0, 0}, Vec3{0, 0, 1}};
        Transform trans;
        trans.translation = Vec3{1, 0, 0};
        Mat4 reference = Mat4::from(trans) * Mat4::from(rot);
        CHECK(close(reference.apply(Vec3{1, 0, 0}), p, 1e-12));
    }

    SUBCASE("millimeter locations are scaled") {
        AxisPlacement chain[1] = {{Vec3{2000, 0, 0}, {}, {}}};
        Transform t = geom::compose_placements(chain, {0.001});
        CHECK(close(t.translation, Vec3{2, 0, 0}));
    }

    SUBCASE("near-orthogonal input is re-orthonormalized") {
        AxisPlacement chain[1] = {{Vec3{0, 0, 0}, Vec3{0, 0, 1}, Vec3{1, 0.25, 0}}};
        Transform t = geom::compose_placements(chain, meters);
        CHECK(std::abs(t.rotation.col[0].dot(t.rotation.col[2])) < 1e-12);
        CHECK(t.rotation.col[0].norm() == doctest::Approx(1.0));
    }

    SUBCASE("degenerate directions are errors") {
        AxisPlacement zero_axis[1] = {{Vec3{0, 0, 0}, Vec3{0, 0, 0}, {}}};
        CHECK_THROWS_AS(geom::compose_placements(zero_axis, meters), std::domain_error);
        AxisPlacement parallel[1] = {{Vec3{0, 0, 0}, Vec3{0, 0, 1}, Vec3{0, 0, 2}}};
        CHECK_THROWS_AS(geom::compose_placements(parallel, meters), std::domain_error);
    }
}

TEST_CASE("boxes from representations") {
    std::string source =
        "ISO-10303-21;\nHEADER;\nFILE_SCHEMA(('IFC2X3'));\nENDSEC;\nDATA;\n"
        "#1=IFCWALL('w',$,$,$,$,$,#5,$);\n"
        "#5=IFCPRODUCTDEFINITIONSHAPE($,$,(#6));\n"
        "#6=IFCSHAPEREPRESENTATION($,'Body','BoundingBox',(#7));\n"
        "#7=IFCBOUNDINGBOX(#8,2.,1.,3.);\n"
        "#8=IFCCARTESIANPOINT((0.,0.,0.));\n"
        "#11=IFCCOLUMN('c',$,$,$,$,$,#15,$);\n"
        "#15=IFCPRODUCTDEFINITIONSHAPE($,$,(#16));\n"
        "#16=IFCSHAPEREPRESENTATION($,'Body','SweptSolid',(#17));\n"
        "#17=IFCEXTRUDEDAREASOLID(#18,#20,#23,1.);\n"
        "#18=IFCRECTANGLEPROFILEDEF(.AREA.,$,#19,0.6,0.8);\n"
        "#19=IFCAXIS2PLACEMENT2D(#24,$);\n"
        "#24=IFCCARTESIANPOINT((0.,0.));\n"
        "#20=IFCAXIS2PLACEMENT3D(#21,$,$);\n"
        "#21=IFCCARTESIANPOINT((0.,0.,0.));\n"
        "#23=IFCDIRECTION((0.,0.,1.));\n"
        "#31=IFCSLAB('s',$,$,$,$,$,#35,$,.FLOOR.);\n"
        "#35=IFCPRODUCTDEFINITIONSHAPE($,$,(#36));\n"
        "#36=IFCSHAPEREPRESENTATION($,'Body','Brep',(#37));\n"
        "#37=IFCFACETEDBREP(#38);\n"
        "#38=IFCCLOSEDSHELL(());\n"
        "ENDSEC;\nEND-ISO-10303-21;\n";
    auto file = step::parse_step(source);
    Transform identity;
    std::string reason;

    SUBCASE("bounding box becomes a centered obb") {
        auto box = geom::obb_from_representation(file.entities.at(1), file, identity, {1.0}, reason);
        REQUIRE(box.has_value());
        CHECK(close(box->center, Vec3{1, 0.5, 1.5}));
        CHECK(close(box->half_extents, Vec3{1, 0.5, 1.5}));
        CHECK(close(box->axes[0], Vec3{1, 0, 0}));
    }

    SUBCASE("rectangle profile extrusion halves all dimensions") {
        auto box =
            geom::obb_from_representation(file.entities.at(11), file, identity, {1.0}, reason);
        REQUIRE(box.has_value());
        CHECK(close(box->half_extents, Vec3{0.3, 0.4, 0.5}));
        CHECK(close(box->center, Vec3{0, 0, 0.5}));
    }

    SUBCASE("faceted brep is unsupported") {
        auto box =
            geom::obb_from_representation(file.entities.at(31), file, identity, {1.0}, reason);
        CHECK_FALSE(box.has_value());
        CHECK(reason == "unsupported representation");
    }
}

TEST_CASE("zero or negative dimensions are errors") {
    std::string source =
        "ISO-10303-21;\nHEADER;\nFILE_SCHEMA(('IFC2X3'));\nENDSEC;\nDATA;\n"
        "#1=IFCWALL('w',$,$,$,$,$,#5,$);\n"
        "#5=IFCPRODUCTDEFINITIONSHAPE($,$,(#6));\n"
        "#6=IFCSHAPEREPRESENTATION($,'Body','BoundingBox',(#7));\n"
        "#7=IFCBOUNDINGBOX(#8,0.,1.,3.);\n"
        "#8=IFCCARTESIANPOINT((0.,0.,0.));\n"
        "ENDSEC;\nEND-ISO-10303-21;\n";
    auto file = step::parse_step(source);
    Transform identity;
    std::string reason;
    CHECK_THROWS_AS(
        geom::obb_from_representation(file.entities.at(1), file, identity, {1.0}, reason),
        std::invalid_argument);
}

TEST_CASE("separation on axis-aligned cubes") {
    CHECK(geom::separation(cube({0, 0, 0}), cube({2, 0, 0})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(geom::separation(cube({0, 0, 0}), cube({0.5, 0, 0})) ==
          doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("rotated cube intersection confirmed by point sampling") {
    Obb a = cube({0, 0, 0});
    double c = std::cos(M_PI / 4), s = std::sin(M_PI / 4);
    Obb b = Obb::make({1.2, 0, 0}, {Vec3{c, s, 0}, Vec3{-s, c, 0}, Vec3{0, 0, 1}},
                      {0.5, 0.5, 0.5});
    double sep = geom::separation(a, b);
    CHECK(sep < 0.0);
    CHECK(geom::intersects(a, b));

    Rng rng(42);
    CHECK(testsupport::mc_intersects(a, b, 1000000, rng));
}

TEST_CASE("intersects and adjacency conventions") {
    CHECK(geom::intersects(cube({0, 0, 0}), cube({0.5, 0, 0})));
    CHECK_FALSE(geom::intersects(cube({0, 0, 0}), cube({2, 0, 0})));
    // touching faces: adjacency, not intersection
    CHECK_FALSE(geom::intersects(cube({0, 0, 0}), cube({1.0, 0, 0})));
    CHECK(geom::adjacent(cube({0, 0, 0}), cube({1.0, 0, 0}), 0.001));
    CHECK_FALSE(geom::adjacent(cube({0, 0, 0}), cube({1.5, 0, 0}), 0.001));
    CHECK(geom::adjacent(cube({0, 0, 0}), cube({1.0005, 0, 0}), 0.001));
}

TEST_CASE("free space construction") {
    Obb anchor = Obb::make({0, 0, 0}, {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}},
                           {0.3, 0.4, 0.5});

    Obb left = geom::make_freespace(anchor, Side::Left, 0.8, 1.0, 2.0);
    CHECK(close(left.center, Vec3{-0.7, 0, 0.5}, 1e-12));
    CHECK(close(left.half_extents, Vec3{0.4, 0.5, 1.0}, 1e-12));

    Obb right = geom::make_freespace(anchor, Side::Right, 0.8, 1.0, 2.0);
    CHECK(close(right.center, Vec3{0.7, 0, 0.5}, 1e-12));

    SUBCASE("rotated anchor rotates the construction") {
        Obb rotated_anchor = Obb::make({0, 0, 0}, {Vec3{0, 1, 0}, Vec3{-1, 0, 0}, Vec3{0, 0, 1}},
                                       {0.3, 0.4, 0.5});
        Obb rotated_left = geom::make_freespace(rotated_anchor, Side::Left, 0.8, 1.0, 2.0);
        // rotate the unrotated expectation by 90 degrees about Z
        Vec3 expected{0.0 * left.center.x - 1.0 * left.center.y,
                      1.0 * left.center.x + 0.0 * left.center.y, left.center.z};
        CHECK(close(rotated_left.center, expected, 1e-12));
    }

    SUBCASE("base is level with the anchor base") {
        CHECK(left.base_z() == doctest::Approx(anchor.base_z()).epsilon(1e-12));
    }

    SUBCASE("left and right are mirror images; neither crosses to the far side") {
        Rng rng(7);
        for (int i = 0; i < 50; ++i) {
            Obb a = testsupport::random_obb(rng);
            Obb l = geom::make_freespace(a, Side::Left, 0.8, 1.0, 2.0);
            Obb r = geom::make_freespace(a, Side::Right, 0.8, 1.0, 2.0);
            // mirror through the facing/vertical plane
            Vec3 dl = l.center - a.center, dr = r.center - a.center;
            CHECK(dl.dot(a.axes[0]) == doctest::Approx(-dr.dot(a.axes[0])).epsilon(1e-9));
            CHECK(dl.dot(a.axes[1]) == doctest::Approx(dr.dot(a.axes[1])).epsilon(1e-9));
            CHECK(dl.dot(a.axes[2]) == doctest::Approx(dr.dot(a.axes[2])).epsilon(1e-9));
            // the left box stays strictly on the left side of the anchor center plane
            double max_lateral = dl.dot(a.axes[0]) + l.half_extents.x;
            CHECK(max_lateral <= -a.half_extents.x + 1e-9);
        }
    }

    CHECK_THROWS_AS(geom::make_freespace(anchor, Side::Left, 0.0, 1.0, 2.0),
                    std::invalid_argument);
}

TEST_CASE("geometry triples") {
    Obb box = cube({0, 0, 0});
    rdf::Iri element = vocab::inst(123);
    auto triples = geom::geometry_triples(element, box);
    CHECK(triples.size() == 16);

    auto again = geom::geometry_triples(element, box);
    REQUIRE(again.size() == triples.size());
    for (std::size_t i = 0; i < triples.size(); ++i) CHECK(again[i] == triples[i]);

    std::size_t zero_literals = 0;
    for (const auto& t : triples)
        if (t.object.is_literal() && t.object.literal().lexical() == "0.000000") ++zero_literals;
    CHECK(zero_literals == 9);  // center (3) + off-diagonal axis entries (6)
}

TEST_CASE("separation symmetry is exact") {
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        Obb a = testsupport::random_obb(rng);
        Obb b = testsupport::random_obb(rng);
        CHECK(geom::separation(a, b) == geom::separation(b, a));
    }
}

TEST_CASE("rigid motion invariance") {
    Rng rng(123);
    for (int i = 0; i < 200; ++i) {
        Obb a = testsupport::random_obb(rng);
        Obb b = testsupport::random_obb(rng);
        geom::Transform t = testsupport::random_rigid_transform(rng);
        double before = geom::separation(a, b);
        double after = geom::separation(testsupport::transformed(t, a),
                                        testsupport::transformed(t, b));
        CHECK(std::abs(before - after) <= 1e-6);
    }
}

TEST_CASE("SAT agrees with point sampling away from the boundary") {
    Rng rng(2026);
    int tested = 0;
    while (tested < 100) {
        Obb a = testsupport::random_obb(rng);
        Obb b = testsupport::random_obb(rng);
        double s = geom::separation(a, b);
        if (std::abs(s) <= 0.002) continue;
        ++tested;
        bool mc = testsupport::mc_intersects(a, b, 100000, rng);
        CHECK_MESSAGE(mc == (s < 0), "separation ", s);
    }
}

TEST_CASE("geometry index from the bathroom fixture") {
    auto file = step::parse_step(read_file(testsupport::fixture_path("bathroom.ifc")));
    std::vector<std::string> warnings;
    auto scale = lift::extract_units(file, warnings);
    rdf::Graph graph;
    std::vector<std::int64_t> instances = {30, 50, 60, 70};
    auto index = geom::build_geometry(file, scale, instances, graph);

    const Obb* wc = index.find(vocab::inst(30));
    REQUIRE(wc != nullptr);
    CHECK(close(wc->center, Vec3{2.0, 2.0, 0.2}, 1e-9));
    CHECK(close(wc->half_extents, Vec3{0.3, 0.4, 0.2}, 1e-9));

    const Obb* slab = index.find(vocab::inst(70));
    REQUIRE(slab != nullptr);
    CHECK(close(slab->center, Vec3{2.0, 2.0, -0.1}, 1e-9));
    CHECK(close(slab->half_extents, Vec3{3.0, 3.0, 0.1}, 1e-9));
    CHECK(slab->top_z() == doctest::Approx(0.0));

    CHECK(graph.count() == 16 * 4);
}
