#pragma once

#include "regcheck/graph.hpp"
#include "regcheck/lift.hpp"
#include "regcheck/step.hpp"

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace regcheck::geom {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const;
    Vec3 normalized() const;  // throws on near-zero norm
};

// Column-major 3x3 rotation.
struct Mat3 {
    std::array<Vec3, 3> col{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};

    Vec3 operator*(const Vec3& v) const {
        return col[0] * v.x + col[1] * v.y + col[2] * v.z;
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i) r.col[i] = (*this) * o.col[i];
        return r;
    }
    static Mat3 rotation_z(double radians);
};

struct Transform {
    Mat3 rotation;
    Vec3 translation;

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
    // this-after-inner composition: result(p) = this(inner(p))
    Transform after(const Transform& inner) const {
        return {rotation * inner.rotation, rotation * inner.translation + translation};
    }
};

// Oriented bounding box: center, orthonormal axes, positive half extents,
// all in meters. Construction validates orthonormality to 1e-9.
struct Obb {
    Vec3 center;
    std::array<Vec3, 3> axes{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    Vec3 half_extents{1, 1, 1};

    static Obb make(Vec3 center, std::array<Vec3, 3> axes, Vec3 half_extents);

    // Extreme world-Z of the box surface.
    double top_z() const;
    double base_z() const;
};

enum class Side { Left, Right };

// One IFC axis placement: location plus optional local Z (axis) and local
// X (ref direction). Lengths are in source units; scaling to meters
// happens during composition.
struct AxisPlacement {
    Vec3 location;
    std::optional<Vec3> axis;
    std::optional<Vec3> ref_direction;
};

// Chain ordered from the element outward to world. Near-orthogonal inputs
// are re-orthonormalized; zero-length directions throw.
Transform compose_placements(std::span<const AxisPlacement> chain, const lift::UnitScale& scale);

// Signed separation over the 15 SAT axes: negative overlap depth,
// positive clearance, zero touching.
double separation(const Obb& a, const Obb& b);

bool intersects(const Obb& a, const Obb& b);

// Touching or within eps of touching (slight overlap included).
bool adjacent(const Obb& a, const Obb& b, double eps = 0.001);

// Clearance box flush against the anchor's left (-lateral) or right
// (+lateral) face, base level with the anchor's base, sharing its axes.
Obb make_freespace(const Obb& anchor, Side side, double width, double depth, double height);

// 16 triples: (element, geo:hasObb, bnode) plus center, axes and half
// extents on the bnode, numbers rendered with 6 decimal places.
std::vector<rdf::Triple> geometry_triples(rdf::Iri element, const Obb& box);

struct GeomIndex {
    std::map<std::string, Obb> boxes;  // element IRI text -> box
    std::vector<std::pair<std::string, std::string>> missing;  // (IRI text, reason)

    const Obb* find(const rdf::Iri& element) const;
};

// Box from the entity's product representation (IFCBOUNDINGBOX or
// IFCEXTRUDEDAREASOLID over a rectangle profile), carried to world space.
// Unsupported representations yield nullopt with a reason.
std::optional<Obb> obb_from_representation(const step::StepEntity& entity,
                                           const step::StepFile& file, const Transform& world,
                                           const lift::UnitScale& scale, std::string& reason);

// Resolves an entity's placement chain to a world transform.
Transform world_placement(const step::StepEntity& entity, const step::StepFile& file,
                          const lift::UnitScale& scale);

// Builds boxes for the given instance ids and appends their geometry
// triples to the graph.
GeomIndex build_geometry(const step::StepFile& file, const lift::UnitScale& scale,
                         std::span<const std::int64_t> instances, rdf::Graph& graph);

}  // namespace regcheck::geom
