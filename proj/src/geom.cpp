#include "regcheck/geom.hpp"

#include "regcheck/util.hpp"
#include "regcheck/vocab.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace regcheck::geom {

using step::StepEntity;
using step::StepFile;
using step::StepValue;

namespace {
constexpr double kAxisTol = 1e-9;
}

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Vec3 Vec3::normalized() const {
    double n = norm();
    if (n < kAxisTol) throw std::domain_error("cannot normalize near-zero vector");
    return {x / n, y / n, z / n};
}

Mat3 Mat3::rotation_z(double radians) {
    double c = std::cos(radians), s = std::sin(radians);
    Mat3 m;
    m.col[0] = {c, s, 0};
    m.col[1] = {-s, c, 0};
    m.col[2] = {0, 0, 1};
    return m;
}

Obb Obb::make(Vec3 center, std::array<Vec3, 3> axes, Vec3 half_extents) {
    for (int i = 0; i < 3; ++i) {
        if (std::abs(axes[i].norm() - 1.0) > kAxisTol * 10)
            throw std::invalid_argument("OBB axis is not unit length");
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(axes[i].dot(axes[j])) > 1e-7)
                throw std::invalid_argument("OBB axes are not orthogonal");
    }
    if (half_extents.x <= 0 || half_extents.y <= 0 || half_extents.z <= 0)
        throw std::invalid_argument("OBB half extents must be positive");
    return Obb{center, axes, half_extents};
}

double Obb::top_z() const {
    double r = std::abs(axes[0].z) * half_extents.x + std::abs(axes[1].z) * half_extents.y +
               std::abs(axes[2].z) * half_extents.z;
    return center.z + r;
}

double Obb::base_z() const {
    double r = std::abs(axes[0].z) * half_extents.x + std::abs(axes[1].z) * half_extents.y +
               std::abs(axes[2].z) * half_extents.z;
    return center.z - r;
}

Transform compose_placements(std::span<const AxisPlacement> chain, const lift::UnitScale& scale) {
    Transform world;  // identity
    std::size_t index = 0;
    for (const auto& placement : chain) {
        Vec3 z{0, 0, 1}, x_hint{1, 0, 0};
        if (placement.axis) {
            if (placement.axis->norm() < kAxisTol)
                throw std::domain_error("placement " + std::to_string(index) +
                                        ": degenerate axis direction");
            z = placement.axis->normalized();
        }
        if (placement.ref_direction) {
            if (placement.ref_direction->norm() < kAxisTol)
                throw std::domain_error("placement " + std::to_string(index) +
                                        ": degenerate ref direction");
            x_hint = *placement.ref_direction;
        }
        // Gram-Schmidt: project the X hint off Z
        Vec3 x = x_hint - z * z.dot(x_hint);
        if (x.norm() < kAxisTol)
            throw std::domain_error("placement " + std::to_string(index) +
                                    ": ref direction parallel to axis");
        x = x.normalized();
        Vec3 y = z.cross(x);

        Transform local;
        local.rotation.col = {x, y, z};
        local.translation = placement.location * scale.length_to_meters;
        world = local.after(world);
        ++index;
    }
    return world;
}

double separation(const Obb& a, const Obb& b) {
    const Vec3 d = b.center - a.center;
    const double ae[3] = {a.half_extents.x, a.half_extents.y, a.half_extents.z};
    const double be[3] = {b.half_extents.x, b.half_extents.y, b.half_extents.z};

    double best = -std::numeric_limits<double>::infinity();
    auto consider = [&](Vec3 axis) {
        double n = axis.norm();
        if (n < kAxisTol) return;  // degenerate cross product
        axis = axis * (1.0 / n);
        double span_a = 0, span_b = 0;
        for (int i = 0; i < 3; ++i) {
            span_a += ae[i] * std::abs(a.axes[i].dot(axis));
            span_b += be[i] * std::abs(b.axes[i].dot(axis));
        }
        double s = std::abs(d.dot(axis)) - span_a - span_b;
        if (s > best) best = s;
    };

    for (int i = 0; i < 3; ++i) consider(a.axes[i]);
    for (int j = 0; j < 3; ++j) consider(b.axes[j]);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) consider(a.axes[i].cross(b.axes[j]));
    return best;
}

bool intersects(const Obb& a, const Obb& b) { return separation(a, b) < 0.0; }

bool adjacent(const Obb& a, const Obb& b, double eps) {
    return std::abs(separation(a, b)) <= eps;
}

Obb make_freespace(const Obb& anchor, Side side, double width, double depth, double height) {
    if (width <= 0 || depth <= 0 || height <= 0)
        throw std::invalid_argument("free space dimensions must be positive");
    const Vec3& lateral = anchor.axes[0];
    const Vec3& vertical = anchor.axes[2];
    double sign = side == Side::Left ? -1.0 : 1.0;
    Vec3 center = anchor.center + lateral * (sign * (anchor.half_extents.x + width / 2.0)) +
                  vertical * (height / 2.0 - anchor.half_extents.z);
    return Obb::make(center, anchor.axes, {width / 2.0, depth / 2.0, height / 2.0});
}

std::vector<rdf::Triple> geometry_triples(rdf::Iri element, const Obb& box) {
    using rdf::Literal;
    using rdf::Term;
    Term bnode = Term::blank(element.id());
    std::vector<rdf::Triple> out;
    out.reserve(16);
    out.emplace_back(Term(element), vocab::geo("hasObb"), bnode);
    auto num = [&](const char* local, double v) {
        out.emplace_back(bnode, vocab::geo(local), Term(Literal::decimal_lexical(format_fixed6(v))));
    };
    num("centerX", box.center.x);
    num("centerY", box.center.y);
    num("centerZ", box.center.z);
    const char* axis_names[3][3] = {{"axis0X", "axis0Y", "axis0Z"},
                                    {"axis1X", "axis1Y", "axis1Z"},
                                    {"axis2X", "axis2Y", "axis2Z"}};
    for (int i = 0; i < 3; ++i) {
        num(axis_names[i][0], box.axes[i].x);
        num(axis_names[i][1], box.axes[i].y);
        num(axis_names[i][2], box.axes[i].z);
    }
    num("halfExtentX", box.half_extents.x);
    num("halfExtentY", box.half_extents.y);
    num("halfExtentZ", box.half_extents.z);
    return out;
}

const Obb* GeomIndex::find(const rdf::Iri& element) const {
    auto it = boxes.find(element.text());
    return it == boxes.end() ? nullptr : &it->second;
}

namespace {

const StepEntity* deref(const StepFile& file, const StepValue& v) {
    if (!v.is(StepValue::Kind::Ref)) return nullptr;
    auto it = file.entities.find(v.integer);
    return it == file.entities.end() ? nullptr : &it->second;
}

std::optional<Vec3> read_point(const StepFile& file, const StepValue& ref) {
    const StepEntity* e = deref(file, ref);
    if (!e || e->args.empty() || !e->args[0].is(StepValue::Kind::List)) return std::nullopt;
    const auto& coords = e->args[0].items;
    Vec3 p;
    double* slots[3] = {&p.x, &p.y, &p.z};
    for (std::size_t i = 0; i < coords.size() && i < 3; ++i) {
        if (coords[i].is(StepValue::Kind::Real)) *slots[i] = coords[i].real;
        else if (coords[i].is(StepValue::Kind::Integer)) *slots[i] = static_cast<double>(coords[i].integer);
        else return std::nullopt;
    }
    return p;
}

std::optional<AxisPlacement> read_axis2placement(const StepFile& file, const StepValue& ref) {
    const StepEntity* e = deref(file, ref);
    if (!e) return std::nullopt;
    AxisPlacement p;
    if (e->args.empty()) return std::nullopt;
    auto loc = read_point(file, e->args[0]);
    if (!loc) return std::nullopt;
    p.location = *loc;
    if (e->name == "IFCAXIS2PLACEMENT3D") {
        if (e->args.size() > 1 && e->args[1].is(StepValue::Kind::Ref))
            p.axis = read_point(file, e->args[1]);
        if (e->args.size() > 2 && e->args[2].is(StepValue::Kind::Ref))
            p.ref_direction = read_point(file, e->args[2]);
    } else if (e->name == "IFCAXIS2PLACEMENT2D") {
        if (e->args.size() > 1 && e->args[1].is(StepValue::Kind::Ref))
            p.ref_direction = read_point(file, e->args[1]);
    }
    return p;
}

}  // namespace

Transform world_placement(const StepEntity& entity, const StepFile& file,
                          const lift::UnitScale& scale) {
    std::vector<AxisPlacement> chain;
    const StepEntity* placement =
        entity.args.size() > 5 ? deref(file, entity.args[5]) : nullptr;
    while (placement && placement->name == "IFCLOCALPLACEMENT") {
        if (placement->args.size() >= 2) {
            if (auto ap = read_axis2placement(file, placement->args[1]))
                chain.push_back(*ap);
        }
        placement = placement->args.empty() ? nullptr : deref(file, placement->args[0]);
    }
    return compose_placements(chain, scale);
}

namespace {

double dim_value(const StepValue& v) {
    if (v.is(StepValue::Kind::Real)) return v.real;
    if (v.is(StepValue::Kind::Integer)) return static_cast<double>(v.integer);
    throw std::invalid_argument("expected a numeric dimension");
}

std::optional<Obb> box_from_item(const StepEntity& item, const StepFile& file,
                                 const Transform& world, double k, std::string& reason) {
    if (item.name == "IFCBOUNDINGBOX") {
        if (item.args.size() < 4) { reason = "malformed bounding box"; return std::nullopt; }
        auto corner = read_point(file, item.args[0]);
        if (!corner) { reason = "bounding box corner unresolved"; return std::nullopt; }
        double dx = dim_value(item.args[1]), dy = dim_value(item.args[2]), dz = dim_value(item.args[3]);
        if (dx <= 0 || dy <= 0 || dz <= 0)
            throw std::invalid_argument("#" + std::to_string(item.id) +
                                        ": bounding box dimensions must be positive");
        Vec3 local_center = (*corner + Vec3{dx / 2, dy / 2, dz / 2}) * k;
        return Obb::make(world.apply(local_center), world.rotation.col,
                         Vec3{dx / 2 * k, dy / 2 * k, dz / 2 * k});
    }
    if (item.name == "IFCEXTRUDEDAREASOLID") {
        if (item.args.size() < 4) { reason = "malformed extruded solid"; return std::nullopt; }
        const StepEntity* profile = deref(file, item.args[0]);
        if (!profile || profile->name != "IFCRECTANGLEPROFILEDEF") {
            reason = "unsupported profile";
            return std::nullopt;
        }
        if (profile->args.size() < 5) { reason = "malformed profile"; return std::nullopt; }
        double px = dim_value(profile->args[3]), py = dim_value(profile->args[4]);
        double depth = dim_value(item.args[3]);
        if (px <= 0 || py <= 0 || depth <= 0)
            throw std::invalid_argument("#" + std::to_string(item.id) +
                                        ": extrusion dimensions must be positive");

        auto dir_pt = read_point(file, item.args[2]);
        if (!dir_pt) { reason = "extrusion direction unresolved"; return std::nullopt; }
        Vec3 dir = dir_pt->normalized();
        if (std::abs(std::abs(dir.z) - 1.0) > 1e-6) {
            reason = "non-axial extrusion direction";
            return std::nullopt;
        }
        double dz = dir.z > 0 ? depth : -depth;

        // profile placement within the extrusion plane
        Transform profile_tf;
        if (profile->args[2].is(StepValue::Kind::Ref)) {
            if (auto p2 = read_axis2placement(file, profile->args[2])) {
                if (p2->ref_direction) {
                    Vec3 rd = p2->ref_direction->normalized();
                    profile_tf.rotation = Mat3::rotation_z(std::atan2(rd.y, rd.x));
                }
                profile_tf.translation = p2->location;
            }
        }
        // solid position frame
        Transform solid_tf;
        if (item.args[1].is(StepValue::Kind::Ref)) {
            if (auto p3 = read_axis2placement(file, item.args[1])) {
                AxisPlacement only[1] = {*p3};
                solid_tf = compose_placements(std::span<const AxisPlacement>(only, 1), {1.0});
            }
        }
        Vec3 local_center = profile_tf.apply(Vec3{0, 0, 0}) + Vec3{0, 0, dz / 2};
        std::array<Vec3, 3> axes = (world.rotation * solid_tf.rotation * profile_tf.rotation).col;
        Vec3 center = world.apply(solid_tf.apply(local_center) * k);
        return Obb::make(center, axes, Vec3{px / 2 * k, py / 2 * k, depth / 2 * k});
    }
    reason = "unsupported representation";
    return std::nullopt;
}

}  // namespace

std::optional<Obb> obb_from_representation(const StepEntity& entity, const StepFile& file,
                                           const Transform& world, const lift::UnitScale& scale,
                                           std::string& reason) {
    const StepEntity* shape = entity.args.size() > 6 ? deref(file, entity.args[6]) : nullptr;
    if (!shape) { reason = "no representation"; return std::nullopt; }
    if (shape->name != "IFCPRODUCTDEFINITIONSHAPE" || shape->args.size() < 3 ||
        !shape->args[2].is(StepValue::Kind::List)) {
        reason = "unsupported representation";
        return std::nullopt;
    }
    reason = "no supported representation item";
    for (const auto& rep_ref : shape->args[2].items) {
        const StepEntity* rep = deref(file, rep_ref);
        if (!rep || rep->name != "IFCSHAPEREPRESENTATION" || rep->args.size() < 4 ||
            !rep->args[3].is(StepValue::Kind::List))
            continue;
        for (const auto& item_ref : rep->args[3].items) {
            const StepEntity* item = deref(file, item_ref);
            if (!item) continue;
            std::string item_reason;
            if (auto box = box_from_item(*item, file, world, scale.length_to_meters, item_reason))
                return box;
            reason = item_reason;
        }
    }
    return std::nullopt;
}

GeomIndex build_geometry(const StepFile& file, const lift::UnitScale& scale,
                         std::span<const std::int64_t> instances, rdf::Graph& graph) {
    GeomIndex index;
    for (auto id : instances) {
        auto it = file.entities.find(id);
        if (it == file.entities.end()) continue;
        const StepEntity& entity = it->second;
        rdf::Iri element = vocab::inst(id);
        if (entity.args.size() <= 6 || !entity.args[6].is(StepValue::Kind::Ref)) {
            if (entity.args.size() > 5 && entity.args[5].is(StepValue::Kind::Ref))
                index.missing.emplace_back(element.text(), "no representation");
            continue;  // non-product entities are simply not geometric
        }
        Transform world = world_placement(entity, file, scale);
        std::string reason;
        auto box = obb_from_representation(entity, file, world, scale, reason);
        if (!box) {
            index.missing.emplace_back(element.text(), reason);
            continue;
        }
        index.boxes.emplace(element.text(), *box);
        for (const auto& t : geometry_triples(element, *box)) graph.insert(t);
    }
    return index;
}

}  // namespace regcheck::geom
