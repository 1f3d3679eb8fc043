#include "support/geom_oracle.hpp"

#include <cmath>

namespace regcheck::testsupport {

using geom::Mat3;
using geom::Obb;
using geom::Transform;
using geom::Vec3;

std::uint64_t Rng::next_u64() {
    // splitmix64
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

Vec3 random_unit_vector(Rng& rng) {
    while (true) {
        Vec3 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        double n = v.norm();
        if (n > 1e-3 && n <= 1.0) return v * (1.0 / n);
    }
}

Mat3 random_rotation(Rng& rng) {
    // Rodrigues' formula around a random axis
    Vec3 k = random_unit_vector(rng);
    double angle = rng.uniform(0, 2 * M_PI);
    double c = std::cos(angle), s = std::sin(angle);
    Mat3 r;
    auto col = [&](const Vec3& v) {
        return v * c + k.cross(v) * s + k * (k.dot(v) * (1 - c));
    };
    r.col[0] = col(Vec3{1, 0, 0});
    r.col[1] = col(Vec3{0, 1, 0});
    r.col[2] = col(Vec3{0, 0, 1});
    return r;
}

Obb random_obb(Rng& rng) {
    Mat3 rot = random_rotation(rng);
    Vec3 center{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    Vec3 half{rng.uniform(0.05, 1.5), rng.uniform(0.05, 1.5), rng.uniform(0.05, 1.5)};
    return Obb::make(center, rot.col, half);
}

Transform random_rigid_transform(Rng& rng) {
    Transform t;
    t.rotation = random_rotation(rng);
    t.translation = Vec3{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    return t;
}

Obb transformed(const Transform& t, const Obb& box) {
    Obb out;
    out.center = t.apply(box.center);
    for (int i = 0; i < 3; ++i) out.axes[i] = t.rotation * box.axes[i];
    out.half_extents = box.half_extents;
    return out;
}

bool point_in_obb(const Vec3& p, const Obb& box) {
    Vec3 d = p - box.center;
    const double h[3] = {box.half_extents.x, box.half_extents.y, box.half_extents.z};
    for (int i = 0; i < 3; ++i)
        if (std::abs(d.dot(box.axes[i])) > h[i]) return false;
    return true;
}

namespace {

Vec3 random_point_in(const Obb& box, Rng& rng) {
    double u = rng.uniform(-1, 1), v = rng.uniform(-1, 1), w = rng.uniform(-1, 1);
    return box.center + box.axes[0] * (u * box.half_extents.x) +
           box.axes[1] * (v * box.half_extents.y) + box.axes[2] * (w * box.half_extents.z);
}

}  // namespace

bool mc_intersects(const Obb& a, const Obb& b, int samples, Rng& rng) {
    int half = samples / 2;
    for (int i = 0; i < half; ++i)
        if (point_in_obb(random_point_in(a, rng), b)) return true;
    for (int i = 0; i < samples - half; ++i)
        if (point_in_obb(random_point_in(b, rng), a)) return true;
    return false;
}

Mat4 Mat4::identity() {
    Mat4 r;
    for (int i = 0; i < 4; ++i) r.m[i][i] = 1.0;
    return r;
}

Mat4 Mat4::from(const Transform& t) {
    Mat4 r = identity();
    const Vec3* cols[3] = {&t.rotation.col[0], &t.rotation.col[1], &t.rotation.col[2]};
    for (int c = 0; c < 3; ++c) {
        r.m[0][c] = cols[c]->x;
        r.m[1][c] = cols[c]->y;
        r.m[2][c] = cols[c]->z;
    }
    r.m[0][3] = t.translation.x;
    r.m[1][3] = t.translation.y;
    r.m[2][3] = t.translation.z;
    return r;
}

Mat4 Mat4::operator*(const Mat4& o) const {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double sum = 0;
            for (int k = 0; k < 4; ++k) sum += m[i][k] * o.m[k][j];
            r.m[i][j] = sum;
        }
    return r;
}

Vec3 Mat4::apply(const Vec3& p) const {
    double v[4] = {p.x, p.y, p.z, 1.0};
    double out[4] = {0, 0, 0, 0};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) out[i] += m[i][k] * v[k];
    return {out[0], out[1], out[2]};
}

}  // namespace regcheck::testsupport
