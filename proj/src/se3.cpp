#include "colobench/se3.hpp"

#include <algorithm>
#include <cmath>

#include "colobench/errors.hpp"

namespace colobench {

namespace {
constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;
}

Quaternion::Quaternion(double x, double y, double z, double w)
    : x_(x), y_(y), z_(z), w_(w) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z) ||
        !std::isfinite(w)) {
        throw InvalidQuaternion("quaternion has non-finite components");
    }
    const double n = norm();
    if (n == 0.0) {
        throw InvalidQuaternion("quaternion has zero norm");
    }
    x_ /= n;
    y_ /= n;
    z_ /= n;
    w_ /= n;
}

Quaternion Quaternion::from_axis_angle(const Vec3& axis, double angle_rad) {
    const Vec3 a = normalized(axis);
    const double h = 0.5 * angle_rad;
    const double s = std::sin(h);
    return {a[0] * s, a[1] * s, a[2] * s, std::cos(h)};
}

Quaternion Quaternion::conjugate() const {
    Quaternion q;
    q.x_ = -x_;
    q.y_ = -y_;
    q.z_ = -z_;
    q.w_ = w_;
    return q;
}

Quaternion Quaternion::canonicalized() const {
    bool flip = false;
    if (w_ < 0.0) {
        flip = true;
    } else if (w_ == 0.0) {
        if (x_ != 0.0) {
            flip = x_ < 0.0;
        } else if (y_ != 0.0) {
            flip = y_ < 0.0;
        } else {
            flip = z_ < 0.0;
        }
    }
    Quaternion q = *this;
    if (flip) {
        q.x_ = -q.x_;
        q.y_ = -q.y_;
        q.z_ = -q.z_;
        q.w_ = -q.w_;
    }
    return q;
}

Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w() * b.x() + a.x() * b.w() + a.y() * b.z() - a.z() * b.y(),
            a.w() * b.y() - a.x() * b.z() + a.y() * b.w() + a.z() * b.x(),
            a.w() * b.z() + a.x() * b.y() - a.y() * b.x() + a.z() * b.w(),
            a.w() * b.w() - a.x() * b.x() - a.y() * b.y() - a.z() * b.z()};
}

Vec3 rotate(const Quaternion& q, const Vec3& v) {
    const Vec3 u{q.x(), q.y(), q.z()};
    const Vec3 uv = cross(u, v);
    const Vec3 uuv = cross(u, uv);
    return v + 2.0 * q.w() * uv + 2.0 * uuv;
}

RotationMatrix quat_to_matrix(const Quaternion& q) {
    const double x = q.x(), y = q.y(), z = q.z(), w = q.w();
    RotationMatrix r;
    r.m = {1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
           2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
           2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)};
    return r;
}

Quaternion matrix_to_quat(const RotationMatrix& r) {
    const double t = r.trace();
    double x, y, z, w;
    if (t > 0.0) {
        const double s = std::sqrt(t + 1.0) * 2.0;
        w = 0.25 * s;
        x = (r(2, 1) - r(1, 2)) / s;
        y = (r(0, 2) - r(2, 0)) / s;
        z = (r(1, 0) - r(0, 1)) / s;
    } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
        const double s = std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2)) * 2.0;
        w = (r(2, 1) - r(1, 2)) / s;
        x = 0.25 * s;
        y = (r(0, 1) + r(1, 0)) / s;
        z = (r(0, 2) + r(2, 0)) / s;
    } else if (r(1, 1) > r(2, 2)) {
        const double s = std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2)) * 2.0;
        w = (r(0, 2) - r(2, 0)) / s;
        x = (r(0, 1) + r(1, 0)) / s;
        y = 0.25 * s;
        z = (r(1, 2) + r(2, 1)) / s;
    } else {
        const double s = std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1)) * 2.0;
        w = (r(1, 0) - r(0, 1)) / s;
        x = (r(0, 2) + r(2, 0)) / s;
        y = (r(1, 2) + r(2, 1)) / s;
        z = 0.25 * s;
    }
    return Quaternion(x, y, z, w).canonicalized();
}

double rotation_angle_deg(const Quaternion& q) {
    const double tr = quat_to_matrix(q).trace();
    const double c = std::clamp((tr - 1.0) / 2.0, -1.0, 1.0);
    return std::acos(c) * kRadToDeg;
}

Pose compose(const Pose& a, const Pose& b) {
    Pose out;
    out.rotation = a.rotation * b.rotation;
    out.translation = rotate(a.rotation, b.translation) + a.translation;
    return out;
}

Pose inverse(const Pose& p) {
    Pose out;
    out.rotation = p.rotation.conjugate();
    const Vec3 t = rotate(out.rotation, p.translation);
    out.translation = {-t[0], -t[1], -t[2]};
    return out;
}

}  // namespace colobench
