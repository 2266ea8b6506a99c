#pragma once

#include <array>
#include <cmath>

namespace colobench {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3& v) {
    return {s * v[0], s * v[1], s * v[2]};
}
inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    return {v[0] / n, v[1] / n, v[2] / n};
}

/// Unit quaternion, scalar-last storage (x, y, z, w). Hamilton product
/// convention. Construction renormalizes, so instances are unit-norm by
/// contract; q and -q denote the same rotation and are collapsed by
/// canonicalized() before comparisons.
class Quaternion {
   public:
    Quaternion() = default;

    /// Throws InvalidQuaternion on non-finite components or zero norm.
    Quaternion(double x, double y, double z, double w);

    static Quaternion identity() { return {}; }

    /// Axis is normalized internally; angle in radians.
    static Quaternion from_axis_angle(const Vec3& axis, double angle_rad);

    double x() const { return x_; }
    double y() const { return y_; }
    double z() const { return z_; }
    double w() const { return w_; }

    double norm() const {
        return std::sqrt(x_ * x_ + y_ * y_ + z_ * z_ + w_ * w_);
    }

    Quaternion conjugate() const;

    /// Sign convention for comparisons: w >= 0, and if w == 0 the first
    /// nonzero imaginary component is >= 0.
    Quaternion canonicalized() const;

   private:
    double x_ = 0.0, y_ = 0.0, z_ = 0.0, w_ = 1.0;
};

/// Hamilton product a*b, renormalized.
Quaternion operator*(const Quaternion& a, const Quaternion& b);

/// Apply the rotation to a vector.
Vec3 rotate(const Quaternion& q, const Vec3& v);

/// 3x3 orthonormal matrix, row-major, det +1.
struct RotationMatrix {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    double operator()(int row, int col) const { return m[3 * row + col]; }
    double& operator()(int row, int col) { return m[3 * row + col]; }
    double trace() const { return m[0] + m[4] + m[8]; }
};

RotationMatrix quat_to_matrix(const Quaternion& q);

/// Shepperd's method; result is canonicalized.
Quaternion matrix_to_quat(const RotationMatrix& r);

/// Geodesic rotation angle in [0, 180] degrees, computed as
/// acos(clamp((trace - 1)/2, -1, 1)). Accuracy near 0 degrees is limited
/// to about 1e-6 deg by the flatness of acos there.
double rotation_angle_deg(const Quaternion& q);

/// Rigid transform: x_world = R * x_local + t. Translation in centimeters.
struct Pose {
    Vec3 translation{0, 0, 0};
    Quaternion rotation;

    static Pose identity() { return {}; }
};

/// a followed-by b: rotation Ra*Rb, translation Ra*t_b + t_a.
Pose compose(const Pose& a, const Pose& b);

/// compose(p, inverse(p)) == identity.
Pose inverse(const Pose& p);

}  // namespace colobench
