#pragma once

#include <Eigen/Dense>

namespace uam {

using Vec3 = Eigen::Vector3d;

/// Homogeneous 4x4 rigid transform. The rotation block is orthonormal with
/// determinant +1 and the bottom row is (0, 0, 0, 1).
class RigidTransform {
public:
    RigidTransform() : m_(Eigen::Matrix4d::Identity()) {}

    /// Throws InvalidInput unless m is rigid within 1e-9.
    static RigidTransform from_matrix(const Eigen::Matrix4d& m);

    static RigidTransform identity() { return {}; }
    static RigidTransform translation(double x, double y, double z);
    static RigidTransform translation(const Vec3& t) { return translation(t.x(), t.y(), t.z()); }
    static RigidTransform rotation_x(double angle);
    static RigidTransform rotation_y(double angle);
    static RigidTransform rotation_z(double angle);
    static RigidTransform from_rotation_translation(const Eigen::Matrix3d& r, const Vec3& t);

    const Eigen::Matrix4d& matrix() const noexcept { return m_; }
    Eigen::Matrix3d rotation() const { return m_.topLeftCorner<3, 3>(); }
    Vec3 translation() const { return m_.topRightCorner<3, 1>(); }

    Vec3 apply(const Vec3& p) const { return rotation() * p + translation(); }
    Vec3 apply_direction(const Vec3& d) const { return rotation() * d; }
    RigidTransform inverse() const;

    friend RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
        RigidTransform out;
        out.m_ = a.m_ * b.m_;
        return out;
    }

private:
    Eigen::Matrix4d m_;
};

bool is_rigid(const Eigen::Matrix4d& m, double tolerance = 1e-9);

}  // namespace uam
