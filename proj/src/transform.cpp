#include "uam/transform.hpp"

#include <cmath>

#include "uam/error.hpp"

namespace uam {

bool is_rigid(const Eigen::Matrix4d& m, double tolerance) {
    if (!m.allFinite()) return false;
    const Eigen::Matrix3d r = m.topLeftCorner<3, 3>();
    if ((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tolerance) return false;
    if (std::abs(r.determinant() - 1.0) > tolerance) return false;
    return (m.row(3) - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() <= tolerance;
}

RigidTransform RigidTransform::from_matrix(const Eigen::Matrix4d& m) {
    if (!is_rigid(m)) throw InvalidInput("matrix is not a rigid transform");
    RigidTransform t;
    t.m_ = m;
    return t;
}

RigidTransform RigidTransform::translation(double x, double y, double z) {
    RigidTransform t;
    t.m_(0, 3) = x;
    t.m_(1, 3) = y;
    t.m_(2, 3) = z;
    return t;
}

RigidTransform RigidTransform::rotation_x(double angle) {
    RigidTransform t;
    t.m_.topLeftCorner<3, 3>() = Eigen::AngleAxisd(angle, Vec3::UnitX()).toRotationMatrix();
    return t;
}

RigidTransform RigidTransform::rotation_y(double angle) {
    RigidTransform t;
    t.m_.topLeftCorner<3, 3>() = Eigen::AngleAxisd(angle, Vec3::UnitY()).toRotationMatrix();
    return t;
}

RigidTransform RigidTransform::rotation_z(double angle) {
    RigidTransform t;
    t.m_.topLeftCorner<3, 3>() = Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix();
    return t;
}

RigidTransform RigidTransform::from_rotation_translation(const Eigen::Matrix3d& r, const Vec3& t) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = r;
    m.topRightCorner<3, 1>() = t;
    return from_matrix(m);
}

RigidTransform RigidTransform::inverse() const {
    RigidTransform t;
    const Eigen::Matrix3d rt = rotation().transpose();
    t.m_.topLeftCorner<3, 3>() = rt;
    t.m_.topRightCorner<3, 1>() = -rt * translation();
    return t;
}

}  // namespace uam
