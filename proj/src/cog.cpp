#include "uam/cog.hpp"

#include <algorithm>
#include <cmath>

#include "uam/error.hpp"

namespace uam {

void validate(const MassModel& model) {
    for (int i = 0; i < 3; ++i) {
        const double m = model.link_masses[i];
        if (!std::isfinite(m) || m < 0.0 || (i < 2 && m == 0.0)) {
            throw InvalidInput("link masses must be positive (payload may be zero)");
        }
        if (!model.link_cogs[i].allFinite()) throw InvalidInput("link CoG offsets must be finite");
    }
    if (!(model.battery_mass > 0.0) || !std::isfinite(model.battery_mass)) {
        throw InvalidInput("battery mass must be positive");
    }
}

MassModel default_mass_model(const ArmGeometry& geom, double arm_mass, double battery_mass) {
    MassModel m;
    m.link_masses = {0.5 * arm_mass, 0.5 * arm_mass, 0.0};
    m.link_cogs = {Vec3(-0.5 * geom.l1, 0, 0), Vec3(-0.5 * geom.l2, 0, 0), Vec3(0, 0, 0)};
    m.battery_mass = battery_mass;
    return m;
}

RigidTransform fixed_arm_to_body(Point2 mount) {
    return RigidTransform::translation(mount.x, 0.0, -mount.y) * RigidTransform::rotation_x(-kPi / 2);
}

std::array<RigidTransform, 3> link_transforms(const ArmGeometry& geom, const JointState& q) {
    const RigidTransform t1 = RigidTransform::rotation_z(q.theta1) * RigidTransform::translation(geom.l1, 0, 0);
    const RigidTransform t2 = t1 * RigidTransform::rotation_z(q.theta2) * RigidTransform::translation(geom.l2, 0, 0);
    const RigidTransform t3 = t2 * RigidTransform::rotation_x(q.theta3);
    return {t1, t2, t3};
}

Vec3 link_cog_in_body(const RigidTransform& t0b, const RigidTransform& ti0, const Vec3& cog_link) {
    if (!is_rigid(t0b.matrix()) || !is_rigid(ti0.matrix())) throw InvalidInput("non-rigid transform");
    const Eigen::Vector4d h = t0b.matrix() * ti0.matrix() * cog_link.homogeneous();
    return h.head<3>();
}

std::array<Vec3, 3> body_cogs(const ArmGeometry& geom, const MassModel& model, const JointState& q,
                              const RigidTransform& t0b) {
    const auto links = link_transforms(geom, q);
    std::array<Vec3, 3> out;
    for (int i = 0; i < 3; ++i) out[i] = link_cog_in_body(t0b, links[i], model.link_cogs[i]);
    return out;
}

double battery_position(const MassModel& model, const std::array<Vec3, 3>& body_cogs) {
    validate(model);
    double moment = 0.0;
    for (int i = 0; i < 3; ++i) moment += model.link_masses[i] * body_cogs[i].x();
    return moment / model.battery_mass;
}

double net_x_moment(const MassModel& model, const std::array<Vec3, 3>& body_cogs, double p_b) {
    double moment = 0.0;
    for (int i = 0; i < 3; ++i) moment += model.link_masses[i] * body_cogs[i].x();
    return moment - model.battery_mass * p_b;
}

SliderCommand clamp_slider(double p_b, double p_max) {
    if (!(p_max >= 0.0)) throw InvalidInput("slider range must be non-negative");
    const double c = std::clamp(p_b, -p_max, p_max);
    return {c, c != p_b};
}

double max_compensation_speed(double slider_speed, const ArmGeometry& geom, const MassModel& model,
                              const JointState& q, int joint, const RigidTransform& t0b) {
    if (!(slider_speed > 0.0)) throw InvalidInput("slider speed must be positive");
    if (joint < 0 || joint > 2) throw InvalidInput("joint index must be 0, 1 or 2");
    JointState lo = q, hi = q;
    lo[joint] -= kCompensationStep;
    hi[joint] += kCompensationStep;
    const double p_lo = battery_position(model, body_cogs(geom, model, lo, t0b));
    const double p_hi = battery_position(model, body_cogs(geom, model, hi, t0b));
    const double sensitivity = std::abs(p_hi - p_lo) / (2.0 * kCompensationStep);
    return slider_speed / std::max(sensitivity, kCompensationFloor);
}

}  // namespace uam
