#include "uam/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "uam/error.hpp"

namespace uam {

void validate(const ArmGeometry& geom) {
    if (!(geom.l1 > 0.0) || !(geom.l2 > 0.0) || !std::isfinite(geom.l1) || !std::isfinite(geom.l2)) {
        throw InvalidInput("arm link lengths must be positive");
    }
    for (const JointLimits& lim : geom.limits) {
        if (!(lim.min <= lim.max)) throw InvalidInput("joint limit min exceeds max");
    }
    if (geom.limits[1].min < 0.0 || geom.limits[1].max > kPi) {
        throw InvalidInput("theta2 limits must lie within [0, pi]");
    }
}

ArmPose forward(const ArmGeometry& geom, const JointState& q) {
    const double a = q.theta1 + q.theta2;
    return {geom.l1 * std::cos(q.theta1) + geom.l2 * std::cos(a),
            geom.l1 * std::sin(q.theta1) + geom.l2 * std::sin(a), q.theta3};
}

bool within_limits(const ArmGeometry& geom, const JointState& q) {
    for (int i = 0; i < 3; ++i) {
        if (q[i] < geom.limits[i].min || q[i] > geom.limits[i].max) return false;
    }
    return true;
}

namespace {

constexpr double kReachSlack = 1e-12;

double wrap_pi(double a) {
    a = std::remainder(a, 2.0 * kPi);
    return a <= -kPi ? a + 2.0 * kPi : a;
}

}  // namespace

JointState inverse(const ArmGeometry& geom, Point2 target, double wrist) {
    validate(geom);
    if (!std::isfinite(target.x) || !std::isfinite(target.y) || !std::isfinite(wrist)) {
        throw InvalidInput("IK target must be finite");
    }
    const double r2 = target.x * target.x + target.y * target.y;
    const double r = std::sqrt(r2);
    const double reach = geom.l1 + geom.l2;
    const double inner = std::abs(geom.l1 - geom.l2);
    if (r > reach * (1.0 + kReachSlack) || r < inner - reach * kReachSlack) {
        throw OutOfWorkspace("target out of workspace");
    }
    if (r == 0.0) throw InvalidInput("IK target at the shoulder is singular");

    const double c2 = std::clamp((r2 - geom.l1 * geom.l1 - geom.l2 * geom.l2) / (2.0 * geom.l1 * geom.l2), -1.0, 1.0);
    JointState q;
    q.theta2 = std::acos(c2);
    // atan2 of the elbow triangle is the same angle as
    // acos((r^2 + l1^2 - l2^2) / (2 l1 r)) but stays accurate near full extension.
    const double s2 = std::sin(q.theta2);
    q.theta1 = wrap_pi(std::atan2(target.y, target.x) - std::atan2(geom.l2 * s2, geom.l1 + geom.l2 * c2));
    q.theta3 = wrist;

    for (int i = 0; i < 3; ++i) {
        if (q[i] < geom.limits[i].min || q[i] > geom.limits[i].max) throw JointLimitError(i, q[i]);
    }
    return q;
}

void validate(const FlowModel& model) {
    if (!(0.0 < model.inner_weak && model.inner_weak < model.peak && model.peak < model.outer_weak)) {
        throw InvalidInput("flow model needs 0 < inner_weak < peak < outer_weak");
    }
}

const char* to_string(FlowZone zone) { return zone == FlowZone::Weak ? "weak" : "strong"; }

FlowZone flow_zone(const FlowModel& model, double radial_distance) {
    if (!(radial_distance >= 0.0)) throw InvalidInput("radial distance must be non-negative");
    if (radial_distance < model.inner_weak || radial_distance > model.outer_weak) return FlowZone::Weak;
    return FlowZone::Strong;
}

std::vector<WorkspaceSample> workspace(const ArmGeometry& geom, const FlowModel& model, Point2 arm_mount,
                                       double resolution) {
    validate(geom);
    validate(model);
    if (!(resolution > 0.0)) throw InvalidInput("workspace resolution must be positive");
    const double reach = geom.l1 + geom.l2;
    const int half = static_cast<int>(std::floor(reach / resolution));

    std::vector<WorkspaceSample> out;
    out.reserve(static_cast<std::size_t>(2 * half + 1) * (2 * half + 1));
    for (int j = -half; j <= half; ++j) {
        for (int i = -half; i <= half; ++i) {
            WorkspaceSample s;
            s.point = {i * resolution, j * resolution};
            s.zone = flow_zone(model, std::abs(arm_mount.x + s.point.x));
            try {
                inverse(geom, s.point);
                s.reachable = true;
            } catch (const Error&) {
                s.reachable = false;
            }
            out.push_back(s);
        }
    }
    return out;
}

std::vector<TrajectoryPoint> plan_trajectory(const JointState& from, const JointState& to, double max_joint_speed,
                                             double dt) {
    if (!(max_joint_speed > 0.0) || !(dt > 0.0)) throw InvalidInput("joint speed and dt must be positive");
    double largest = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (!std::isfinite(from[i]) || !std::isfinite(to[i])) throw InvalidInput("joint states must be finite");
        largest = std::max(largest, std::abs(to[i] - from[i]));
    }
    const double max_step = max_joint_speed * dt;
    std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(largest / max_step)));
    // ceil can overshoot by one when largest / max_step is an integer up to rounding
    if (steps > 1 && largest / static_cast<double>(steps - 1) <= max_step) --steps;

    std::vector<TrajectoryPoint> out;
    out.reserve(steps);
    for (std::size_t s = 1; s <= steps; ++s) {
        TrajectoryPoint p;
        p.time = static_cast<double>(s) * dt;
        if (s == steps) {
            p.q = to;
        } else {
            const double f = static_cast<double>(s) / static_cast<double>(steps);
            for (int i = 0; i < 3; ++i) p.q[i] = from[i] + f * (to[i] - from[i]);
        }
        out.push_back(p);
    }
    return out;
}

}  // namespace uam
