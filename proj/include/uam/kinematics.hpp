#pragma once

#include <array>
#include <vector>

#include "uam/geometry.hpp"

namespace uam {

struct JointLimits {
    double min = -kPi;
    double max = kPi;
};

/// Planar 2R arm with a wrist-roll third joint. Lengths in meters.
struct ArmGeometry {
    double l1 = 0.215;
    double l2 = 0.215;
    std::array<JointLimits, 3> limits{JointLimits{-kPi, kPi}, JointLimits{0.0, kPi}, JointLimits{-kPi, kPi}};
};

void validate(const ArmGeometry& geom);

struct JointState {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double theta3 = 0.0;

    double operator[](int i) const { return i == 0 ? theta1 : (i == 1 ? theta2 : theta3); }
    double& operator[](int i) { return i == 0 ? theta1 : (i == 1 ? theta2 : theta3); }
};

/// End point of link 2 in the fixed arm frame plus the wrist roll.
struct ArmPose {
    double x = 0.0;
    double y = 0.0;
    double wrist = 0.0;
};

ArmPose forward(const ArmGeometry& geom, const JointState& q);

/// Elbow-down solution (theta2 in [0, pi]) reaching target; wrist is copied to theta3.
/// Throws OutOfWorkspace outside the annulus |l1 - l2| <= r <= l1 + l2 and
/// JointLimitError when the solution violates a limit.
JointState inverse(const ArmGeometry& geom, Point2 target, double wrist = 0.0);

bool within_limits(const ArmGeometry& geom, const JointState& q);

/// Radial bands of rotor downwash. Weak inside inner_weak and beyond outer_weak.
struct FlowModel {
    double inner_weak = 0.08;
    double peak = 0.21;
    double outer_weak = 0.30;
};

void validate(const FlowModel& model);

enum class FlowZone { Weak, Strong };

const char* to_string(FlowZone zone);

FlowZone flow_zone(const FlowModel& model, double radial_distance);

struct WorkspaceSample {
    Point2 point;          // fixed arm frame
    FlowZone zone = FlowZone::Weak;
    bool reachable = false;
};

/// Samples a square grid covering the reach disc. arm_mount is the arm origin in
/// the body's vertical plane (forward, down); the flow zone uses the horizontal
/// distance of each sample from the body center.
std::vector<WorkspaceSample> workspace(const ArmGeometry& geom, const FlowModel& model, Point2 arm_mount,
                                       double resolution);

struct TrajectoryPoint {
    double time = 0.0;
    JointState q;
};

/// Linear joint-space interpolation at dt spacing. Every joint finishes together
/// and no joint moves faster than max_joint_speed. The first sample is one step
/// after `from`; the last equals `to`.
std::vector<TrajectoryPoint> plan_trajectory(const JointState& from, const JointState& to, double max_joint_speed,
                                             double dt);

}  // namespace uam
