#pragma once

#include <array>
#include <vector>

#include "uam/kinematics.hpp"
#include "uam/transform.hpp"

namespace uam {

/// Link masses (kg) with link-frame CoG offsets (m). Index 2 is the grasped
/// payload, which may be massless.
struct MassModel {
    std::array<double, 3> link_masses{0.2295, 0.2295, 0.0};
    std::array<Vec3, 3> link_cogs{Vec3(-0.1075, 0, 0), Vec3(-0.1075, 0, 0), Vec3(0, 0, 0)};
    double battery_mass = 0.525;
};

void validate(const MassModel& model);

/// Splits arm_mass evenly over links 1 and 2 with each CoG at mid-link.
MassModel default_mass_model(const ArmGeometry& geom, double arm_mass = 0.459, double battery_mass = 0.525);

/// Fixed-arm frame to body frame. The arm moves in the body x-z plane: arm x
/// points forward (body +x), arm y points down (body -z). mount is
/// (forward, down) of the shoulder relative to the body center.
RigidTransform fixed_arm_to_body(Point2 mount);

/// T_i^0 for i = 1..3. Frame i sits at the distal end of link i; frame 3
/// adds the wrist roll about link 2's axis.
std::array<RigidTransform, 3> link_transforms(const ArmGeometry& geom, const JointState& q);

/// T_0^B * T_i^0 * [cog, 1], first three components.
Vec3 link_cog_in_body(const RigidTransform& t0b, const RigidTransform& ti0, const Vec3& cog_link);

/// Body-frame CoG of each link and the payload.
std::array<Vec3, 3> body_cogs(const ArmGeometry& geom, const MassModel& model, const JointState& q,
                              const RigidTransform& t0b);

/// Slider position that cancels the arm's x-moment: sum(m_i * x_bi) / m_b.
/// The slider axis points opposite the arm's +x, so +p_b opposes the arm moment.
double battery_position(const MassModel& model, const std::array<Vec3, 3>& body_cogs);

/// Residual x-moment sum(m_i * x_bi) - m_b * p_b in kg*m.
double net_x_moment(const MassModel& model, const std::array<Vec3, 3>& body_cogs, double p_b);

struct SliderCommand {
    double position = 0.0;
    bool saturated = false;
};

/// Clamps a requested slider position to [-p_max, p_max], reporting saturation.
SliderCommand clamp_slider(double p_b, double p_max);

inline constexpr double kCompensationStep = 1e-6;
inline constexpr double kCompensationFloor = 1e-9;

/// Largest speed of `joint` (0-based) the slider can follow at pose q:
/// slider_speed / max(|dp_b/dtheta|, 1e-9), derivative by central difference.
double max_compensation_speed(double slider_speed, const ArmGeometry& geom, const MassModel& model,
                              const JointState& q, int joint, const RigidTransform& t0b);

}  // namespace uam
