#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uam/cog.hpp"
#include "uam/detection.hpp"
#include "uam/kinematics.hpp"
#include "uam/localization.hpp"
#include "uam/pid.hpp"
#include "uam/transform.hpp"

namespace uam {

/// Pinhole camera looking straight down from `mount` (body frame). Camera x
/// is body forward, camera y is body right, camera z is body down.
struct CameraModel {
    int width = 424;
    int height = 240;
    double fx = 300.0;
    double fy = 300.0;
    double cu = 212.0;
    double cv = 120.0;
    Vec3 mount{0.30, 0.0, -0.05};
};

RigidTransform camera_to_body(const CameraModel& camera);

/// Flat rectangular target. theta is its rotation as seen by the downward
/// camera at zero drone yaw; position is its top-face center.
struct TargetSpec {
    bool present = true;
    Vec3 position{1.6, 0.0, 0.10};
    double theta = 0.0;
    double length = 0.20;
    double width = 0.07;
    double mass = 0.03;
};

struct MissionConfig {
    ArmGeometry arm;
    MassModel mass = default_mass_model(ArmGeometry{});
    FlowModel flow;
    Point2 arm_mount{0.0, 0.08};  // shoulder (forward, down) of the body center
    CameraModel camera;
    TargetSpec target;

    Point2 hold_point{0.10, 0.20};
    Point2 grasp_point{0.33, 0.18};
    Point2 drop_point{0.25, 0.30};
    double wrist_offset = 0.0;  // added to the detected angle to get theta3

    Vec3 start{0.0, 0.0, 1.0};
    double start_yaw = 0.0;
    Vec3 search_velocity{0.3, 0.0, 0.0};
    Vec3 drop_waypoint{0.0, 1.0, 1.0};

    double max_speed = 0.6;       // m/s, drone velocity setpoint clamp
    double velocity_lag = 0.3;    // s, first-order lag of the velocity response
    PidGains position_pid{1.2, 0.0, 0.0, 1.0, 0.6};
    PidGains velocity_pid{0.5, 0.0, 0.0, 1.0, 1.0};
    PidGains joint_pid{15.0, 0.0, 0.0, 1.0, 10.0};
    PidGains slider_pid{20.0, 0.0, 0.0, 1.0, 10.0};

    double max_joint_speed = 0.8;     // rad/s
    double slider_speed = 0.1;        // m/s
    double slider_range = 0.25;       // m, slider travel is [-range, range]
    double compensation_margin = 0.8; // fraction of the slider speed the arm may demand

    double position_tolerance = 0.03; // m, Approach -> Grasp and Deliver -> Drop gate
    double hold_tolerance = 0.003;    // m, drone error allowed when closing the gripper
    double joint_settle = 1e-8;       // rad, arm error allowed when closing/opening the gripper
    double capture_radius = 0.02;     // m, gripper captures the target within this distance
    double success_tolerance = 0.01;  // m, grasp error counted as success

    double pixel_noise = 0.0;         // px, std of detection center noise
    double angle_noise = 0.0;         // rad, std of detection angle noise
    double depth_dropout = 0.0;       // probability a pixel has no depth
    double sense_period = 0.1;        // s
    bool regress_on_loss = true;
    double loss_timeout = 1.0;        // s without detection before Approach falls back to Search

    double dt = 0.02;
    double time_cap = 120.0;
    std::uint64_t seed = 0;
};

/// Throws ConfigError for inconsistent values or unreachable arm waypoints.
void validate(const MissionConfig& config);

MissionConfig parse_config(const std::string& json_text);
MissionConfig load_config(const std::string& path);
nlohmann::json config_to_json(const MissionConfig& config);

enum class Phase { Search, Approach, Grasp, Deliver, Drop, Done };

const char* to_string(Phase phase);

struct DroneState {
    Vec3 position = Vec3::Zero();
    double yaw = 0.0;
    Vec3 velocity = Vec3::Zero();
};

RigidTransform body_to_world(const DroneState& drone);

struct TargetState {
    bool present = true;
    Vec3 position = Vec3::Zero();
    double theta = 0.0;
    bool grasped = false;
};

struct Controllers {
    std::array<PidController, 3> position;
    std::array<PidController, 3> velocity;
    std::array<PidController, 3> joints;
    PidController slider;
};

struct WorldState {
    DroneState drone;
    JointState arm;
    double slider = 0.0;
    TargetState target;
    Phase phase = Phase::Search;
    double clock = 0.0;
    std::uint64_t tick = 0;

    // mission memory
    Vec3 setpoint = Vec3::Zero();
    Vec3 waypoint = Vec3::Zero();
    double detected_theta = 0.0;
    double last_seen = 0.0;
    double next_sense = 0.0;
    std::vector<TrajectoryPoint> arm_plan;
    std::size_t plan_index = 0;
    JointState arm_goal;
    double arm_speed_limit = 0.0;
    double slider_command = 0.0;
    bool slider_saturated = false;

    // filled at the grasp tick
    bool grasp_attempted = false;
    double grasp_error = 0.0;
    double grasp_theta3 = 0.0;
    Vec3 grasp_effector = Vec3::Zero();

    Controllers ctl;
};

WorldState initial_world(const MissionConfig& config);

struct Observation {
    Detection detection;
    PointPatch patch;
};

/// Synthetic camera plus detector. Returns nothing when the target center is
/// not in view. Noise is drawn from a generator seeded with noise_seed.
std::optional<Observation> sense(const WorldState& world, const MissionConfig& config, std::uint64_t noise_seed);

/// End-effector position in the world frame.
Vec3 effector_world(const WorldState& world, const MissionConfig& config);

/// Mass model including the payload when the target is held.
MassModel loaded_mass_model(const WorldState& world, const MissionConfig& config);

/// One control tick of length dt.
WorldState step(const WorldState& world, const MissionConfig& config, double dt);

struct LogRow {
    double time = 0.0;
    Phase phase = Phase::Search;
    Vec3 position = Vec3::Zero();
    double yaw = 0.0;
    Vec3 error = Vec3::Zero();  // setpoint - position
    JointState arm;
    double slider = 0.0;
    double slider_command = 0.0;
    double net_moment = 0.0;
    bool grasped = false;
};

struct PhaseChange {
    double time = 0.0;
    Phase from = Phase::Search;
    Phase to = Phase::Search;
};

struct MissionLog {
    std::vector<LogRow> rows;
    std::vector<PhaseChange> phase_changes;
    bool done = false;
    bool timed_out = false;
    bool grasp_attempted = false;
    double grasp_error = 0.0;
    double grasp_theta3 = 0.0;
    double target_theta = 0.0;
    bool success = false;
    std::uint64_t ticks = 0;
    double end_time = 0.0;
};

/// Steps until Done or the time cap. A timed-out run is reported through
/// MissionLog::timed_out with the partial log.
MissionLog run(MissionConfig config, std::uint64_t seed);

std::string log_to_csv(const MissionLog& log);
nlohmann::json log_summary(const MissionLog& log);

/// Per-tick seed for the sensing noise.
std::uint64_t tick_seed(std::uint64_t seed, std::uint64_t tick);

}  // namespace uam
