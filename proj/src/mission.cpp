#include "uam/mission.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "uam/error.hpp"

namespace uam {

RigidTransform camera_to_body(const CameraModel& camera) {
    return RigidTransform::translation(camera.mount) * RigidTransform::rotation_x(kPi);
}

RigidTransform body_to_world(const DroneState& drone) {
    return RigidTransform::translation(drone.position) * RigidTransform::rotation_z(drone.yaw);
}

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::Search: return "search";
        case Phase::Approach: return "approach";
        case Phase::Grasp: return "grasp";
        case Phase::Deliver: return "deliver";
        case Phase::Drop: return "drop";
        case Phase::Done: return "done";
    }
    return "unknown";
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

bool finite(const Vec3& v) { return v.allFinite(); }

JointState solve_arm_point(const ArmGeometry& arm, Point2 p, double wrist, const char* name) {
    try {
        return inverse(arm, p, wrist);
    } catch (const Error& e) {
        throw ConfigError(std::string(name) + " point is not reachable: " + e.what());
    }
}

}  // namespace

void validate(const MissionConfig& c) {
    try {
        validate(c.arm);
        validate(c.mass);
        validate(c.flow);
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
    require(std::isfinite(c.arm_mount.x) && std::isfinite(c.arm_mount.y), "arm_mount must be finite");
    require(c.camera.width > 0 && c.camera.height > 0, "camera size must be positive");
    require(c.camera.fx > 0.0 && c.camera.fy > 0.0, "camera focal lengths must be positive");
    require(std::isfinite(c.camera.cu) && std::isfinite(c.camera.cv) && finite(c.camera.mount),
            "camera parameters must be finite");
    require(finite(c.target.position) && std::isfinite(c.target.theta), "target pose must be finite");
    require(c.target.length > 0.0 && c.target.width > 0.0, "target size must be positive");
    require(c.target.mass >= 0.0, "target mass must be non-negative");
    require(std::isfinite(c.wrist_offset), "wrist_offset must be finite");
    require(finite(c.start) && std::isfinite(c.start_yaw) && finite(c.search_velocity) && finite(c.drop_waypoint),
            "start, search velocity and drop waypoint must be finite");
    require(c.max_speed > 0.0, "max_speed must be positive");
    require(c.velocity_lag >= 0.0, "velocity_lag must be non-negative");
    require(c.max_joint_speed > 0.0, "max_joint_speed must be positive");
    require(c.slider_speed > 0.0, "slider_speed must be positive");
    require(c.slider_range > 0.0, "slider_range must be positive");
    require(c.compensation_margin > 0.0 && c.compensation_margin <= 1.0, "compensation_margin must lie in (0, 1]");
    require(c.position_tolerance > 0.0 && c.hold_tolerance > 0.0 && c.joint_settle > 0.0,
            "tolerances must be positive");
    require(c.capture_radius > 0.0 && c.success_tolerance > 0.0, "capture radius and success tolerance must be positive");
    require(c.pixel_noise >= 0.0 && c.angle_noise >= 0.0, "noise levels must be non-negative");
    require(c.depth_dropout >= 0.0 && c.depth_dropout < 1.0, "depth_dropout must lie in [0, 1)");
    require(c.sense_period > 0.0, "sense_period must be positive");
    require(c.loss_timeout > 0.0, "loss_timeout must be positive");
    require(c.dt > 0.0 && std::isfinite(c.dt), "dt must be positive");
    require(c.time_cap >= 0.0 && std::isfinite(c.time_cap), "time_cap must be non-negative");
    require(c.arm.limits[2].min <= -kPi / 2 && c.arm.limits[2].max >= kPi / 2,
            "theta3 limits must cover [-pi/2, pi/2] for rotation-aware grasping");

    solve_arm_point(c.arm, c.hold_point, 0.0, "hold");
    solve_arm_point(c.arm, c.grasp_point, 0.0, "grasp");
    solve_arm_point(c.arm, c.drop_point, 0.0, "drop");
}

WorldState initial_world(const MissionConfig& config) {
    WorldState w;
    w.drone.position = config.start;
    w.drone.yaw = config.start_yaw;
    w.arm = solve_arm_point(config.arm, config.hold_point, 0.0, "hold");
    w.arm_goal = w.arm;
    w.arm_speed_limit = config.max_joint_speed;
    w.target.present = config.target.present;
    w.target.position = config.target.position;
    w.target.theta = config.target.theta;
    w.setpoint = config.start;
    w.phase = Phase::Search;

    w.ctl.position.fill(PidController(config.position_pid));
    w.ctl.velocity.fill(PidController(config.velocity_pid));
    w.ctl.joints.fill(PidController(config.joint_pid));
    w.ctl.slider = PidController(config.slider_pid);

    const MassModel model = loaded_mass_model(w, config);
    const RigidTransform t0b = fixed_arm_to_body(config.arm_mount);
    w.slider = clamp_slider(battery_position(model, body_cogs(config.arm, model, w.arm, t0b)), config.slider_range).position;
    w.slider_command = w.slider;
    return w;
}

MassModel loaded_mass_model(const WorldState& world, const MissionConfig& config) {
    MassModel m = config.mass;
    m.link_masses[2] = world.target.grasped ? config.target.mass : 0.0;
    return m;
}

Vec3 effector_world(const WorldState& world, const MissionConfig& config) {
    const ArmPose tip = forward(config.arm, world.arm);
    const RigidTransform t = body_to_world(world.drone) * fixed_arm_to_body(config.arm_mount);
    return t.apply(Vec3(tip.x, tip.y, 0.0));
}

std::uint64_t tick_seed(std::uint64_t seed, std::uint64_t tick) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tick + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

double heading(const TargetState& t) { return -t.theta; }

PointPatch render_patch(const WorldState& world, const MissionConfig& config, const RigidTransform& cam_to_world,
                        std::mt19937_64& rng) {
    const CameraModel& cam = config.camera;
    PointPatch patch;
    patch.width = cam.width;
    patch.height = cam.height;
    patch.points.resize(static_cast<std::size_t>(cam.width) * cam.height);

    const Eigen::Matrix3d r = cam_to_world.rotation();
    const Vec3 origin = cam_to_world.translation();
    const bool target_visible = world.target.present && !world.target.grasped;
    const double c = std::cos(heading(world.target));
    const double s = std::sin(heading(world.target));
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    for (int v = 0; v < cam.height; ++v) {
        for (int u = 0; u < cam.width; ++u) {
            PatchPoint& p = patch.at(u, v);
            if (config.depth_dropout > 0.0 && coin(rng) < config.depth_dropout) continue;
            const Vec3 ray((u - cam.cu) / cam.fx, (v - cam.cv) / cam.fy, 1.0);
            const Vec3 dir = r * ray;
            if (dir.z() >= 0.0) continue;
            double t = -1.0;
            if (target_visible) {
                const double tt = (world.target.position.z() - origin.z()) / dir.z();
                if (tt > 0.0) {
                    const Vec3 d = origin + tt * dir - world.target.position;
                    const double along = c * d.x() + s * d.y();
                    const double across = -s * d.x() + c * d.y();
                    if (std::abs(along) <= 0.5 * config.target.length && std::abs(across) <= 0.5 * config.target.width) {
                        t = tt;
                    }
                }
            }
            if (t < 0.0) t = -origin.z() / dir.z();
            if (t <= 0.0) continue;
            const Vec3 point = t * ray;
            p = {point.x(), point.y(), point.z(), true};
        }
    }
    return patch;
}

}  // namespace

std::optional<Observation> sense(const WorldState& world, const MissionConfig& config, std::uint64_t noise_seed) {
    if (!world.target.present || world.target.grasped) return std::nullopt;
    const CameraModel& cam = config.camera;
    const RigidTransform cam_to_world = body_to_world(world.drone) * camera_to_body(cam);
    const RigidTransform world_to_cam = cam_to_world.inverse();
    const Vec3 p = world_to_cam.apply(world.target.position);
    if (p.z() <= 1e-6) return std::nullopt;

    std::mt19937_64 rng(noise_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double nu = gauss(rng), nv = gauss(rng), na = gauss(rng);

    const double u = cam.fx * p.x() / p.z() + cam.cu + config.pixel_noise * nu;
    const double v = cam.fy * p.y() / p.z() + cam.cv + config.pixel_noise * nv;
    const long ui = std::lround(u), vi = std::lround(v);
    if (ui < 0 || vi < 0 || ui >= cam.width || vi >= cam.height) return std::nullopt;

    const Vec3 axis = world_to_cam.apply_direction(Vec3(std::cos(heading(world.target)), std::sin(heading(world.target)), 0.0));
    const double du = cam.fx * (axis.x() * p.z() - p.x() * axis.z());
    const double dv = cam.fy * (axis.y() * p.z() - p.y() * axis.z());

    Observation obs;
    obs.detection.box = {u, v, cam.fx * config.target.length / p.z(), cam.fy * config.target.width / p.z(),
                         canonical_angle(std::atan2(dv, du) + config.angle_noise * na)};
    obs.detection.class_id = 0;
    obs.detection.score = 1.0;
    obs.patch = render_patch(world, config, cam_to_world, rng);
    return obs;
}

namespace {

// Largest common joint speed for a straight joint-space move such that the
// combined slider demand stays within margin * slider_speed along the path.
double compensated_speed(const MissionConfig& config, const MassModel& model, const JointState& from,
                         const JointState& to) {
    double largest = 0.0;
    for (int j = 0; j < 3; ++j) largest = std::max(largest, std::abs(to[j] - from[j]));
    if (largest == 0.0) return config.max_joint_speed;

    const RigidTransform t0b = fixed_arm_to_body(config.arm_mount);
    const double slider = config.compensation_margin * config.slider_speed;
    double demand = 0.0;
    constexpr int kSamples = 21;
    for (int s = 0; s < kSamples; ++s) {
        const double f = static_cast<double>(s) / (kSamples - 1);
        JointState q;
        for (int j = 0; j < 3; ++j) q[j] = from[j] + f * (to[j] - from[j]);
        double sum = 0.0;
        for (int j = 0; j < 3; ++j) {
            const double ratio = std::abs(to[j] - from[j]) / largest;
            if (ratio == 0.0) continue;
            sum += ratio / max_compensation_speed(slider, config.arm, model, q, j, t0b);
        }
        demand = std::max(demand, sum);
    }
    return demand > 0.0 ? std::min(config.max_joint_speed, 1.0 / demand) : config.max_joint_speed;
}

void plan_arm(WorldState& w, const MissionConfig& config, const JointState& goal, double dt) {
    const MassModel model = loaded_mass_model(w, config);
    w.arm_speed_limit = compensated_speed(config, model, w.arm, goal);
    w.arm_goal = goal;
    w.arm_plan = plan_trajectory(w.arm, goal, w.arm_speed_limit, dt);
    w.plan_index = 0;
}

bool arm_settled(const WorldState& w, double tolerance) {
    if (w.plan_index < w.arm_plan.size()) return false;
    for (int j = 0; j < 3; ++j) {
        if (std::abs(w.arm_goal[j] - w.arm[j]) > tolerance) return false;
    }
    return true;
}

// theta3 for a grasp angle, picking the representative (mod pi) nearest the current wrist.
double wrist_for(double grasp_angle, double current) {
    const double a = canonical_angle(grasp_angle);
    const double b = a - kPi;
    return std::abs(a - current) <= std::abs(b - current) ? a : b;
}

void fly(WorldState& w, const MissionConfig& config, const Vec3& feedforward, double dt) {
    Vec3 v_sp;
    for (int a = 0; a < 3; ++a) {
        v_sp[a] = feedforward[a] + w.ctl.position[a].step(w.setpoint[a] - w.drone.position[a], dt);
    }
    const double norm = v_sp.norm();
    if (norm > config.max_speed) v_sp *= config.max_speed / norm;

    Vec3 v_cmd;
    for (int a = 0; a < 3; ++a) v_cmd[a] = v_sp[a] + w.ctl.velocity[a].step(v_sp[a] - w.drone.velocity[a], dt);

    const double alpha = config.velocity_lag > 0.0 ? 1.0 - std::exp(-dt / config.velocity_lag) : 1.0;
    w.drone.velocity += alpha * (v_cmd - w.drone.velocity);
    w.drone.position += w.drone.velocity * dt;
}

void drive_arm(WorldState& w, double dt) {
    JointState ref = w.arm_goal;
    if (w.plan_index < w.arm_plan.size()) ref = w.arm_plan[w.plan_index++].q;
    for (int j = 0; j < 3; ++j) {
        const double rate = std::clamp(w.ctl.joints[j].step(ref[j] - w.arm[j], dt), -w.arm_speed_limit, w.arm_speed_limit);
        w.arm[j] += rate * dt;
    }
}

void drive_slider(WorldState& w, const MissionConfig& config, double dt) {
    const MassModel model = loaded_mass_model(w, config);
    const RigidTransform t0b = fixed_arm_to_body(config.arm_mount);
    const SliderCommand cmd =
        clamp_slider(battery_position(model, body_cogs(config.arm, model, w.arm, t0b)), config.slider_range);
    w.slider_command = cmd.position;
    w.slider_saturated = cmd.saturated;
    const double rate =
        std::clamp(w.ctl.slider.step(cmd.position - w.slider, dt), -config.slider_speed, config.slider_speed);
    w.slider = std::clamp(w.slider + rate * dt, -config.slider_range, config.slider_range);
}

}  // namespace

WorldState step(const WorldState& world, const MissionConfig& config, double dt) {
    if (!(dt > 0.0)) throw InvalidInput("step needs dt > 0");
    WorldState w = world;
    if (w.phase == Phase::Done) {
        w.tick += 1;
        w.clock = static_cast<double>(w.tick) * dt;
        return w;
    }

    // perception
    if ((w.phase == Phase::Search || w.phase == Phase::Approach) && w.clock + 1e-12 >= w.next_sense) {
        w.next_sense = w.clock + config.sense_period;
        if (auto obs = sense(w, config, tick_seed(config.seed, w.tick))) {
            try {
                const TargetFix fix = localize(obs->patch, obs->detection);
                w.waypoint = grasp_waypoint(w.drone.position, body_to_world(w.drone), camera_to_body(config.camera),
                                            fixed_arm_to_body(config.arm_mount), fix, config.grasp_point);
                w.detected_theta = fix.theta;
                w.last_seen = w.clock;
                if (w.phase == Phase::Search) w.phase = Phase::Approach;
            } catch (const NoDepth&) {
                // no usable depth this frame; keep the previous fix
            }
        }
    }
    if (w.phase == Phase::Approach && config.regress_on_loss && w.clock - w.last_seen > config.loss_timeout) {
        w.phase = Phase::Search;
        w.setpoint = w.drone.position;
    }

    Vec3 feedforward = Vec3::Zero();
    switch (w.phase) {
        case Phase::Search:
            w.setpoint += config.search_velocity * dt;
            feedforward = config.search_velocity;
            break;
        case Phase::Approach:
            w.setpoint = w.waypoint;
            if ((w.drone.position - w.waypoint).norm() < config.position_tolerance) {
                const double wrist = wrist_for(w.detected_theta + config.wrist_offset, w.arm.theta3);
                plan_arm(w, config, inverse(config.arm, config.grasp_point, wrist), dt);
                w.phase = Phase::Grasp;
            }
            break;
        case Phase::Grasp:
            w.setpoint = w.waypoint;
            if (arm_settled(w, config.joint_settle) &&
                (w.drone.position - w.waypoint).norm() < config.hold_tolerance) {
                w.grasp_attempted = true;
                w.grasp_effector = effector_world(w, config);
                w.grasp_error = (w.grasp_effector - w.target.position).norm();
                w.grasp_theta3 = w.arm.theta3;
                w.target.grasped = w.grasp_error <= config.capture_radius;
                plan_arm(w, config, inverse(config.arm, config.hold_point, w.arm.theta3), dt);
                w.phase = Phase::Deliver;
            }
            break;
        case Phase::Deliver:
            w.setpoint = config.drop_waypoint;
            if (arm_settled(w, 1e-3) && (w.drone.position - config.drop_waypoint).norm() < config.position_tolerance) {
                plan_arm(w, config, inverse(config.arm, config.drop_point, w.arm.theta3), dt);
                w.phase = Phase::Drop;
            }
            break;
        case Phase::Drop:
            w.setpoint = config.drop_waypoint;
            if (arm_settled(w, config.joint_settle)) {
                w.target.grasped = false;
                w.phase = Phase::Done;
            }
            break;
        case Phase::Done:
            break;
    }

    fly(w, config, feedforward, dt);
    drive_arm(w, dt);
    if (w.target.grasped) w.target.position = effector_world(w, config);
    drive_slider(w, config, dt);

    w.tick += 1;
    w.clock = static_cast<double>(w.tick) * dt;
    return w;
}

namespace {

LogRow make_row(const WorldState& w, const MissionConfig& config) {
    LogRow r;
    r.time = w.clock;
    r.phase = w.phase;
    r.position = w.drone.position;
    r.yaw = w.drone.yaw;
    r.error = w.setpoint - w.drone.position;
    r.arm = w.arm;
    r.slider = w.slider;
    r.slider_command = w.slider_command;
    const MassModel model = loaded_mass_model(w, config);
    r.net_moment = net_x_moment(model, body_cogs(config.arm, model, w.arm, fixed_arm_to_body(config.arm_mount)), w.slider);
    r.grasped = w.target.grasped;
    return r;
}

}  // namespace

MissionLog run(MissionConfig config, std::uint64_t seed) {
    config.seed = seed;
    validate(config);
    MissionLog log;
    WorldState w = initial_world(config);
    log.rows.push_back(make_row(w, config));
    while (w.phase != Phase::Done && w.clock + 1e-12 < config.time_cap) {
        const Phase before = w.phase;
        w = step(w, config, config.dt);
        if (w.phase != before) log.phase_changes.push_back({w.clock, before, w.phase});
        log.rows.push_back(make_row(w, config));
    }
    log.done = w.phase == Phase::Done;
    log.timed_out = !log.done;
    log.grasp_attempted = w.grasp_attempted;
    log.grasp_error = w.grasp_error;
    log.grasp_theta3 = w.grasp_theta3;
    log.target_theta = canonical_angle(config.target.theta);
    log.success = log.done && w.grasp_attempted && w.grasp_error <= config.success_tolerance;
    log.ticks = w.tick;
    log.end_time = w.clock;
    return log;
}

std::string log_to_csv(const MissionLog& log) {
    std::string out =
        "time,phase,x,y,z,yaw,err_x,err_y,err_z,theta1,theta2,theta3,p_b,p_b_cmd,net_moment,grasped\n";
    char buf[512];
    for (const LogRow& r : log.rows) {
        std::snprintf(buf, sizeof buf,
                      "%.4f,%s,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.12f,%d\n", r.time,
                      to_string(r.phase), r.position.x(), r.position.y(), r.position.z(), r.yaw, r.error.x(),
                      r.error.y(), r.error.z(), r.arm.theta1, r.arm.theta2, r.arm.theta3, r.slider, r.slider_command,
                      r.net_moment, r.grasped ? 1 : 0);
        out += buf;
    }
    return out;
}

nlohmann::json log_summary(const MissionLog& log) {
    nlohmann::json phases = nlohmann::json::array();
    for (const PhaseChange& c : log.phase_changes) {
        phases.push_back({{"time", c.time}, {"from", to_string(c.from)}, {"to", to_string(c.to)}});
    }
    return {{"success", log.success},
            {"done", log.done},
            {"timed_out", log.timed_out},
            {"grasp_attempted", log.grasp_attempted},
            {"grasp_error", log.grasp_error},
            {"grasp_theta3", log.grasp_theta3},
            {"target_theta", log.target_theta},
            {"tick_count", log.ticks},
            {"end_time", log.end_time},
            {"phase_changes", phases}};
}

}  // namespace uam
