#include <set>
#include <string>

#include "uam/error.hpp"
#include "uam/io.hpp"
#include "uam/mission.hpp"

namespace uam {

using nlohmann::json;

namespace {

// Reads optional keys from one JSON object and rejects any key it was not asked about.
class Section {
public:
    Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        if (!j_.is_object()) throw ConfigError(name_ + " must be a JSON object");
    }

    template <typename T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(name_ + "." + key + ": " + e.what());
        }
    }

    void read(const char* key, Vec3& out) {
        std::array<double, 3> v{out.x(), out.y(), out.z()};
        read(key, v);
        out = Vec3(v[0], v[1], v[2]);
    }

    void read(const char* key, Point2& out) {
        std::array<double, 2> v{out.x, out.y};
        read(key, v);
        out = {v[0], v[1]};
    }

    void read(const char* key, PidGains& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        Section s(j_.at(key), name_ + "." + key);
        s.read("kp", out.kp);
        s.read("ki", out.ki);
        s.read("kd", out.kd);
        s.read("integral_limit", out.integral_limit);
        s.read("output_limit", out.output_limit);
        s.finish();
    }

    bool has(const char* key) const { return j_.contains(key); }

    Section child(const char* key) {
        seen_.insert(key);
        static const json empty = json::object();
        return Section(j_.contains(key) ? j_.at(key) : empty, name_ + "." + key);
    }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.count(key)) throw ConfigError("unknown config key " + name_ + "." + key);
        }
    }

private:
    const json& j_;
    std::string name_;
    std::set<std::string> seen_;
};

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json vec(Point2 p) { return json::array({p.x, p.y}); }
json gains(const PidGains& g) {
    json j{{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd}};
    // JSON has no infinity; omitted limits stay unbounded
    if (std::isfinite(g.integral_limit)) j["integral_limit"] = g.integral_limit;
    if (std::isfinite(g.output_limit)) j["output_limit"] = g.output_limit;
    return j;
}

}  // namespace

MissionConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    MissionConfig c;
    Section top(root, "config");

    {
        Section arm = top.child("arm");
        arm.read("l1", c.arm.l1);
        arm.read("l2", c.arm.l2);
        std::array<std::array<double, 2>, 3> limits{};
        for (int i = 0; i < 3; ++i) limits[i] = {c.arm.limits[i].min, c.arm.limits[i].max};
        arm.read("limits", limits);
        for (int i = 0; i < 3; ++i) c.arm.limits[i] = {limits[i][0], limits[i][1]};
        arm.finish();
    }
    c.mass = default_mass_model(c.arm);
    {
        Section mass = top.child("mass");
        if (mass.has("arm_mass")) {
            double arm_mass = 0.459;
            mass.read("arm_mass", arm_mass);
            c.mass = default_mass_model(c.arm, arm_mass, c.mass.battery_mass);
        }
        mass.read("link_masses", c.mass.link_masses);
        std::array<std::array<double, 3>, 3> cogs{};
        for (int i = 0; i < 3; ++i) cogs[i] = {c.mass.link_cogs[i].x(), c.mass.link_cogs[i].y(), c.mass.link_cogs[i].z()};
        mass.read("link_cogs", cogs);
        for (int i = 0; i < 3; ++i) c.mass.link_cogs[i] = Vec3(cogs[i][0], cogs[i][1], cogs[i][2]);
        mass.read("battery_mass", c.mass.battery_mass);
        mass.finish();
    }
    {
        Section flow = top.child("flow");
        flow.read("inner_weak", c.flow.inner_weak);
        flow.read("peak", c.flow.peak);
        flow.read("outer_weak", c.flow.outer_weak);
        flow.finish();
    }
    {
        Section cam = top.child("camera");
        cam.read("width", c.camera.width);
        cam.read("height", c.camera.height);
        cam.read("fx", c.camera.fx);
        cam.read("fy", c.camera.fy);
        cam.read("cu", c.camera.cu);
        cam.read("cv", c.camera.cv);
        cam.read("mount", c.camera.mount);
        cam.finish();
    }
    {
        Section t = top.child("target");
        t.read("present", c.target.present);
        t.read("position", c.target.position);
        t.read("theta", c.target.theta);
        t.read("length", c.target.length);
        t.read("width", c.target.width);
        t.read("mass", c.target.mass);
        t.finish();
    }

    top.read("arm_mount", c.arm_mount);
    top.read("hold_point", c.hold_point);
    top.read("grasp_point", c.grasp_point);
    top.read("drop_point", c.drop_point);
    top.read("wrist_offset", c.wrist_offset);
    top.read("start", c.start);
    top.read("start_yaw", c.start_yaw);
    top.read("search_velocity", c.search_velocity);
    top.read("drop_waypoint", c.drop_waypoint);
    top.read("max_speed", c.max_speed);
    top.read("velocity_lag", c.velocity_lag);
    top.read("position_pid", c.position_pid);
    top.read("velocity_pid", c.velocity_pid);
    top.read("joint_pid", c.joint_pid);
    top.read("slider_pid", c.slider_pid);
    top.read("max_joint_speed", c.max_joint_speed);
    top.read("slider_speed", c.slider_speed);
    top.read("slider_range", c.slider_range);
    top.read("compensation_margin", c.compensation_margin);
    top.read("position_tolerance", c.position_tolerance);
    top.read("hold_tolerance", c.hold_tolerance);
    top.read("joint_settle", c.joint_settle);
    top.read("capture_radius", c.capture_radius);
    top.read("success_tolerance", c.success_tolerance);
    top.read("pixel_noise", c.pixel_noise);
    top.read("angle_noise", c.angle_noise);
    top.read("depth_dropout", c.depth_dropout);
    top.read("sense_period", c.sense_period);
    top.read("regress_on_loss", c.regress_on_loss);
    top.read("loss_timeout", c.loss_timeout);
    top.read("dt", c.dt);
    top.read("time_cap", c.time_cap);
    top.read("seed", c.seed);
    top.finish();

    validate(c);
    return c;
}

MissionConfig load_config(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text);
}

json config_to_json(const MissionConfig& c) {
    json limits = json::array();
    for (const JointLimits& l : c.arm.limits) limits.push_back({l.min, l.max});
    json cogs = json::array();
    for (const Vec3& v : c.mass.link_cogs) cogs.push_back(vec(v));
    return {
        {"arm", {{"l1", c.arm.l1}, {"l2", c.arm.l2}, {"limits", limits}}},
        {"mass", {{"link_masses", c.mass.link_masses}, {"link_cogs", cogs}, {"battery_mass", c.mass.battery_mass}}},
        {"flow", {{"inner_weak", c.flow.inner_weak}, {"peak", c.flow.peak}, {"outer_weak", c.flow.outer_weak}}},
        {"camera",
         {{"width", c.camera.width},
          {"height", c.camera.height},
          {"fx", c.camera.fx},
          {"fy", c.camera.fy},
          {"cu", c.camera.cu},
          {"cv", c.camera.cv},
          {"mount", vec(c.camera.mount)}}},
        {"target",
         {{"present", c.target.present},
          {"position", vec(c.target.position)},
          {"theta", c.target.theta},
          {"length", c.target.length},
          {"width", c.target.width},
          {"mass", c.target.mass}}},
        {"arm_mount", vec(c.arm_mount)},
        {"hold_point", vec(c.hold_point)},
        {"grasp_point", vec(c.grasp_point)},
        {"drop_point", vec(c.drop_point)},
        {"wrist_offset", c.wrist_offset},
        {"start", vec(c.start)},
        {"start_yaw", c.start_yaw},
        {"search_velocity", vec(c.search_velocity)},
        {"drop_waypoint", vec(c.drop_waypoint)},
        {"max_speed", c.max_speed},
        {"velocity_lag", c.velocity_lag},
        {"position_pid", gains(c.position_pid)},
        {"velocity_pid", gains(c.velocity_pid)},
        {"joint_pid", gains(c.joint_pid)},
        {"slider_pid", gains(c.slider_pid)},
        {"max_joint_speed", c.max_joint_speed},
        {"slider_speed", c.slider_speed},
        {"slider_range", c.slider_range},
        {"compensation_margin", c.compensation_margin},
        {"position_tolerance", c.position_tolerance},
        {"hold_tolerance", c.hold_tolerance},
        {"joint_settle", c.joint_settle},
        {"capture_radius", c.capture_radius},
        {"success_tolerance", c.success_tolerance},
        {"pixel_noise", c.pixel_noise},
        {"angle_noise", c.angle_noise},
        {"depth_dropout", c.depth_dropout},
        {"sense_period", c.sense_period},
        {"regress_on_loss", c.regress_on_loss},
        {"loss_timeout", c.loss_timeout},
        {"dt", c.dt},
        {"time_cap", c.time_cap},
        {"seed", c.seed},
    };
}

}  // namespace uam
