#include <doctest.h>

#include <cmath>
#include <random>

#include "uam/cog.hpp"
#include "uam/error.hpp"

using namespace uam;

namespace {

bool near(const Vec3& a, const Vec3& b, double tol) { return (a - b).cwiseAbs().maxCoeff() < tol; }

MassModel model_with(double m1, double m2, double m3, double mb) {
    MassModel m;
    m.link_masses = {m1, m2, m3};
    m.battery_mass = mb;
    return m;
}

// p_b for the default mid-link CoGs, written out by hand for the fixed arm plane
double hand_battery_position(double l1, double l2, double m1, double m2, double mb, double mount_x, double t1,
                             double t2) {
    const double x1 = mount_x + 0.5 * l1 * std::cos(t1);
    const double x2 = mount_x + l1 * std::cos(t1) + 0.5 * l2 * std::cos(t1 + t2);
    return (m1 * x1 + m2 * x2) / mb;
}

}  // namespace

TEST_CASE("link_cog_in_body examples") {
    const RigidTransform id;
    CHECK(near(link_cog_in_body(id, id, Vec3(0.1, 0, 0)), Vec3(0.1, 0, 0), 1e-15));
    CHECK(near(link_cog_in_body(RigidTransform::translation(0.2, 0, 0), id, Vec3(0.1, 0, 0)), Vec3(0.3, 0, 0), 1e-15));
    CHECK(near(link_cog_in_body(id, RigidTransform::rotation_z(kPi / 2), Vec3(0.1, 0, 0)), Vec3(0, 0.1, 0), 1e-15));

    Eigen::Matrix4d skew = Eigen::Matrix4d::Identity();
    skew(0, 1) = 0.3;
    CHECK_THROWS_AS(RigidTransform::from_matrix(skew), InvalidInput);
    CHECK_FALSE(is_rigid(skew));
}

TEST_CASE("link_transforms agrees with forward kinematics") {
    ArmGeometry g;
    auto t = link_transforms(g, {0, 0, 0});
    CHECK(near(t[1].translation(), Vec3(g.l1 + g.l2, 0, 0), 1e-15));
    t = link_transforms(g, {kPi / 2, 0, 0});
    CHECK(near(t[0].translation(), Vec3(0, g.l1, 0), 1e-15));

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ang(-kPi, kPi), len(0.05, 1.0);
    for (int i = 0; i < 1000; ++i) {
        g.l1 = len(rng);
        g.l2 = len(rng);
        const JointState q{ang(rng), ang(rng), ang(rng)};
        const auto chain = link_transforms(g, q);
        const ArmPose p = forward(g, q);
        CHECK(near(chain[1].translation(), Vec3(p.x, p.y, 0), 1e-9));
        // the wrist roll leaves the end point where it is
        CHECK(near(chain[2].translation(), chain[1].translation(), 1e-15));
    }
}

TEST_CASE("fixed arm frame maps into the body x-z plane") {
    const RigidTransform t0b = fixed_arm_to_body({0.05, 0.08});
    CHECK(near(t0b.apply(Vec3(0, 0, 0)), Vec3(0.05, 0, -0.08), 1e-15));
    CHECK(near(t0b.apply(Vec3(1, 0, 0)), Vec3(1.05, 0, -0.08), 1e-15));
    CHECK(near(t0b.apply(Vec3(0, 1, 0)), Vec3(0.05, 0, -1.08), 1e-15));
}

TEST_CASE("battery_position examples") {
    MassModel m = model_with(0.1, 1e-300, 0.0, 0.5);
    const std::array<Vec3, 3> single{Vec3(0.2, 0, 0), Vec3(0, 0, 0), Vec3(0, 0, 0)};
    CHECK(battery_position(m, single) == doctest::Approx(0.04).epsilon(1e-15));

    const std::array<Vec3, 3> centered{Vec3(0, 1, 0), Vec3(0, -2, 3), Vec3(0, 0, 0)};
    CHECK(battery_position(model_with(0.2, 0.3, 0.1, 0.5), centered) == 0.0);

    const std::array<Vec3, 3> with_payload{Vec3(0.1, 0, 0), Vec3(0.2, 0, 0), Vec3(0.3, 0, 0)};
    CHECK(battery_position(model_with(0.2, 0.2, 0.05, 0.5), with_payload) >
          battery_position(model_with(0.2, 0.2, 0.0, 0.5), with_payload));

    CHECK_THROWS_AS(battery_position(model_with(0.2, 0.2, 0, 0.0), single), InvalidInput);
}

TEST_CASE("net_x_moment examples") {
    const ArmGeometry g;
    const MassModel m = default_mass_model(g);
    const RigidTransform t0b = fixed_arm_to_body({0, 0.08});
    const auto cogs = body_cogs(g, m, {0, 0, 0}, t0b);
    CHECK(net_x_moment(m, cogs, 0.0) > 0.0);
    CHECK(std::abs(net_x_moment(m, cogs, battery_position(m, cogs))) < 1e-12);

    MassModel empty = m;
    empty.link_masses = {0, 0, 0};
    CHECK(net_x_moment(empty, cogs, 0.0) == 0.0);
}

TEST_CASE("battery position cancels the moment for random models and poses") {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> mass(0.01, 2.0), off(-0.3, 0.3), ang(-kPi, kPi), len(0.05, 0.6);
    for (int i = 0; i < 1000; ++i) {
        ArmGeometry g;
        g.l1 = len(rng);
        g.l2 = len(rng);
        MassModel m = model_with(mass(rng), mass(rng), i % 3 == 0 ? 0.0 : mass(rng), mass(rng));
        for (auto& c : m.link_cogs) c = Vec3(off(rng), off(rng), off(rng));
        const RigidTransform t0b = fixed_arm_to_body({off(rng), off(rng)}) * RigidTransform::rotation_z(ang(rng));
        const auto cogs = body_cogs(g, m, {ang(rng), ang(rng), ang(rng)}, t0b);
        CHECK(std::abs(net_x_moment(m, cogs, battery_position(m, cogs))) < 1e-12);
    }
}

TEST_CASE("battery_position is linear in masses and CoG x") {
    std::mt19937_64 rng(45);
    std::uniform_real_distribution<double> mass(0.01, 2.0), x(-0.5, 0.5), scale(0.5, 3.0);
    for (int i = 0; i < 200; ++i) {
        const MassModel m = model_with(mass(rng), mass(rng), mass(rng), mass(rng));
        std::array<Vec3, 3> cogs{Vec3(x(rng), 0, 0), Vec3(x(rng), 0, 0), Vec3(x(rng), 0, 0)};
        const double base = battery_position(m, cogs);
        for (int j = 0; j < 3; ++j) {
            const double s = scale(rng);
            MassModel ms = m;
            ms.link_masses[j] *= s;
            const double expected = base + (s - 1.0) * m.link_masses[j] * cogs[j].x() / m.battery_mass;
            CHECK(battery_position(ms, cogs) == doctest::Approx(expected).epsilon(1e-12));

            auto shifted = cogs;
            shifted[j].x() += 0.1;
            CHECK(battery_position(m, shifted) ==
                  doctest::Approx(base + 0.1 * m.link_masses[j] / m.battery_mass).epsilon(1e-12));
        }
    }
}

TEST_CASE("body_cogs matches the hand-written planar formula") {
    std::mt19937_64 rng(46);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    ArmGeometry g;
    const MassModel m = default_mass_model(g);
    const RigidTransform t0b = fixed_arm_to_body({0.03, 0.08});
    for (int i = 0; i < 500; ++i) {
        const JointState q{ang(rng), ang(rng), ang(rng)};
        const double p = battery_position(m, body_cogs(g, m, q, t0b));
        CHECK(p == doctest::Approx(hand_battery_position(g.l1, g.l2, m.link_masses[0], m.link_masses[1],
                                                         m.battery_mass, 0.03, q.theta1, q.theta2))
                       .epsilon(1e-12));
    }
}

TEST_CASE("clamp_slider") {
    CHECK(clamp_slider(0.1, 0.25).position == 0.1);
    CHECK_FALSE(clamp_slider(0.1, 0.25).saturated);
    CHECK(clamp_slider(0.4, 0.25).position == 0.25);
    CHECK(clamp_slider(0.4, 0.25).saturated);
    CHECK(clamp_slider(-0.4, 0.25).position == -0.25);
    CHECK_THROWS_AS(clamp_slider(0.0, -1.0), InvalidInput);
}

TEST_CASE("max_compensation_speed") {
    ArmGeometry g;
    g.l1 = 0.2;
    g.l2 = 0.2;
    const MassModel m = model_with(0.1, 0.1, 0.0, 0.525);
    MassModel mid = m;
    mid.link_cogs = {Vec3(-0.1, 0, 0), Vec3(-0.1, 0, 0), Vec3(0, 0, 0)};
    const RigidTransform t0b = fixed_arm_to_body({0, 0.08});

    // stretched out along x, p_b is stationary in theta1
    const JointState straight{0, 0, 0};
    const double stationary = max_compensation_speed(0.1, g, mid, straight, 0, t0b);
    CHECK(stationary == doctest::Approx(0.1 / kCompensationFloor));

    // a sweep over theta1 +- 0.01 bounds the local slope from above
    double sweep_slope = 0.0;
    double prev = hand_battery_position(0.2, 0.2, 0.1, 0.1, 0.525, 0, -0.01, 0);
    for (int i = 1; i <= 2000; ++i) {
        const double t = -0.01 + i * 1e-5;
        const double p = hand_battery_position(0.2, 0.2, 0.1, 0.1, 0.525, 0, t, 0);
        sweep_slope = std::max(sweep_slope, std::abs(p - prev) / 1e-5);
        prev = p;
    }
    CHECK(stationary >= 0.1 / sweep_slope);

    // away from the stationary pose the bound equals the swept slope at the center
    for (double t1 : {0.3, 0.9, -1.2, 2.0}) {
        const JointState q{t1, 0.4, 0};
        const double h = 1e-5;
        const double slope = std::abs(hand_battery_position(0.2, 0.2, 0.1, 0.1, 0.525, 0, t1 + h, 0.4) -
                                      hand_battery_position(0.2, 0.2, 0.1, 0.1, 0.525, 0, t1 - h, 0.4)) /
                             (2 * h);
        const double bound = max_compensation_speed(0.1, g, mid, q, 0, t0b);
        CHECK(bound == doctest::Approx(0.1 / slope).epsilon(1e-6));
        CHECK(max_compensation_speed(0.2, g, mid, q, 0, t0b) == doctest::Approx(2 * bound).epsilon(1e-12));
    }

    // the wrist roll never moves the x-moment when the payload sits on the axis
    CHECK(max_compensation_speed(0.1, g, mid, {0.5, 0.5, 0.5}, 2, t0b) == doctest::Approx(0.1 / kCompensationFloor));

    CHECK_THROWS_AS(max_compensation_speed(0.0, g, mid, straight, 0, t0b), InvalidInput);
    CHECK_THROWS_AS(max_compensation_speed(0.1, g, mid, straight, 3, t0b), InvalidInput);
}
