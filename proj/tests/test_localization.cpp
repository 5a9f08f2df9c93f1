#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "uam/error.hpp"
#include "uam/localization.hpp"

using namespace uam;

namespace {

PointPatch uniform_patch(int w, int h, Vec3 p) {
    PointPatch patch;
    patch.width = w;
    patch.height = h;
    patch.points.assign(static_cast<std::size_t>(w) * h, PatchPoint{p.x(), p.y(), p.z(), true});
    return patch;
}

Detection det_at(double cx, double cy, double w, double h, double theta = 0.0) { return {{cx, cy, w, h, theta}, 0, 1.0}; }

bool near(const Vec3& a, const Vec3& b, double tol) { return (a - b).cwiseAbs().maxCoeff() < tol; }

}  // namespace

TEST_CASE("subarea_size") {
    CHECK(subarea_size(10, 8) == 5);
    CHECK(subarea_size(3, 7) == 3);
    CHECK(subarea_size(5, 5) == 5);
    for (int w = 1; w <= 20; ++w) {
        for (int h = 1; h <= 20; ++h) {
            const int k = subarea_size(w, h);
            CHECK(k == (std::min(w, h) > 5 ? 5 : std::min(w, h)));
            CHECK(k <= 5);
            CHECK(k <= std::min(w, h));
        }
    }
    CHECK_THROWS_AS(subarea_size(0, 4), InvalidInput);
}

TEST_CASE("localize examples") {
    const PointPatch full = uniform_patch(20, 20, {1, 2, 3});
    const TargetFix fix = localize(full, det_at(10, 10, 12, 12, 0.7));
    CHECK(fix.position == Vec3(1, 2, 3));
    CHECK(fix.theta == 0.7);

    PointPatch half = full;
    for (std::size_t i = 0; i < half.points.size(); i += 2) {
        half.points[i] = PatchPoint{99, 99, 99, false};
    }
    CHECK(localize(half, det_at(10, 10, 12, 12)).position == Vec3(1, 2, 3));

    // a 5x5 window centered at (10, 10) covers u, v in [8, 12]
    PointPatch mixed = uniform_patch(20, 20, {0, 0, 0});
    double sx = 0, sy = 0, sz = 0;
    for (int v = 8; v <= 12; ++v) {
        for (int u = 8; u <= 12; ++u) {
            mixed.at(u, v) = PatchPoint{double(u), double(v), double(u * v), true};
            sx += u;
            sy += v;
            sz += u * v;
        }
    }
    CHECK(near(localize(mixed, det_at(10, 10, 30, 30)).position, Vec3(sx / 25, sy / 25, sz / 25), 1e-15));
}

TEST_CASE("localize per-axis validity and errors") {
    PointPatch patch = uniform_patch(9, 9, {1, 2, 3});
    patch.at(4, 4).z = std::numeric_limits<double>::quiet_NaN();
    patch.at(4, 4).x = 7;
    const TargetFix fix = localize(patch, det_at(4, 4, 3, 3));
    CHECK(fix.position.x() == doctest::Approx((8 * 1 + 7) / 9.0));
    CHECK(fix.position.z() == 3.0);

    PointPatch empty = uniform_patch(9, 9, {1, 2, 3});
    for (auto& p : empty.points) p.valid = false;
    CHECK_THROWS_AS(localize(empty, det_at(4, 4, 3, 3)), NoDepth);

    CHECK_THROWS_AS(localize(patch, det_at(20, 4, 3, 3)), InvalidInput);
    PointPatch bad = patch;
    bad.points.pop_back();
    CHECK_THROWS_AS(localize(bad, det_at(4, 4, 3, 3)), InvalidInput);
}

TEST_CASE("localize shrinks the window at the border") {
    PointPatch patch = uniform_patch(6, 6, {0, 0, 0});
    for (int v = 0; v < 6; ++v)
        for (int u = 0; u < 6; ++u) patch.at(u, v) = PatchPoint{double(u), double(v), 1.0, true};
    // 5x5 around (0, 0) keeps only u, v in [0, 2]
    const TargetFix fix = localize(patch, det_at(0, 0, 10, 10));
    CHECK(fix.position == Vec3(1, 1, 1));
}

TEST_CASE("localize equals the brute-force mean on random patches") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> dim(1, 30), size(1, 12);
    std::uniform_real_distribution<double> val(-5, 5), unit(0, 1);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        PointPatch patch;
        patch.width = dim(rng);
        patch.height = dim(rng);
        const double drop = unit(rng);
        for (int i = 0; i < patch.width * patch.height; ++i) {
            PatchPoint p{val(rng), val(rng), val(rng), unit(rng) > drop};
            if (unit(rng) < 0.05) p.y = std::numeric_limits<double>::infinity();
            patch.points.push_back(p);
        }
        const int w = size(rng), h = size(rng);
        const int cu = std::uniform_int_distribution<int>(0, patch.width - 1)(rng);
        const int cv = std::uniform_int_distribution<int>(0, patch.height - 1)(rng);
        const Detection det = det_at(cu + 0.3 * (unit(rng) - 0.5), cv + 0.3 * (unit(rng) - 0.5), w, h);

        const int k = std::min({5, w, h});
        const int u0 = std::max(0, cu - k / 2), v0 = std::max(0, cv - k / 2);
        const int u1 = std::min(patch.width, cu - k / 2 + k), v1 = std::min(patch.height, cv - k / 2 + k);
        const Vec3 expected = oracle::brute_window_mean(patch, u0, v0, u1, v1);
        if (!expected.allFinite()) {
            CHECK_THROWS_AS(localize(patch, det), NoDepth);
            continue;
        }
        const TargetFix fix = localize(patch, det);
        CHECK(near(fix.position, expected, 1e-12));
        ++checked;

        // reversing the valid points inside the window leaves the mean unchanged
        PointPatch reversed = patch;
        std::vector<PatchPoint> window;
        for (int v = v0; v < v1; ++v)
            for (int u = u0; u < u1; ++u) window.push_back(patch.at(u, v));
        std::reverse(window.begin(), window.end());
        std::size_t i = 0;
        for (int v = v0; v < v1; ++v)
            for (int u = u0; u < u1; ++u) reversed.at(u, v) = window[i++];
        CHECK(near(localize(reversed, det).position, expected, 1e-12));
    }
    CHECK(checked > 500);
}

TEST_CASE("grasp_waypoint examples") {
    const RigidTransform id;
    const TargetFix fix{Vec3(1, 2, 3), 0.0};
    CHECK(near(grasp_waypoint(Vec3::Zero(), id, id, id, fix, {0.3, 0.1}), Vec3(0.7, 1.9, 3), 1e-15));

    const TargetFix at_grasp{Vec3(0.3, 0.1, 0), 0.0};
    const Vec3 drone(4, -2, 1.5);
    CHECK(near(grasp_waypoint(drone, id, id, id, at_grasp, {0.3, 0.1}), drone, 1e-15));

    const RigidTransform yaw = RigidTransform::rotation_z(kPi);
    const Vec3 flipped = grasp_waypoint(Vec3::Zero(), yaw, id, id, fix, {0.3, 0.1});
    CHECK(near(flipped, Vec3(-0.7, -1.9, 3), 1e-12));
}

TEST_CASE("grasp_waypoint is translation-equivariant in the drone position") {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> val(-3, 3), ang(-kPi, kPi);
    for (int i = 0; i < 500; ++i) {
        const RigidTransform t_bw = RigidTransform::translation(val(rng), val(rng), val(rng)) *
                                    RigidTransform::rotation_z(ang(rng));
        const RigidTransform t_cb = RigidTransform::translation(0.3, 0, -0.05) * RigidTransform::rotation_x(ang(rng));
        const RigidTransform t_0b = RigidTransform::rotation_x(-kPi / 2);
        const TargetFix fix{Vec3(val(rng), val(rng), val(rng)), 0.0};
        const Vec3 drone(val(rng), val(rng), val(rng)), d(val(rng), val(rng), val(rng));
        const Vec3 a = grasp_waypoint(drone, t_bw, t_cb, t_0b, fix, {0.33, 0.18});
        const Vec3 b = grasp_waypoint(drone + d, t_bw, t_cb, t_0b, fix, {0.33, 0.18});
        CHECK(near(b - a, d, 1e-12));
    }
}
