#include "uam/localization.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "uam/error.hpp"

namespace uam {

void validate(const PointPatch& patch) {
    if (patch.width < 1 || patch.height < 1) throw InvalidInput("point patch needs width, height >= 1");
    if (patch.points.size() != static_cast<std::size_t>(patch.width) * patch.height) {
        throw InvalidInput("point patch size does not match width * height");
    }
}

int subarea_size(int w, int h) {
    if (w < 1 || h < 1) throw InvalidInput("subarea size needs w, h >= 1");
    const int m = std::min(w, h);
    return m > 5 ? 5 : m;
}

namespace {

int pixel_extent(double size) {
    return std::max(1, static_cast<int>(std::lround(size)));
}

}  // namespace

TargetFix localize(const PointPatch& patch, const Detection& det) {
    validate(patch);
    validate(det.box);
    const long cu = std::lround(det.box.cx);
    const long cv = std::lround(det.box.cy);
    if (cu < 0 || cv < 0 || cu >= patch.width || cv >= patch.height) {
        throw InvalidInput("detection center lies outside the point patch");
    }
    const int k = subarea_size(pixel_extent(det.box.w), pixel_extent(det.box.h));
    const int u0 = std::max<long>(0, cu - k / 2);
    const int v0 = std::max<long>(0, cv - k / 2);
    const int u1 = std::min<long>(patch.width, cu - k / 2 + k);
    const int v1 = std::min<long>(patch.height, cv - k / 2 + k);

    std::array<double, 3> sum{0.0, 0.0, 0.0};
    std::array<int, 3> count{0, 0, 0};
    for (int v = v0; v < v1; ++v) {
        for (int u = u0; u < u1; ++u) {
            const PatchPoint& p = patch.at(u, v);
            if (!p.valid) continue;
            const std::array<double, 3> xyz{p.x, p.y, p.z};
            for (int a = 0; a < 3; ++a) {
                if (std::isfinite(xyz[a])) {
                    sum[a] += xyz[a];
                    ++count[a];
                }
            }
        }
    }
    if (count[0] == 0 || count[1] == 0 || count[2] == 0) throw NoDepth("no valid depth in the central window");

    TargetFix fix;
    fix.position = Vec3(sum[0] / count[0], sum[1] / count[1], sum[2] / count[2]);
    fix.theta = det.box.theta;
    return fix;
}

Vec3 grasp_waypoint(const Vec3& drone_pos, const RigidTransform& t_bw, const RigidTransform& t_cb,
                    const RigidTransform& t_0b, const TargetFix& fix, Point2 grasp_point) {
    const Eigen::Vector4d target = (t_bw * t_cb).matrix() * fix.position.homogeneous();
    const Eigen::Vector4d grasp = (t_bw * t_0b).matrix() * Vec3(grasp_point.x, grasp_point.y, 0.0).homogeneous();
    const Eigen::Vector4d out = drone_pos.homogeneous() + target - grasp;
    return out.head<3>();
}

}  // namespace uam
