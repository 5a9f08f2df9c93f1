#pragma once

#include <vector>

#include "uam/detection.hpp"
#include "uam/transform.hpp"

namespace uam {

struct PatchPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    bool valid = false;
};

/// Organized point cloud aligned with the image: points[v * width + u] is the
/// camera-frame point seen at pixel (u, v).
struct PointPatch {
    int width = 0;
    int height = 0;
    std::vector<PatchPoint> points;

    const PatchPoint& at(int u, int v) const { return points[static_cast<std::size_t>(v) * width + u]; }
    PatchPoint& at(int u, int v) { return points[static_cast<std::size_t>(v) * width + u]; }
};

void validate(const PointPatch& patch);

/// Target position in the camera frame plus its in-image rotation.
struct TargetFix {
    Vec3 position = Vec3::Zero();
    double theta = 0.0;
};

/// Side of the central averaging window: 5 when min(w, h) > 5, else min(w, h).
int subarea_size(int w, int h);

/// Averages the k x k window around the detection center. Each axis averages
/// over its own valid entries (flagged valid and finite). Windows shrink at
/// the patch border. Throws NoDepth when an axis has no valid entry.
TargetFix localize(const PointPatch& patch, const Detection& det);

/// World position the drone must reach so that the arm's grasp point
/// (x0g, y0g) in the fixed arm frame coincides with the localized target.
Vec3 grasp_waypoint(const Vec3& drone_pos, const RigidTransform& t_bw, const RigidTransform& t_cb,
                    const RigidTransform& t_0b, const TargetFix& fix, Point2 grasp_point);

}  // namespace uam
