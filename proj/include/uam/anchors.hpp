#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uam/geometry.hpp"

namespace uam {

struct Shape {
    double w = 1.0;
    double h = 1.0;
};

inline constexpr int kAnchorShapes = 9;
inline constexpr int kAnchorAngles = 9;
inline constexpr int kAnchorsPerPosition = kAnchorShapes * kAnchorAngles;

/// The nine fixed R-anchor angles {0, pi/9, ..., 8pi/9}.
std::vector<double> anchor_angles();

/// R-anchor layout over an fw x fh feature map.
struct AnchorGrid {
    int fw = 1;
    int fh = 1;
    double stride = 16.0;
    std::vector<Shape> shapes;
    std::vector<double> angles = anchor_angles();

    int anchors_per_position() const noexcept {
        return static_cast<int>(shapes.size() * angles.size());
    }
    std::size_t anchor_count() const noexcept {
        return static_cast<std::size_t>(fw) * static_cast<std::size_t>(fh) *
               static_cast<std::size_t>(anchors_per_position());
    }
};

void validate(const AnchorGrid& grid);

/// Anchors ordered by position (row, then column), then shape, then angle.
/// Anchor centers sit at cell centers ((i + 0.5) * stride, (j + 0.5) * stride).
std::vector<OrientedBox> generate(const AnchorGrid& grid);

/// Regression targets of a box relative to an anchor.
struct EncodedParams {
    double vx = 0.0;
    double vy = 0.0;
    double vw = 0.0;
    double vh = 0.0;
    double vtheta = 0.0;
};

/// vtheta is chosen so that anchor.theta + vtheta is the canonical angle of gt.
EncodedParams encode(const OrientedBox& gt, const OrientedBox& anchor);

OrientedBox decode(const EncodedParams& v, const OrientedBox& anchor);

/// 1 - IoU of two shapes sharing a center, both axis aligned.
double shape_distance(Shape a, Shape b);

struct KMeansResult {
    std::vector<Shape> centroids;       // sorted by area, then width
    std::vector<double> objective;      // mean distance: initial, then after each Lloyd iteration
    int iterations = 0;
};

inline constexpr int kKMeansMaxIterations = 300;

/// k-means over box (w, h) pairs with the shape_distance metric, k-means++
/// seeding and Lloyd iterations. Deterministic for a fixed seed.
KMeansResult kmeans_shapes_detailed(std::span<const OrientedBox> boxes, int k, std::uint64_t seed);

std::vector<Shape> kmeans_shapes(std::span<const OrientedBox> boxes, int k, std::uint64_t seed);

}  // namespace uam
