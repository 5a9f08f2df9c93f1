#pragma once

#include <array>
#include <span>
#include <vector>

namespace uam {

inline constexpr double kPi = 3.14159265358979323846;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Rotated rectangle (cx, cy, w, h, theta) in image pixels. theta in radians,
/// counter-clockwise from +x. A rectangle is symmetric under theta -> theta + pi.
struct OrientedBox {
    double cx = 0.0;
    double cy = 0.0;
    double w = 1.0;
    double h = 1.0;
    double theta = 0.0;

    double area() const noexcept { return w * h; }
};

using Polygon = std::vector<Point2>;

// Throws InvalidInput unless every field is finite and w, h > 0.
void validate(const OrientedBox& box);

/// Wraps an arbitrary finite angle into [0, pi).
double canonical_angle(double theta);

/// Same footprint with theta in [0, pi).
OrientedBox canonicalize(const OrientedBox& box);

/// Smallest angle between two box orientations, honouring period pi. Result in [0, pi/2].
double angle_deviation(double theta_a, double theta_b);

/// Vertices in counter-clockwise order, starting at the (+w/2, +h/2) corner.
std::array<Point2, 4> corners(const OrientedBox& box);

/// True when p lies inside or on the boundary of box.
bool contains(const OrientedBox& box, Point2 p);

/// Signed shoelace area; positive for counter-clockwise vertex order.
double signed_area(std::span<const Point2> poly);

/// Sutherland-Hodgman: clips subject against every edge of a convex,
/// counter-clockwise clip polygon. Exact for a convex subject.
Polygon clip_convex(std::span<const Point2> subject, std::span<const Point2> clip);

double intersection_area(const OrientedBox& a, const OrientedBox& b);

double iou_exact(const OrientedBox& a, const OrientedBox& b);

/// Axis-aligned IoU of the (cx, cy, w, h) parts; theta is ignored.
double iou_horizontal(const OrientedBox& a, const OrientedBox& b);

/// Horizontal IoU down-weighted by the wrapped angular deviation:
/// iou_horizontal(a, b) * (1 - angle_deviation / pi).
double iou_approx(const OrientedBox& a, const OrientedBox& b);

enum class IouMode { Exact, Approx, Horizontal };

double iou(const OrientedBox& a, const OrientedBox& b, IouMode mode);

}  // namespace uam
