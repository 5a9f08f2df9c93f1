#include "uam/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "uam/error.hpp"

namespace uam {

void validate(const OrientedBox& box) {
    if (!std::isfinite(box.cx) || !std::isfinite(box.cy) || !std::isfinite(box.w) ||
        !std::isfinite(box.h) || !std::isfinite(box.theta)) {
        throw InvalidInput("oriented box has a non-finite field");
    }
    if (box.w <= 0.0 || box.h <= 0.0) {
        throw InvalidInput("oriented box needs w > 0 and h > 0");
    }
}

double canonical_angle(double theta) {
    if (!std::isfinite(theta)) throw InvalidInput("non-finite angle");
    double t = std::fmod(theta, kPi);
    if (t < 0.0) t += kPi;
    // fmod of a value just below a multiple of pi can round up to pi itself
    if (t >= kPi) t = 0.0;
    return t;
}

OrientedBox canonicalize(const OrientedBox& box) {
    validate(box);
    OrientedBox out = box;
    out.theta = canonical_angle(box.theta);
    return out;
}

double angle_deviation(double theta_a, double theta_b) {
    double d = std::abs(canonical_angle(theta_a) - canonical_angle(theta_b));
    return std::min(d, kPi - d);
}

std::array<Point2, 4> corners(const OrientedBox& box) {
    validate(box);
    const double c = std::cos(box.theta);
    const double s = std::sin(box.theta);
    const double hw = 0.5 * box.w;
    const double hh = 0.5 * box.h;
    auto place = [&](double u, double v) {
        return Point2{box.cx + c * u - s * v, box.cy + s * u + c * v};
    };
    return {place(hw, hh), place(-hw, hh), place(-hw, -hh), place(hw, -hh)};
}

bool contains(const OrientedBox& box, Point2 p) {
    const double c = std::cos(box.theta);
    const double s = std::sin(box.theta);
    const double dx = p.x - box.cx;
    const double dy = p.y - box.cy;
    const double u = c * dx + s * dy;
    const double v = -s * dx + c * dy;
    return std::abs(u) <= 0.5 * box.w && std::abs(v) <= 0.5 * box.h;
}

double signed_area(std::span<const Point2> poly) {
    const std::size_t n = poly.size();
    if (n < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        twice += poly[j].x * poly[i].y - poly[i].x * poly[j].y;
    }
    return 0.5 * twice;
}

namespace {

// > 0 when p is left of the directed edge a->b.
double side(Point2 a, Point2 b, Point2 p) {
    return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
}

Point2 crossing(Point2 p, Point2 q, double sp, double sq) {
    const double t = sp / (sp - sq);
    return {p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
}

}  // namespace

Polygon clip_convex(std::span<const Point2> subject, std::span<const Point2> clip) {
    Polygon out(subject.begin(), subject.end());
    Polygon in;
    const std::size_t m = clip.size();
    for (std::size_t e = 0; e < m && !out.empty(); ++e) {
        const Point2 a = clip[e];
        const Point2 b = clip[(e + 1) % m];
        in.swap(out);
        out.clear();
        const std::size_t n = in.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 p = in[i];
            const Point2 q = in[(i + 1) % n];
            const double sp = side(a, b, p);
            const double sq = side(a, b, q);
            if (sp >= 0.0) {
                out.push_back(p);
                if (sq < 0.0) out.push_back(crossing(p, q, sp, sq));
            } else if (sq >= 0.0) {
                out.push_back(crossing(p, q, sp, sq));
            }
        }
    }
    return out;
}

namespace {

double overlap_1d(double c0, double half0, double c1, double half1) {
    const double lo = std::max(c0 - half0, c1 - half1);
    const double hi = std::min(c0 + half0, c1 + half1);
    return std::max(0.0, hi - lo);
}

}  // namespace

double intersection_area(const OrientedBox& a, const OrientedBox& b) {
    const OrientedBox ca = canonicalize(a);
    const OrientedBox cb = canonicalize(b);
    if (ca.theta == 0.0 && cb.theta == 0.0) {
        return overlap_1d(ca.cx, 0.5 * ca.w, cb.cx, 0.5 * cb.w) *
               overlap_1d(ca.cy, 0.5 * ca.h, cb.cy, 0.5 * cb.h);
    }
    const auto pa = corners(ca);
    const auto pb = corners(cb);
    const Polygon inter = clip_convex(pa, pb);
    const double area = signed_area(inter);
    return std::clamp(area, 0.0, std::min(ca.area(), cb.area()));
}

double iou_exact(const OrientedBox& a, const OrientedBox& b) {
    const double inter = intersection_area(a, b);
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

double iou_horizontal(const OrientedBox& a, const OrientedBox& b) {
    validate(a);
    validate(b);
    const double inter = overlap_1d(a.cx, 0.5 * a.w, b.cx, 0.5 * b.w) *
                         overlap_1d(a.cy, 0.5 * a.h, b.cy, 0.5 * b.h);
    const double uni = a.area() + b.area() - inter;
    return std::clamp(inter / uni, 0.0, 1.0);
}

double iou_approx(const OrientedBox& a, const OrientedBox& b) {
    const double weight = 1.0 - angle_deviation(a.theta, b.theta) / kPi;
    return iou_horizontal(a, b) * weight;
}

double iou(const OrientedBox& a, const OrientedBox& b, IouMode mode) {
    switch (mode) {
        case IouMode::Exact: return iou_exact(a, b);
        case IouMode::Approx: return iou_approx(a, b);
        case IouMode::Horizontal: return iou_horizontal(a, b);
    }
    return 0.0;
}

}  // namespace uam
