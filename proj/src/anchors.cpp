#include "uam/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "uam/error.hpp"

namespace uam {

std::vector<double> anchor_angles() {
    std::vector<double> angles(kAnchorAngles);
    for (int i = 0; i < kAnchorAngles; ++i) angles[i] = i * kPi / kAnchorAngles;
    return angles;
}

void validate(const AnchorGrid& grid) {
    if (grid.fw < 1 || grid.fh < 1) throw InvalidInput("anchor grid needs fw, fh >= 1");
    if (!(grid.stride > 0.0) || !std::isfinite(grid.stride)) throw InvalidInput("anchor stride must be positive");
    if (grid.shapes.size() != kAnchorShapes) throw InvalidInput("anchor grid needs exactly 9 shapes");
    if (grid.angles.size() != kAnchorAngles) throw InvalidInput("anchor grid needs exactly 9 angles");
    for (const Shape& s : grid.shapes) {
        if (!(s.w > 0.0) || !(s.h > 0.0) || !std::isfinite(s.w) || !std::isfinite(s.h)) {
            throw InvalidInput("anchor shapes need finite w, h > 0");
        }
    }
    for (double a : grid.angles) {
        if (!std::isfinite(a)) throw InvalidInput("anchor angle must be finite");
    }
}

std::vector<OrientedBox> generate(const AnchorGrid& grid) {
    validate(grid);
    std::vector<OrientedBox> out;
    out.reserve(grid.anchor_count());
    for (int j = 0; j < grid.fh; ++j) {
        for (int i = 0; i < grid.fw; ++i) {
            const double cx = (i + 0.5) * grid.stride;
            const double cy = (j + 0.5) * grid.stride;
            for (const Shape& s : grid.shapes) {
                for (double a : grid.angles) out.push_back({cx, cy, s.w, s.h, a});
            }
        }
    }
    return out;
}

EncodedParams encode(const OrientedBox& gt, const OrientedBox& anchor) {
    validate(gt);
    validate(anchor);
    EncodedParams v;
    v.vx = (gt.cx - anchor.cx) / anchor.w;
    v.vy = (gt.cy - anchor.cy) / anchor.h;
    v.vw = std::log(gt.w / anchor.w);
    v.vh = std::log(gt.h / anchor.h);
    v.vtheta = canonical_angle(gt.theta) - anchor.theta;
    return v;
}

OrientedBox decode(const EncodedParams& v, const OrientedBox& anchor) {
    validate(anchor);
    if (!std::isfinite(v.vx) || !std::isfinite(v.vy) || !std::isfinite(v.vw) || !std::isfinite(v.vh) ||
        !std::isfinite(v.vtheta)) {
        throw InvalidInput("encoded parameters must be finite");
    }
    OrientedBox out;
    out.cx = anchor.cx + v.vx * anchor.w;
    out.cy = anchor.cy + v.vy * anchor.h;
    out.w = anchor.w * std::exp(v.vw);
    out.h = anchor.h * std::exp(v.vh);
    out.theta = anchor.theta + v.vtheta;
    return canonicalize(out);
}

double shape_distance(Shape a, Shape b) {
    const double inter = std::min(a.w, b.w) * std::min(a.h, b.h);
    return 1.0 - inter / (a.w * a.h + b.w * b.h - inter);
}

namespace {

// Uniform double in [0, 1) built from the raw 64-bit engine output so the
// stream does not depend on the standard library's distribution code.
double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Assignment {
    std::vector<int> label;
    double mean_distance = 0.0;
};

Assignment assign(const std::vector<Shape>& points, const std::vector<Shape>& centroids) {
    Assignment a;
    a.label.resize(points.size());
    double total = 0.0;
    for (std::size_t p = 0; p < points.size(); ++p) {
        int best = 0;
        double best_d = shape_distance(points[p], centroids[0]);
        for (std::size_t c = 1; c < centroids.size(); ++c) {
            const double d = shape_distance(points[p], centroids[c]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        a.label[p] = best;
        total += best_d;
    }
    a.mean_distance = total / static_cast<double>(points.size());
    return a;
}

std::vector<Shape> seed_plus_plus(const std::vector<Shape>& points, int k, std::mt19937_64& rng) {
    std::vector<Shape> centroids;
    centroids.reserve(k);
    const std::size_t n = points.size();
    centroids.push_back(points[std::min<std::size_t>(n - 1, static_cast<std::size_t>(unit(rng) * n))]);
    std::vector<double> nearest(n);
    while (static_cast<int>(centroids.size()) < k) {
        double total = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            double d = shape_distance(points[p], centroids[0]);
            for (std::size_t c = 1; c < centroids.size(); ++c) d = std::min(d, shape_distance(points[p], centroids[c]));
            nearest[p] = d * d;
            total += nearest[p];
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            double r = unit(rng) * total;
            for (pick = 0; pick + 1 < n; ++pick) {
                r -= nearest[pick];
                if (r < 0.0) break;
            }
        } else {
            pick = std::min<std::size_t>(n - 1, static_cast<std::size_t>(unit(rng) * n));
        }
        centroids.push_back(points[pick]);
    }
    return centroids;
}

double cluster_cost(const std::vector<Shape>& points, const std::vector<int>& label, int cluster, Shape centroid) {
    double cost = 0.0;
    for (std::size_t p = 0; p < points.size(); ++p) {
        if (label[p] == cluster) cost += shape_distance(points[p], centroid);
    }
    return cost;
}

}  // namespace

KMeansResult kmeans_shapes_detailed(std::span<const OrientedBox> boxes, int k, std::uint64_t seed) {
    if (boxes.empty()) throw InvalidInput("k-means needs at least one box");
    if (k < 1) throw InvalidInput("k-means needs k >= 1");
    std::vector<Shape> points;
    points.reserve(boxes.size());
    for (const OrientedBox& b : boxes) {
        validate(b);
        points.push_back({b.w, b.h});
    }

    std::mt19937_64 rng(seed);
    std::vector<Shape> centroids = seed_plus_plus(points, k, rng);
    KMeansResult result;
    Assignment current = assign(points, centroids);
    result.objective.push_back(current.mean_distance);

    for (int iter = 0; iter < kKMeansMaxIterations; ++iter) {
        std::vector<double> sw(k, 0.0), sh(k, 0.0);
        std::vector<int> count(k, 0);
        for (std::size_t p = 0; p < points.size(); ++p) {
            sw[current.label[p]] += points[p].w;
            sh[current.label[p]] += points[p].h;
            ++count[current.label[p]];
        }

        bool moved = false;
        for (int c = 0; c < k; ++c) {
            if (count[c] == 0) {
                // empty cluster: restart it on the point farthest from its own centroid
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t p = 0; p < points.size(); ++p) {
                    const double d = shape_distance(points[p], centroids[current.label[p]]);
                    if (d > far_d) {
                        far_d = d;
                        far = p;
                    }
                }
                if (far_d > 0.0) {
                    centroids[c] = points[far];
                    moved = true;
                }
                continue;
            }
            const Shape mean{sw[c] / count[c], sh[c] / count[c]};
            if (mean.w == centroids[c].w && mean.h == centroids[c].h) continue;
            // The mean is not the minimizer of the 1 - IoU cost, so only accept
            // it when the cluster cost does not rise.
            if (cluster_cost(points, current.label, c, mean) <=
                cluster_cost(points, current.label, c, centroids[c])) {
                centroids[c] = mean;
                moved = true;
            }
        }

        Assignment next = assign(points, centroids);
        result.iterations = iter + 1;
        const bool relabeled = next.label != current.label;
        current = std::move(next);
        result.objective.push_back(current.mean_distance);
        if (!moved && !relabeled) break;
    }

    std::sort(centroids.begin(), centroids.end(), [](Shape a, Shape b) {
        const double aa = a.w * a.h, ab = b.w * b.h;
        if (aa != ab) return aa < ab;
        return a.w < b.w;
    });
    result.centroids = std::move(centroids);
    return result;
}

std::vector<Shape> kmeans_shapes(std::span<const OrientedBox> boxes, int k, std::uint64_t seed) {
    return kmeans_shapes_detailed(boxes, k, seed).centroids;
}

}  // namespace uam
