#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the code paths it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "uam/detection.hpp"
#include "uam/geometry.hpp"
#include "uam/localization.hpp"

namespace oracle {

inline bool inside(const uam::OrientedBox& b, double x, double y) {
    // rotate the point into the box frame by -theta
    const double dx = x - b.cx, dy = y - b.cy;
    const double u = dx * std::cos(-b.theta) - dy * std::sin(-b.theta);
    const double v = dx * std::sin(-b.theta) + dy * std::cos(-b.theta);
    return std::abs(u) <= b.w / 2 && std::abs(v) <= b.h / 2;
}

/// Jittered-stratified Monte-Carlo estimate of area(a ∩ b): side x side samples
/// spread over a's own footprint, each tested for membership in b.
inline double mc_intersection_area(const uam::OrientedBox& a, const uam::OrientedBox& b, int side,
                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    const double ca = std::cos(a.theta), sa = std::sin(a.theta);
    std::int64_t hits = 0;
    for (int i = 0; i < side; ++i) {
        for (int j = 0; j < side; ++j) {
            const double u = ((i + jitter(rng)) / side - 0.5) * a.w;
            const double v = ((j + jitter(rng)) / side - 0.5) * a.h;
            const double x = a.cx + ca * u - sa * v;
            const double y = a.cy + sa * u + ca * v;
            if (inside(b, x, y)) ++hits;
        }
    }
    return a.w * a.h * static_cast<double>(hits) / (static_cast<double>(side) * side);
}

inline double mc_iou(const uam::OrientedBox& a, const uam::OrientedBox& b, int side, std::uint64_t seed) {
    const double inter = mc_intersection_area(a, b, side, seed);
    return inter / (a.w * a.h + b.w * b.h - inter);
}

/// Plain PR walk plus all-points AP with the interpolated precision found by
/// scanning every later rank (quadratic, no envelope array).
struct BruteAp {
    std::vector<double> recall;
    std::vector<double> precision;
    double ap = 0.0;
};

inline BruteAp brute_force_ap(const uam::DetectionsByImage& dets, const uam::GroundTruthByImage& gts, double thr) {
    struct Item {
        std::string image;
        uam::Detection det;
    };
    std::vector<Item> items;
    for (const auto& [img, list] : dets)
        for (const auto& d : list) items.push_back({img, d});
    // selection sort by descending score, ties broken by content
    for (std::size_t i = 0; i < items.size(); ++i) {
        std::size_t best = i;
        for (std::size_t j = i + 1; j < items.size(); ++j) {
            const auto& a = items[j];
            const auto& b = items[best];
            bool before = false;
            if (a.det.score != b.det.score) {
                before = a.det.score > b.det.score;
            } else {
                const auto ka = std::make_tuple(a.image, a.det.box.cx, a.det.box.cy, a.det.box.w, a.det.box.h,
                                                a.det.box.theta, a.det.class_id);
                const auto kb = std::make_tuple(b.image, b.det.box.cx, b.det.box.cy, b.det.box.w, b.det.box.h,
                                                b.det.box.theta, b.det.class_id);
                before = ka < kb;
            }
            if (before) best = j;
        }
        std::swap(items[i], items[best]);
    }
    std::size_t total = 0;
    for (const auto& [img, boxes] : gts) total += boxes.size();
    std::map<std::string, std::vector<bool>> used;
    for (const auto& [img, boxes] : gts) used[img] = std::vector<bool>(boxes.size(), false);

    BruteAp out;
    std::size_t tp = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto it = gts.find(items[i].image);
        if (it != gts.end()) {
            int pick = -1;
            double pick_iou = 0.0;
            for (std::size_t g = 0; g < it->second.size(); ++g) {
                if (used[items[i].image][g]) continue;
                const double o = uam::iou_exact(items[i].det.box, it->second[g]);
                if (o >= thr && (pick < 0 || o > pick_iou)) {
                    pick = static_cast<int>(g);
                    pick_iou = o;
                }
            }
            if (pick >= 0) {
                used[items[i].image][pick] = true;
                ++tp;
            }
        }
        out.recall.push_back(static_cast<double>(tp) / static_cast<double>(total));
        out.precision.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
    }
    double last = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (out.recall[i] <= last) continue;
        double p = 0.0;
        for (std::size_t j = i; j < items.size(); ++j) p = std::max(p, out.precision[j]);
        out.ap += (out.recall[i] - last) * p;
        last = out.recall[i];
    }
    return out;
}

/// Per-axis sum / count over the valid entries of a k x k window.
inline uam::Vec3 brute_window_mean(const uam::PointPatch& patch, int u0, int v0, int u1, int v1) {
    double s[3] = {0, 0, 0};
    int n[3] = {0, 0, 0};
    for (int v = v0; v < v1; ++v) {
        for (int u = u0; u < u1; ++u) {
            const auto& p = patch.points[static_cast<std::size_t>(v) * patch.width + u];
            if (!p.valid) continue;
            const double c[3] = {p.x, p.y, p.z};
            for (int a = 0; a < 3; ++a) {
                if (std::isfinite(c[a])) {
                    s[a] += c[a];
                    ++n[a];
                }
            }
        }
    }
    return {s[0] / n[0], s[1] / n[1], s[2] / n[2]};
}

}  // namespace oracle
