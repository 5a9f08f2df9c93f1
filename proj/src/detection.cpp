#include "uam/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "uam/error.hpp"

namespace uam {

void validate(const PredictionMap& map) {
    if (map.fw == 0 || map.fh == 0) throw InvalidInput("prediction map needs fw, fh >= 1");
    if (map.c == 0) throw InvalidInput("prediction map needs at least one class");
    if (map.values.size() != map.expected_size()) {
        throw InvalidInput("prediction map holds " + std::to_string(map.values.size()) + " values, expected " +
                           std::to_string(map.expected_size()));
    }
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::vector<Detection> decode_map(const PredictionMap& map, const AnchorGrid& grid, double score_floor) {
    validate(map);
    validate(grid);
    if (map.fw != static_cast<std::uint32_t>(grid.fw) || map.fh != static_cast<std::uint32_t>(grid.fh) ||
        map.k != static_cast<std::uint32_t>(grid.anchors_per_position()) || map.k != kAnchorsPerPosition) {
        throw InvalidInput("prediction map dimensions do not match the anchor grid");
    }
    const std::vector<OrientedBox> anchors = generate(grid);
    const std::size_t stride = map.stride();

    std::vector<Detection> out;
    for (std::size_t a = 0; a < anchors.size(); ++a) {
        const float* v = map.values.data() + a * stride;
        const float* logits = v + 5;
        const double conf = v[5 + map.c];

        const float* top = std::max_element(logits, logits + map.c);
        double denom = 0.0;
        for (std::uint32_t i = 0; i < map.c; ++i) denom += std::exp(static_cast<double>(logits[i]) - *top);
        const double score = sigmoid(conf) / denom;
        if (score < score_floor) continue;

        const EncodedParams params{v[0], v[1], v[2], v[3], v[4]};
        out.push_back({decode(params, anchors[a]), static_cast<int>(top - logits), score});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Detection& x, const Detection& y) { return x.score > y.score; });
    return out;
}

std::vector<Detection> nms(std::vector<Detection> dets, double iou_threshold, IouMode mode) {
    if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) throw InvalidInput("nms threshold must lie in [0, 1]");
    std::stable_sort(dets.begin(), dets.end(),
                     [](const Detection& x, const Detection& y) { return x.score > y.score; });
    std::vector<Detection> kept;
    for (const Detection& d : dets) {
        const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
            return k.class_id == d.class_id && iou(k.box, d.box, mode) >= iou_threshold;
        });
        if (!suppressed) kept.push_back(d);
    }
    return kept;
}

namespace {

struct Ranked {
    const std::string* image;
    const Detection* det;
};

// Total order on detection content so ranking never depends on input order.
bool ranks_before(const Ranked& a, const Ranked& b) {
    if (a.det->score != b.det->score) return a.det->score > b.det->score;
    const auto key = [](const Ranked& r) {
        const OrientedBox& x = r.det->box;
        return std::tie(*r.image, x.cx, x.cy, x.w, x.h, x.theta, r.det->class_id);
    };
    return key(a) < key(b);
}

}  // namespace

std::vector<PrPoint> precision_recall(const DetectionsByImage& dets, const GroundTruthByImage& gts,
                                      double iou_threshold) {
    if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) throw InvalidInput("IoU threshold must lie in (0, 1]");
    std::size_t total_gt = 0;
    for (const auto& [image, boxes] : gts) total_gt += boxes.size();
    if (total_gt == 0) throw UndefinedRecall("no ground truth boxes: recall is undefined");

    std::vector<Ranked> ranked;
    for (const auto& [image, list] : dets) {
        for (const Detection& d : list) ranked.push_back({&image, &d});
    }
    std::sort(ranked.begin(), ranked.end(), ranks_before);

    std::map<std::string, std::vector<bool>> used;
    for (const auto& [image, boxes] : gts) used[image].assign(boxes.size(), false);

    std::vector<PrPoint> curve;
    curve.reserve(ranked.size());
    std::size_t tp = 0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const auto it = gts.find(*ranked[i].image);
        if (it != gts.end()) {
            std::vector<bool>& taken = used[it->first];
            int best = -1;
            double best_iou = -1.0;
            for (std::size_t g = 0; g < it->second.size(); ++g) {
                if (taken[g]) continue;
                const double o = iou_exact(ranked[i].det->box, it->second[g]);
                // strict > keeps the lowest index on ties
                if (o >= iou_threshold && o > best_iou) {
                    best = static_cast<int>(g);
                    best_iou = o;
                }
            }
            if (best >= 0) {
                taken[best] = true;
                ++tp;
            }
        }
        curve.push_back({static_cast<double>(tp) / static_cast<double>(total_gt),
                         static_cast<double>(tp) / static_cast<double>(i + 1)});
    }
    return curve;
}

double evaluate_ap(const DetectionsByImage& dets, const GroundTruthByImage& gts, double iou_threshold,
                   ApInterpolation interpolation) {
    const std::vector<PrPoint> curve = precision_recall(dets, gts, iou_threshold);
    const std::size_t n = curve.size();

    // precision envelope: best precision at this rank or any later one
    std::vector<double> envelope(n);
    double best = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        best = std::max(best, curve[i].precision);
        envelope[i] = best;
    }

    if (interpolation == ApInterpolation::ElevenPoint) {
        double sum = 0.0;
        for (int t = 0; t <= 10; ++t) {
            const double level = t / 10.0;
            double p = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (curve[i].recall >= level) {
                    p = envelope[i];
                    break;
                }
            }
            sum += p;
        }
        return sum / 11.0;
    }

    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (curve[i].recall > prev_recall) {
            ap += (curve[i].recall - prev_recall) * envelope[i];
            prev_recall = curve[i].recall;
        }
    }
    return ap;
}

}  // namespace uam
