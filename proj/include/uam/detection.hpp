#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "uam/anchors.hpp"
#include "uam/geometry.hpp"

namespace uam {

/// Raw network output: for every position (row-major) and anchor, the values
/// [vx, vy, vw, vh, vtheta, class logits (c), confidence logit].
struct PredictionMap {
    std::uint32_t fw = 0;
    std::uint32_t fh = 0;
    std::uint32_t k = kAnchorsPerPosition;
    std::uint32_t c = 1;
    std::vector<float> values;

    std::size_t stride() const noexcept { return 5 + c + 1; }
    std::size_t expected_size() const noexcept {
        return static_cast<std::size_t>(fw) * fh * k * stride();
    }
};

void validate(const PredictionMap& map);

struct Detection {
    OrientedBox box;
    int class_id = 0;
    double score = 0.0;
};

/// Decodes every anchor's prediction. score = sigmoid(confidence) * max softmax
/// class probability; detections below score_floor are dropped. Sorted by
/// descending score, ties kept in anchor order.
std::vector<Detection> decode_map(const PredictionMap& map, const AnchorGrid& grid, double score_floor);

/// Greedy per-class suppression in descending score order.
std::vector<Detection> nms(std::vector<Detection> dets, double iou_threshold, IouMode mode = IouMode::Exact);

enum class ApInterpolation { AllPoints, ElevenPoint };

using DetectionsByImage = std::map<std::string, std::vector<Detection>>;
using GroundTruthByImage = std::map<std::string, std::vector<OrientedBox>>;

struct PrPoint {
    double recall = 0.0;
    double precision = 0.0;
};

/// Ranked precision/recall after greedy matching (one point per detection).
std::vector<PrPoint> precision_recall(const DetectionsByImage& dets, const GroundTruthByImage& gts,
                                      double iou_threshold);

/// Single-class average precision with exact rotated IoU matching.
double evaluate_ap(const DetectionsByImage& dets, const GroundTruthByImage& gts, double iou_threshold,
                   ApInterpolation interpolation = ApInterpolation::AllPoints);

}  // namespace uam
