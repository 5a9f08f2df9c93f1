#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "uam/anchors.hpp"
#include "uam/detection.hpp"
#include "uam/geometry.hpp"
#include "uam/localization.hpp"

// File formats:
//   box CSV        cx,cy,w,h,theta
//   detection CSV  [image,]cx,cy,w,h,theta,class_id,score
//   truth CSV      [image,]cx,cy,w,h,theta
// Blank lines, '#' comments and a header row starting with "cx" or "image"
// are skipped. Rows without an image column belong to image "0".

namespace uam {

void to_json(nlohmann::json& j, const OrientedBox& b);
void from_json(const nlohmann::json& j, OrientedBox& b);
void to_json(nlohmann::json& j, const Shape& s);
void from_json(const nlohmann::json& j, Shape& s);
void to_json(nlohmann::json& j, const AnchorGrid& g);
void from_json(const nlohmann::json& j, AnchorGrid& g);
void to_json(nlohmann::json& j, const Detection& d);
void from_json(const nlohmann::json& j, Detection& d);

std::string to_csv_row(const OrientedBox& b);
OrientedBox box_from_csv_row(const std::string& row);

/// Boxes from text holding either JSON (an object or an array of objects) or CSV rows.
std::vector<OrientedBox> parse_boxes(const std::string& text);
std::vector<OrientedBox> read_boxes(const std::string& path);

DetectionsByImage parse_detections_csv(const std::string& text);
GroundTruthByImage parse_ground_truth_csv(const std::string& text);
std::string to_csv(const std::vector<Detection>& dets);

/// Little-endian header (fw, fh, k, c as uint32) followed by float32 values.
void write_prediction_map(std::ostream& out, const PredictionMap& map);
PredictionMap read_prediction_map(std::istream& in);
void to_json(nlohmann::json& j, const PredictionMap& map);
void from_json(const nlohmann::json& j, PredictionMap& map);
/// Binary unless the first non-space byte is '{'.
PredictionMap load_prediction_map(const std::string& path);

/// Little-endian header (width, height as uint32), then per pixel x, y, z as
/// float32 and one validity byte. Coordinates are narrowed to float32.
void write_point_patch(std::ostream& out, const PointPatch& patch);
PointPatch read_point_patch(std::istream& in);
void to_json(nlohmann::json& j, const PointPatch& patch);
void from_json(const nlohmann::json& j, PointPatch& patch);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace uam
