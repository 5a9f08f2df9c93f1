#include "uam/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "uam/anchors.hpp"
#include "uam/detection.hpp"
#include "uam/error.hpp"
#include "uam/geometry.hpp"
#include "uam/io.hpp"
#include "uam/kinematics.hpp"
#include "uam/mission.hpp"

namespace uam::cli {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    // avoid printing "-0.000000"
    if (buf[0] == '-' && std::strtod(buf, nullptr) == 0.0) return std::string(buf + 1);
    return buf;
}

double to_radians(double deg) { return deg * kPi / 180.0; }
double to_degrees(double rad) { return rad * 180.0 / kPi; }

OrientedBox single_box(const std::string& path, bool degrees) {
    const auto boxes = read_boxes(path);
    if (boxes.size() != 1) throw ParseError(path + ": expected exactly one box, found " + std::to_string(boxes.size()));
    OrientedBox b = boxes.front();
    if (degrees) b.theta = to_radians(b.theta);
    return b;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Aerial manipulator toolkit: rotated IoU, anchors, detection evaluation, arm kinematics and mission simulation"};
    app.require_subcommand(1);
    app.fallthrough();
    bool degrees = false;
    app.add_flag("--degrees", degrees, "Read and print angles in degrees instead of radians");

    // iou
    auto* iou_cmd = app.add_subcommand("iou", "IoU of two oriented boxes (JSON or CSV files)");
    std::string file_a, file_b, mode_name = "exact";
    iou_cmd->add_option("file_a", file_a, "First box")->required();
    iou_cmd->add_option("file_b", file_b, "Second box")->required();
    iou_cmd->add_option("--mode", mode_name, "exact, approx or horizontal")
        ->check(CLI::IsMember({"exact", "approx", "horizontal"}));

    // ik
    auto* ik_cmd = app.add_subcommand("ik", "Elbow-down inverse kinematics of the planar arm");
    double l1 = 0.0, l2 = 0.0, x = 0.0, y = 0.0;
    ik_cmd->add_option("--l1", l1, "Link 1 length (m)")->required();
    ik_cmd->add_option("--l2", l2, "Link 2 length (m)")->required();
    ik_cmd->add_option("--x", x, "Target x in the fixed arm frame (m)")->required();
    ik_cmd->add_option("--y", y, "Target y in the fixed arm frame (m)")->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Average precision of oriented detections");
    std::string dets_path, gts_path, interp = "all";
    double iou_threshold = 0.5;
    eval_cmd->add_option("--dets", dets_path, "Detections CSV")->required();
    eval_cmd->add_option("--gts", gts_path, "Ground truth CSV")->required();
    eval_cmd->add_option("--iou,--iou-threshold", iou_threshold, "IoU matching threshold");
    eval_cmd->add_option("--interp", interp, "all (all-points) or 11 (11-point)")->check(CLI::IsMember({"all", "11"}));

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Run the grasping mission simulator");
    std::string config_path, log_out;
    std::uint64_t seed = 0;
    double time_cap = -1.0;
    sim_cmd->add_option("--config", config_path, "Mission config (JSON); defaults when omitted");
    sim_cmd->add_option("--seed", seed, "Noise seed");
    sim_cmd->add_option("--log-out", log_out, "Write <prefix>.csv and <prefix>.json");
    sim_cmd->add_option("--time-cap", time_cap, "Override the config time cap (s)");

    // workspace
    auto* ws_cmd = app.add_subcommand("workspace", "Sample the arm workspace with flow zones");
    std::string ws_config, ws_out;
    double resolution = 0.01;
    ws_cmd->add_option("--config", ws_config, "Mission config (JSON); defaults when omitted");
    ws_cmd->add_option("--out", ws_out, "Output CSV (stdout when omitted)");
    ws_cmd->add_option("--resolution", resolution, "Grid spacing (m)");

    // anchors
    auto* anchors_cmd = app.add_subcommand("anchors", "Cluster box shapes into R-anchor sizes");
    std::string boxes_path, anchors_out;
    int k = kAnchorShapes;
    std::uint64_t anchor_seed = 0;
    anchors_cmd->add_option("--boxes", boxes_path, "Boxes CSV or JSON")->required();
    anchors_cmd->add_option("--k", k, "Number of shapes");
    anchors_cmd->add_option("--seed", anchor_seed, "k-means++ seed");
    anchors_cmd->add_option("--out", anchors_out, "Output JSON (stdout when omitted)");

    // decode
    auto* decode_cmd = app.add_subcommand("decode", "Decode a raw prediction map into detections");
    std::string map_path, grid_path, decode_out;
    double score_floor = 0.0, nms_threshold = -1.0;
    std::string nms_mode = "exact";
    decode_cmd->add_option("--map", map_path, "Prediction map (binary or JSON)")->required();
    decode_cmd->add_option("--grid", grid_path, "Anchor grid JSON")->required();
    decode_cmd->add_option("--score-floor", score_floor, "Drop detections below this score");
    decode_cmd->add_option("--nms", nms_threshold, "Apply NMS with this IoU threshold");
    decode_cmd->add_option("--nms-mode", nms_mode, "exact or approx")->check(CLI::IsMember({"exact", "approx"}));
    decode_cmd->add_option("--out", decode_out, "Output CSV (stdout when omitted)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kParseError;
    }

    auto emit = [&](const std::string& path, const std::string& text) {
        if (path.empty()) {
            out << text;
        } else {
            write_text_file(path, text);
        }
    };

    try {
        if (iou_cmd->parsed()) {
            const OrientedBox a = single_box(file_a, degrees);
            const OrientedBox b = single_box(file_b, degrees);
            const IouMode mode = mode_name == "approx"       ? IouMode::Approx
                                 : mode_name == "horizontal" ? IouMode::Horizontal
                                                             : IouMode::Exact;
            out << fixed(iou(a, b, mode), 6) << "\n";
            return kOk;
        }

        if (ik_cmd->parsed()) {
            ArmGeometry geom;
            geom.l1 = l1;
            geom.l2 = l2;
            try {
                validate(geom);
            } catch (const InvalidInput& e) {
                err << "error: " << e.what() << "\n";
                return kParseError;
            }
            try {
                const JointState q = inverse(geom, {x, y});
                const double t1 = degrees ? to_degrees(q.theta1) : q.theta1;
                const double t2 = degrees ? to_degrees(q.theta2) : q.theta2;
                out << fixed(t1, 9) << " " << fixed(t2, 9) << "\n";
                return kOk;
            } catch (const Error& e) {
                err << "out of workspace: " << e.what() << "\n";
                return kOutOfWorkspace;
            }
        }

        if (eval_cmd->parsed()) {
            DetectionsByImage dets = parse_detections_csv(read_text_file(dets_path));
            GroundTruthByImage gts = parse_ground_truth_csv(read_text_file(gts_path));
            if (degrees) {
                for (auto& [img, list] : dets) for (auto& d : list) d.box.theta = to_radians(d.box.theta);
                for (auto& [img, list] : gts) for (auto& b : list) b.theta = to_radians(b.theta);
            }
            try {
                const ApInterpolation mode = interp == "11" ? ApInterpolation::ElevenPoint : ApInterpolation::AllPoints;
                out << fixed(evaluate_ap(dets, gts, iou_threshold, mode), 6) << "\n";
                return kOk;
            } catch (const UndefinedRecall& e) {
                err << "error: " << e.what() << "\n";
                return kEvalInput;
            } catch (const InvalidInput& e) {
                err << "error: " << e.what() << "\n";
                return kEvalInput;
            }
        }

        if (sim_cmd->parsed()) {
            MissionConfig config = config_path.empty() ? MissionConfig{} : load_config(config_path);
            if (time_cap >= 0.0) config.time_cap = time_cap;
            validate(config);
            const MissionLog log = uam::run(config, seed);
            if (!log_out.empty()) {
                write_text_file(log_out + ".csv", log_to_csv(log));
                write_text_file(log_out + ".json", log_summary(log).dump(2) + "\n");
            }
            out << log_summary(log).dump() << "\n";
            return log.done ? kOk : kTimeout;
        }

        if (ws_cmd->parsed()) {
            const MissionConfig config = ws_config.empty() ? MissionConfig{} : load_config(ws_config);
            const auto samples = workspace(config.arm, config.flow, config.arm_mount, resolution);
            std::string csv = "x,y,zone,reachable\n";
            char buf[128];
            for (const WorkspaceSample& s : samples) {
                std::snprintf(buf, sizeof buf, "%.6f,%.6f,%s,%d\n", s.point.x, s.point.y, to_string(s.zone),
                              s.reachable ? 1 : 0);
                csv += buf;
            }
            emit(ws_out, csv);
            return kOk;
        }

        if (anchors_cmd->parsed()) {
            std::vector<OrientedBox> boxes = read_boxes(boxes_path);
            const auto shapes = kmeans_shapes(boxes, k, anchor_seed);
            std::vector<double> angles = anchor_angles();
            if (degrees) for (double& a : angles) a = to_degrees(a);
            const nlohmann::json j{{"k", k}, {"seed", anchor_seed}, {"shapes", shapes}, {"angles", angles}};
            emit(anchors_out, j.dump(2) + "\n");
            return kOk;
        }

        if (decode_cmd->parsed()) {
            const PredictionMap map = load_prediction_map(map_path);
            AnchorGrid grid;
            try {
                grid = nlohmann::json::parse(read_text_file(grid_path)).get<AnchorGrid>();
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(std::string("bad anchor grid JSON: ") + e.what());
            }
            std::vector<Detection> dets = decode_map(map, grid, score_floor);
            if (nms_threshold >= 0.0) dets = nms(std::move(dets), nms_threshold, nms_mode == "approx" ? IouMode::Approx : IouMode::Exact);
            emit(decode_out, to_csv(dets));
            return kOk;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kParseError;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kParseError;
    } catch (const InvalidInput& e) {
        err << "invalid input: " << e.what() << "\n";
        return kParseError;
    }
    return kParseError;
}

}  // namespace uam::cli
