#include "uam/io.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "uam/error.hpp"

namespace uam {

using nlohmann::json;

void to_json(json& j, const OrientedBox& b) {
    j = json{{"cx", b.cx}, {"cy", b.cy}, {"w", b.w}, {"h", b.h}, {"theta", b.theta}};
}

void from_json(const json& j, OrientedBox& b) {
    b.cx = j.at("cx").get<double>();
    b.cy = j.at("cy").get<double>();
    b.w = j.at("w").get<double>();
    b.h = j.at("h").get<double>();
    b.theta = j.at("theta").get<double>();
}

void to_json(json& j, const Shape& s) { j = json{{"w", s.w}, {"h", s.h}}; }

void from_json(const json& j, Shape& s) {
    s.w = j.at("w").get<double>();
    s.h = j.at("h").get<double>();
}

void to_json(json& j, const AnchorGrid& g) {
    j = json{{"fw", g.fw}, {"fh", g.fh}, {"stride", g.stride}, {"shapes", g.shapes}, {"angles", g.angles}};
}

void from_json(const json& j, AnchorGrid& g) {
    g.fw = j.at("fw").get<int>();
    g.fh = j.at("fh").get<int>();
    g.stride = j.at("stride").get<double>();
    g.shapes = j.at("shapes").get<std::vector<Shape>>();
    g.angles = j.contains("angles") ? j.at("angles").get<std::vector<double>>() : anchor_angles();
}

void to_json(json& j, const Detection& d) {
    j = json{{"box", d.box}, {"class_id", d.class_id}, {"score", d.score}};
}

void from_json(const json& j, Detection& d) {
    d.box = j.at("box").get<OrientedBox>();
    d.class_id = j.value("class_id", 0);
    d.score = j.at("score").get<double>();
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_fields(const std::string& row) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(row);
    while (std::getline(in, field, ',')) out.push_back(trim(field));
    if (!row.empty() && row.back() == ',') out.emplace_back();
    return out;
}

double to_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("not a number: '" + s + "'");
    return v;
}

int to_int(const std::string& s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("not an integer: '" + s + "'");
    return v;
}

// Data rows of a CSV text with comments, blanks and header rows removed.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.rfind("cx", 0) == 0 || t.rfind("image", 0) == 0) continue;
        rows.push_back(split_fields(t));
    }
    return rows;
}

OrientedBox box_from_fields(const std::vector<std::string>& f, std::size_t offset) {
    OrientedBox b{to_double(f[offset]), to_double(f[offset + 1]), to_double(f[offset + 2]),
                  to_double(f[offset + 3]), to_double(f[offset + 4])};
    try {
        validate(b);
    } catch (const InvalidInput& e) {
        throw ParseError(e.what());
    }
    return b;
}

bool looks_like_json(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{' || c == '[';
    }
    return false;
}

}  // namespace

std::string to_csv_row(const OrientedBox& b) {
    return num(b.cx) + "," + num(b.cy) + "," + num(b.w) + "," + num(b.h) + "," + num(b.theta);
}

OrientedBox box_from_csv_row(const std::string& row) {
    const auto f = split_fields(trim(row));
    if (f.size() != 5) throw ParseError("box row needs 5 fields: cx,cy,w,h,theta");
    return box_from_fields(f, 0);
}

std::vector<OrientedBox> parse_boxes(const std::string& text) {
    std::vector<OrientedBox> out;
    if (looks_like_json(text)) {
        try {
            const json j = json::parse(text);
            if (j.is_array()) {
                out = j.get<std::vector<OrientedBox>>();
            } else {
                out.push_back(j.get<OrientedBox>());
            }
        } catch (const json::exception& e) {
            throw ParseError(std::string("bad box JSON: ") + e.what());
        }
        for (const OrientedBox& b : out) {
            try {
                validate(b);
            } catch (const InvalidInput& e) {
                throw ParseError(e.what());
            }
        }
        return out;
    }
    for (const auto& f : csv_rows(text)) {
        if (f.size() != 5) throw ParseError("box row needs 5 fields: cx,cy,w,h,theta");
        out.push_back(box_from_fields(f, 0));
    }
    return out;
}

std::vector<OrientedBox> read_boxes(const std::string& path) { return parse_boxes(read_text_file(path)); }

DetectionsByImage parse_detections_csv(const std::string& text) {
    DetectionsByImage out;
    for (const auto& f : csv_rows(text)) {
        if (f.size() != 7 && f.size() != 8) {
            throw ParseError("detection row needs [image,]cx,cy,w,h,theta,class_id,score");
        }
        const std::size_t o = f.size() - 7;
        Detection d;
        d.box = box_from_fields(f, o);
        d.class_id = to_int(f[o + 5]);
        d.score = to_double(f[o + 6]);
        if (!(d.score >= 0.0 && d.score <= 1.0)) throw ParseError("detection score must lie in [0, 1]");
        out[o ? f[0] : "0"].push_back(d);
    }
    return out;
}

GroundTruthByImage parse_ground_truth_csv(const std::string& text) {
    GroundTruthByImage out;
    for (const auto& f : csv_rows(text)) {
        if (f.size() != 5 && f.size() != 6) throw ParseError("truth row needs [image,]cx,cy,w,h,theta");
        const std::size_t o = f.size() - 5;
        out[o ? f[0] : "0"].push_back(box_from_fields(f, o));
    }
    return out;
}

std::string to_csv(const std::vector<Detection>& dets) {
    std::string out = "cx,cy,w,h,theta,class_id,score\n";
    for (const Detection& d : dets) {
        out += to_csv_row(d.box) + "," + std::to_string(d.class_id) + "," + num(d.score) + "\n";
    }
    return out;
}

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
T byteswap_if_big(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
        std::memcpy(&v, b, sizeof(T));
    }
    return v;
}

template <typename T>
void put(std::ostream& out, T v) {
    v = byteswap_if_big(v);
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw ParseError("truncated binary file");
    return byteswap_if_big(v);
}

}  // namespace

void write_prediction_map(std::ostream& out, const PredictionMap& map) {
    validate(map);
    put(out, map.fw);
    put(out, map.fh);
    put(out, map.k);
    put(out, map.c);
    for (float v : map.values) put(out, v);
}

PredictionMap read_prediction_map(std::istream& in) {
    PredictionMap map;
    map.fw = get<std::uint32_t>(in);
    map.fh = get<std::uint32_t>(in);
    map.k = get<std::uint32_t>(in);
    map.c = get<std::uint32_t>(in);
    if (map.fw == 0 || map.fh == 0 || map.k == 0 || map.c == 0 || map.fw > 4096 || map.fh > 4096 ||
        map.k > 4096 || map.c > 4096) {
        throw ParseError("implausible prediction map header");
    }
    map.values.resize(map.expected_size());
    for (float& v : map.values) v = get<float>(in);
    if (in.peek() != std::char_traits<char>::eof()) throw ParseError("trailing bytes after prediction map");
    return map;
}

void to_json(json& j, const PredictionMap& map) {
    j = json{{"fw", map.fw}, {"fh", map.fh}, {"k", map.k}, {"c", map.c}, {"values", map.values}};
}

void from_json(const json& j, PredictionMap& map) {
    map.fw = j.at("fw").get<std::uint32_t>();
    map.fh = j.at("fh").get<std::uint32_t>();
    map.k = j.at("k").get<std::uint32_t>();
    map.c = j.at("c").get<std::uint32_t>();
    map.values = j.at("values").get<std::vector<float>>();
}

PredictionMap load_prediction_map(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    PredictionMap map;
    if (looks_like_json(bytes)) {
        try {
            map = json::parse(bytes).get<PredictionMap>();
        } catch (const json::exception& e) {
            throw ParseError(std::string("bad prediction map JSON: ") + e.what());
        }
    } else {
        std::istringstream s(bytes);
        map = read_prediction_map(s);
    }
    try {
        validate(map);
    } catch (const InvalidInput& e) {
        throw ParseError(e.what());
    }
    return map;
}

void write_point_patch(std::ostream& out, const PointPatch& patch) {
    validate(patch);
    put(out, static_cast<std::uint32_t>(patch.width));
    put(out, static_cast<std::uint32_t>(patch.height));
    for (const PatchPoint& p : patch.points) {
        put(out, static_cast<float>(p.x));
        put(out, static_cast<float>(p.y));
        put(out, static_cast<float>(p.z));
        put(out, static_cast<std::uint8_t>(p.valid ? 1 : 0));
    }
}

PointPatch read_point_patch(std::istream& in) {
    PointPatch patch;
    const auto w = get<std::uint32_t>(in);
    const auto h = get<std::uint32_t>(in);
    if (w == 0 || h == 0 || w > 1u << 14 || h > 1u << 14) throw ParseError("implausible point patch header");
    patch.width = static_cast<int>(w);
    patch.height = static_cast<int>(h);
    patch.points.resize(static_cast<std::size_t>(w) * h);
    for (PatchPoint& p : patch.points) {
        p.x = get<float>(in);
        p.y = get<float>(in);
        p.z = get<float>(in);
        p.valid = get<std::uint8_t>(in) != 0;
    }
    return patch;
}

void to_json(json& j, const PointPatch& patch) {
    json pts = json::array();
    for (const PatchPoint& p : patch.points) pts.push_back(json{p.x, p.y, p.z, p.valid});
    j = json{{"width", patch.width}, {"height", patch.height}, {"points", pts}};
}

void from_json(const json& j, PointPatch& patch) {
    patch.width = j.at("width").get<int>();
    patch.height = j.at("height").get<int>();
    patch.points.clear();
    for (const json& p : j.at("points")) {
        patch.points.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>(),
                                p.at(3).get<bool>()});
    }
    validate(patch);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out) throw Error("write failed for " + path);
}

}  // namespace uam
