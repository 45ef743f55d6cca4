#include "rba/annostore.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "json.hpp"
#include "rba/image_io.hpp"
#include "rba/skeleton.hpp"

namespace rba {
namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

AngleAnnotation make_annotation(Vec2 a, Vec2 b, Vec2 c) { return {a, b, c, vector_angle(b, a, c)}; }

std::vector<RecordIssue> validate_annotations(const AnnotationFile& file) {
    std::vector<RecordIssue> issues;
    if (file.image_id.empty()) issues.push_back({-1, "image_id is empty"});
    if (file.width <= 0 || file.height <= 0) issues.push_back({-1, "image dimensions must be positive"});
    if (file.schema_version != kSchemaVersion)
        issues.push_back({-1, "unsupported schema_version " + std::to_string(file.schema_version)});
    auto inside = [&](Vec2 p) { return p.x >= 0 && p.y >= 0 && p.x <= file.width - 1 && p.y <= file.height - 1; };
    for (std::size_t i = 0; i < file.annotations.size(); ++i) {
        const auto& r = file.annotations[i];
        const int idx = static_cast<int>(i);
        const std::pair<char, Vec2> pts[] = {{'a', r.a}, {'b', r.b}, {'c', r.c}};
        bool ok = true;
        for (const auto& [name, p] : pts) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y) || !inside(p)) {
                issues.push_back({idx, std::string("point ") + name + " outside the image"});
                ok = false;
            }
        }
        if (!ok) continue;
        if (r.a == r.b || r.c == r.b) {
            issues.push_back({idx, "a or c coincides with the bifurcation b"});
            continue;
        }
        const double expect = vector_angle(r.b, r.a, r.c);
        if (!(std::abs(expect - r.angle_deg) <= kAngleTolerance)) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "stored angle %.4f does not match points (%.4f)", r.angle_deg, expect);
            issues.push_back({idx, buf});
        }
    }
    return issues;
}

namespace {

Vec2 read_point(const ojson& j, const char* key, int index) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
        throw FormatError("annotation " + std::to_string(index) + ": field '" + key + "' must be [x, y]");
    return {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

AngleAnnotation read_record(const ojson& j, int index) {
    if (!j.is_object()) throw FormatError("annotation " + std::to_string(index) + " is not an object");
    AngleAnnotation r;
    const auto angle = j.find("angle_deg");
    if (angle != j.end() && !angle->is_number())
        throw FormatError("annotation " + std::to_string(index) + ": angle_deg must be a number");
    if (const auto pts = j.find("points"); pts != j.end()) {
        if (!pts->is_array() || pts->size() != 6 ||
            !std::all_of(pts->begin(), pts->end(), [](const ojson& v) { return v.is_number(); }))
            throw FormatError("annotation " + std::to_string(index) + ": points must hold six numbers");
        const auto v = [&](std::size_t k) { return (*pts)[k].get<double>(); };
        r.a = {v(0), v(1)};
        r.b = {v(2), v(3)};
        r.c = {v(4), v(5)};
        if (angle != j.end()) {
            r.angle_deg = angle->get<double>();
        } else if (r.a != r.b && r.c != r.b) {
            r.angle_deg = vector_angle(r.b, r.a, r.c);
        }
        return r;
    }
    r.a = read_point(j, "a", index);
    r.b = read_point(j, "b", index);
    r.c = read_point(j, "c", index);
    if (angle == j.end()) throw FormatError("annotation " + std::to_string(index) + ": missing angle_deg");
    r.angle_deg = angle->get<double>();
    return r;
}

int read_int(const ojson& doc, const char* key) {
    const auto it = doc.find(key);
    if (it == doc.end()) throw FormatError(std::string("missing field '") + key + "'");
    if (!it->is_number_integer()) throw FormatError(std::string("field '") + key + "' must be an integer");
    return it->get<int>();
}

}  // namespace

AnnotationFile parse_annotations(std::string_view text) {
    ojson doc;
    try {
        doc = ojson::parse(text);
    } catch (const ojson::parse_error& e) {
        throw FormatError(std::string("annotation document does not parse: ") + e.what());
    }
    if (!doc.is_object()) throw FormatError("annotation document must be an object");
    AnnotationFile f;
    const auto id = doc.find("image_id");
    if (id == doc.end() || !id->is_string()) throw FormatError("missing field 'image_id'");
    f.image_id = id->get<std::string>();
    f.width = read_int(doc, "width");
    f.height = read_int(doc, "height");
    f.schema_version = read_int(doc, "schema_version");
    const auto list = doc.find("annotations");
    if (list == doc.end() || !list->is_array()) throw FormatError("missing field 'annotations'");
    int index = 0;
    for (const ojson& rec : *list) f.annotations.push_back(read_record(rec, index++));
    if (auto issues = validate_annotations(f); !issues.empty()) throw ValidationError(std::move(issues));
    return f;
}

std::string serialize_annotations(const AnnotationFile& file) {
    if (auto issues = validate_annotations(file); !issues.empty()) throw ValidationError(std::move(issues));
    ojson doc;
    doc["image_id"] = file.image_id;
    doc["width"] = file.width;
    doc["height"] = file.height;
    doc["schema_version"] = file.schema_version;
    ojson list = ojson::array();
    for (const auto& r : file.annotations) {
        ojson rec;
        rec["a"] = {r.a.x, r.a.y};
        rec["b"] = {r.b.x, r.b.y};
        rec["c"] = {r.c.x, r.c.y};
        rec["angle_deg"] = r.angle_deg;
        list.push_back(std::move(rec));
    }
    doc["annotations"] = std::move(list);
    return doc.dump(2) + "\n";
}

void write_annotations(const AnnotationFile& file, const fs::path& path) {
    const std::string text = serialize_annotations(file);
    write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

AnnotationFile read_annotations(const fs::path& path) {
    const auto bytes = read_file_bytes(path);
    return parse_annotations(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::map<std::string, fs::path> files_by_stem(const fs::path& dir, const std::set<std::string>& exts,
                                              std::vector<std::string>& warnings) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::map<std::string, fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file() || !exts.count(lower(e.path().extension().string()))) continue;
        const std::string stem = e.path().stem().string();
        auto [it, fresh] = out.emplace(stem, e.path());
        if (!fresh) {
            // keep the lexicographically first file for a duplicated stem
            if (e.path() < it->second) it->second = e.path();
            warnings.push_back("duplicate stem '" + stem + "' in " + dir.string());
        }
    }
    return out;
}

}  // namespace

CorpusListing scan_corpus(const fs::path& images_dir, const fs::path& annotations_dir,
                          const std::optional<fs::path>& masks_dir) {
    CorpusListing out;
    const auto images = files_by_stem(images_dir, {".png", ".jpg", ".jpeg"}, out.warnings);
    const auto annos = files_by_stem(annotations_dir, {".json"}, out.warnings);
    std::map<std::string, fs::path> masks;
    if (masks_dir && fs::is_directory(*masks_dir)) masks = files_by_stem(*masks_dir, {".png"}, out.warnings);
    for (const auto& [stem, img] : images) {
        auto a = annos.find(stem);
        if (a == annos.end()) {
            out.warnings.push_back("image without annotations: " + stem);
            continue;
        }
        CorpusItem item{stem, img, a->second, std::nullopt};
        if (auto m = masks.find(stem); m != masks.end()) item.mask_path = m->second;
        out.items.push_back(std::move(item));
    }
    for (const auto& [stem, path] : annos)
        if (!images.count(stem)) out.warnings.push_back("annotations without image: " + stem);
    return out;
}

Corpus load_corpus(const fs::path& images_dir, const fs::path& annotations_dir,
                   const std::optional<fs::path>& masks_dir) {
    CorpusListing listing = scan_corpus(images_dir, annotations_dir, masks_dir);
    if (listing.items.empty()) throw DomainError("empty corpus: no image has a matching annotation file");
    Corpus c;
    c.warnings = std::move(listing.warnings);
    for (const CorpusItem& item : listing.items) {
        CorpusEntry e;
        e.id = item.id;
        e.image = load_image(item.image_path);
        e.annotations = read_annotations(item.annotation_path);
        if (item.mask_path) e.mask = binarize(load_gray(*item.mask_path));
        c.entries.push_back(std::move(e));
    }
    return c;
}

AnnotationFile detections_to_annotations(const std::vector<BranchAngle>& angles, std::string image_id, int width,
                                         int height) {
    AnnotationFile f;
    f.image_id = std::move(image_id);
    f.width = width;
    f.height = height;
    for (const BranchAngle& a : angles) f.annotations.push_back(make_annotation(a.anchor_a, a.bifurcation, a.anchor_c));
    return f;
}

}  // namespace rba
