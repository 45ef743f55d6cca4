#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rba/angles.hpp"
#include "rba/errors.hpp"
#include "rba/raster.hpp"

namespace rba {

inline constexpr int kSchemaVersion = 1;
inline constexpr double kAngleTolerance = 0.01;  // degrees

/// Three clicked points; b is the bifurcation.
struct AngleAnnotation {
    Vec2 a;
    Vec2 b;
    Vec2 c;
    double angle_deg = 0.0;

    friend bool operator==(const AngleAnnotation&, const AngleAnnotation&) = default;
};

struct AnnotationFile {
    std::string image_id;
    int width = 0;
    int height = 0;
    int schema_version = kSchemaVersion;
    std::vector<AngleAnnotation> annotations;

    friend bool operator==(const AnnotationFile&, const AnnotationFile&) = default;
};

AngleAnnotation make_annotation(Vec2 a, Vec2 b, Vec2 c);

/// Empty when every record holds: points inside the image, non-degenerate
/// rays and a stored angle matching its points to kAngleTolerance.
std::vector<RecordIssue> validate_annotations(const AnnotationFile& file);

/// Throws FormatError on malformed text or missing fields, ValidationError on
/// invariant failures. Records of the form {"points": [ax, ay, bx, by, cx, cy]}
/// are accepted and normalized; their angle is computed when absent.
AnnotationFile parse_annotations(std::string_view text);
std::string serialize_annotations(const AnnotationFile& file);

/// Validates first, then replaces the file atomically.
void write_annotations(const AnnotationFile& file, const std::filesystem::path& path);
AnnotationFile read_annotations(const std::filesystem::path& path);

struct CorpusItem {
    std::string id;
    std::filesystem::path image_path;
    std::filesystem::path annotation_path;
    std::optional<std::filesystem::path> mask_path;
};

struct CorpusListing {
    std::vector<CorpusItem> items;  // sorted by id
    std::vector<std::string> warnings;
};

/// Pairs images/*.{png,jpg,jpeg} with annotations/*.json by stem without
/// decoding anything. Masks are optional and paired by the same stem.
CorpusListing scan_corpus(const std::filesystem::path& images_dir, const std::filesystem::path& annotations_dir,
                          const std::optional<std::filesystem::path>& masks_dir = std::nullopt);

struct CorpusEntry {
    std::string id;
    ColorImage image;
    AnnotationFile annotations;
    std::optional<BinaryMask> mask;
};

struct Corpus {
    std::vector<CorpusEntry> entries;
    std::vector<std::string> warnings;
};

/// scan_corpus followed by decoding. Throws DomainError when nothing pairs up.
Corpus load_corpus(const std::filesystem::path& images_dir, const std::filesystem::path& annotations_dir,
                   const std::optional<std::filesystem::path>& masks_dir = std::nullopt);

AnnotationFile detections_to_annotations(const std::vector<BranchAngle>& angles, std::string image_id, int width,
                                         int height);

}  // namespace rba
