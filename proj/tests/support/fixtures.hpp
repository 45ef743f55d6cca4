#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <rba/raster.hpp>

namespace rba::testing {

/// 8-connected Bresenham segment, clipped to the mask.
void draw_line(BinaryMask& mask, Point a, Point b);

struct Segment {
    Vec2 a;
    Vec2 b;
};

/// Pixels whose centre lies within width / 2 of any segment.
BinaryMask stroke_mask(int width, int height, const std::vector<Segment>& segments, double stroke_width);

/// Y junction: trunk pointing south, arms at +-theta/2 from north.
struct YShape {
    Vec2 junction{100.0, 110.0};
    double theta_deg = 60.0;
    double arm_length = 60.0;
    double trunk_length = 60.0;
    double stroke_width = 3.0;
};

std::vector<Segment> y_segments(const YShape& shape);
BinaryMask y_raster(int width, int height, const YShape& shape);

/// Union of random filled ellipses; deterministic for a seed.
BinaryMask random_blobs(int width, int height, std::uint64_t seed, int count = 6);

/// Branching stroke tree grown from the bottom centre (vessel-like, 565x584 by default).
BinaryMask vessel_tree(std::uint64_t seed, int width = 565, int height = 584, int depth = 6);

/// 1-pixel polyline through the given points.
BinaryMask polyline(int width, int height, const std::vector<Point>& pts);

/// Fresh directory removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// Writes a small synthetic fundus-like corpus (images/, masks/, annotations/) with `count` items.
std::vector<std::string> write_synthetic_corpus(const std::filesystem::path& root, int count = 3);

/// Synthetic color image with a red background and vessel-like darker green strokes.
ColorImage synthetic_fundus(const BinaryMask& vessels, std::uint64_t seed);

}  // namespace rba::testing
