#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <random>

#include <rba/annostore.hpp>
#include <rba/image_io.hpp>
#include <rba/pipeline.hpp>

namespace rba::testing {
namespace fs = std::filesystem;

void draw_line(BinaryMask& mask, Point a, Point b) {
    int x = a.x, y = a.y;
    const int dx = std::abs(b.x - a.x), dy = -std::abs(b.y - a.y);
    const int sx = a.x < b.x ? 1 : -1, sy = a.y < b.y ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        if (mask.contains(x, y)) mask(x, y) = 1;
        if (x == b.x && y == b.y) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
}

BinaryMask stroke_mask(int width, int height, const std::vector<Segment>& segments, double stroke_width) {
    BinaryMask m(width, height);
    const double r = stroke_width / 2.0;
    for (const Segment& s : segments) {
        const Vec2 d = s.b - s.a;
        const double len2 = dot(d, d);
        const int x0 = std::max(0, static_cast<int>(std::floor(std::min(s.a.x, s.b.x) - r)));
        const int x1 = std::min(width - 1, static_cast<int>(std::ceil(std::max(s.a.x, s.b.x) + r)));
        const int y0 = std::max(0, static_cast<int>(std::floor(std::min(s.a.y, s.b.y) - r)));
        const int y1 = std::min(height - 1, static_cast<int>(std::ceil(std::max(s.a.y, s.b.y) + r)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const Vec2 p{static_cast<double>(x), static_cast<double>(y)};
                const double t = len2 > 0 ? std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0) : 0.0;
                if (distance(p, s.a + t * d) <= r + 1e-9) m(x, y) = 1;
            }
        }
    }
    return m;
}

std::vector<Segment> y_segments(const YShape& s) {
    const double h = s.theta_deg / 2.0 * kPi / 180.0;
    const Vec2 j = s.junction;
    return {
        {j, j + Vec2{0.0, s.trunk_length}},
        {j, j + s.arm_length * Vec2{std::sin(h), -std::cos(h)}},
        {j, j + s.arm_length * Vec2{-std::sin(h), -std::cos(h)}},
    };
}

BinaryMask y_raster(int width, int height, const YShape& shape) {
    return stroke_mask(width, height, y_segments(shape), shape.stroke_width);
}

BinaryMask random_blobs(int width, int height, std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0, width - 1), uy(0, height - 1), ur(2.0, std::min(width, height) / 5.0),
        ua(0, kPi);
    BinaryMask m(width, height);
    for (int i = 0; i < count; ++i) {
        const double cx = ux(rng), cy = uy(rng), rx = ur(rng), ry = ur(rng), ang = ua(rng);
        const double c = std::cos(ang), s = std::sin(ang);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const double dx = x - cx, dy = y - cy;
                const double u = (c * dx + s * dy) / rx, v = (-s * dx + c * dy) / ry;
                if (u * u + v * v <= 1.0) m(x, y) = 1;
            }
        }
    }
    return m;
}

BinaryMask vessel_tree(std::uint64_t seed, int width, int height, int depth) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> spread(25.0, 45.0), jitter(-12.0, 12.0), shrink(0.65, 0.8);
    struct Stroke {
        Segment seg;
        double width;
    };
    std::vector<Stroke> strokes;
    std::function<void(Vec2, double, double, double, int)> grow = [&](Vec2 from, double heading, double len, double w,
                                                                     int level) {
        // a slightly bent branch made of three pieces
        Vec2 p = from;
        double hd = heading;
        for (int k = 0; k < 3; ++k) {
            hd += jitter(rng) * kPi / 180.0 / 3.0;
            const Vec2 q = p + (len / 3.0) * Vec2{std::cos(hd), std::sin(hd)};
            strokes.push_back({{p, q}, w});
            p = q;
        }
        if (level == 0) return;
        const double s1 = spread(rng) * kPi / 180.0, s2 = spread(rng) * kPi / 180.0;
        grow(p, hd - s1, len * shrink(rng), std::max(1.5, w * 0.8), level - 1);
        grow(p, hd + s2, len * shrink(rng), std::max(1.5, w * 0.8), level - 1);
    };
    grow({width / 2.0, height - 5.0}, -kPi / 2.0, height * 0.28, 6.0, depth);
    BinaryMask m(width, height);
    for (const Stroke& s : strokes) {
        const BinaryMask one = stroke_mask(width, height, {s.seg}, s.width);
        for (std::size_t i = 0; i < m.size(); ++i) m.pixels()[i] |= one.pixels()[i];
    }
    return m;
}

BinaryMask polyline(int width, int height, const std::vector<Point>& pts) {
    BinaryMask m(width, height);
    for (std::size_t i = 1; i < pts.size(); ++i) draw_line(m, pts[i - 1], pts[i]);
    if (pts.size() == 1) m[pts[0]] = 1;
    return m;
}

TempDir::TempDir() {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    for (;;) {
        path_ = fs::temp_directory_path() /
                ("rba-test-" + std::to_string(rd()) + "-" + std::to_string(counter.fetch_add(1)));
        if (fs::create_directories(path_)) break;
    }
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

ColorImage synthetic_fundus(const BinaryMask& vessels, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> noise(-6, 6);
    ColorImage img(vessels.width(), vessels.height());
    const double cx = vessels.width() / 2.0, cy = vessels.height() / 2.0;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const double fall = 1.0 - 0.5 * std::hypot(x - cx, y - cy) / std::hypot(cx, cy);
            int r = static_cast<int>(200 * fall) + noise(rng);
            int g = static_cast<int>(110 * fall) + noise(rng);
            int b = static_cast<int>(40 * fall) + noise(rng);
            if (vessels(x, y)) {
                r -= 60;
                g -= 55;
                b -= 10;
            }
            img(x, y) = {static_cast<std::uint8_t>(std::clamp(r, 0, 255)),
                         static_cast<std::uint8_t>(std::clamp(g, 0, 255)),
                         static_cast<std::uint8_t>(std::clamp(b, 0, 255))};
        }
    }
    return img;
}

std::vector<std::string> write_synthetic_corpus(const fs::path& root, int count) {
    fs::create_directories(root / "images");
    fs::create_directories(root / "masks");
    fs::create_directories(root / "annotations");
    std::vector<std::string> ids;
    for (int i = 0; i < count; ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "%02d", i + 1);
        const BinaryMask vessels = vessel_tree(100 + static_cast<std::uint64_t>(i), 160, 170, 3);
        write_png(root / "images" / (std::string(id) + ".png"), synthetic_fundus(vessels, static_cast<std::uint64_t>(i)));
        write_png(root / "masks" / (std::string(id) + ".png"), mask_to_gray(vessels));
        const auto angles = run_method(Method::ours, vessels);
        write_annotations(detections_to_annotations(angles, id, vessels.width(), vessels.height()),
                          root / "annotations" / (std::string(id) + ".json"));
        ids.emplace_back(id);
    }
    return ids;
}

}  // namespace rba::testing
