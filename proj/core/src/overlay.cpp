#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "rba/angles.hpp"

namespace rba {
namespace {

// 3x5 glyphs, one row per entry, bit 2 = leftmost column.
constexpr std::array<std::array<std::uint8_t, 5>, 11> kGlyphs = {{
    {7, 5, 5, 5, 7},  // 0
    {2, 6, 2, 2, 7},  // 1
    {7, 1, 7, 4, 7},  // 2
    {7, 1, 7, 1, 7},  // 3
    {5, 5, 7, 1, 1},  // 4
    {7, 4, 7, 1, 7},  // 5
    {7, 4, 7, 5, 7},  // 6
    {7, 1, 1, 1, 1},  // 7
    {7, 5, 7, 5, 7},  // 8
    {7, 5, 7, 1, 7},  // 9
    {0, 0, 0, 0, 2},  // .
}};

constexpr Rgb kRay{0, 255, 255};
constexpr Rgb kVertex{255, 0, 0};
constexpr Rgb kText{255, 255, 0};

void plot(ColorImage& img, int x, int y, Rgb c) {
    if (img.contains(x, y)) img(x, y) = c;
}

void draw_line(ColorImage& img, Point a, Point b, Rgb c) {
    int dx = std::abs(b.x - a.x), sx = a.x < b.x ? 1 : -1;
    int dy = -std::abs(b.y - a.y), sy = a.y < b.y ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        plot(img, a.x, a.y, c);
        if (a == b) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            a.x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            a.y += sy;
        }
    }
}

void draw_text(ColorImage& img, int x, int y, const std::string& s, Rgb c) {
    for (char ch : s) {
        const int g = ch == '.' ? 10 : (ch >= '0' && ch <= '9' ? ch - '0' : -1);
        if (g >= 0) {
            for (int row = 0; row < 5; ++row)
                for (int col = 0; col < 3; ++col)
                    if (kGlyphs[static_cast<std::size_t>(g)][static_cast<std::size_t>(row)] & (4 >> col))
                        plot(img, x + col, y + row, c);
        }
        x += 4;
    }
}

Point to_pixel(Vec2 v) { return {static_cast<int>(std::lround(v.x)), static_cast<int>(std::lround(v.y))}; }

bool inside(const ColorImage& img, Vec2 v) {
    return v.x >= 0.0 && v.y >= 0.0 && v.x <= img.width() - 1.0 && v.y <= img.height() - 1.0;
}

}  // namespace

ColorImage render_angle_overlay(const ColorImage& img, const std::vector<BranchAngle>& angles) {
    for (const auto& a : angles) {
        if (!inside(img, a.bifurcation) || !inside(img, a.anchor_a) || !inside(img, a.anchor_c))
            throw DomainError("render_angle_overlay: angle point outside the image");
    }
    ColorImage out = img;
    for (const auto& a : angles) {
        const Point b = to_pixel(a.bifurcation);
        draw_line(out, b, to_pixel(a.anchor_a), kRay);
        draw_line(out, b, to_pixel(a.anchor_c), kRay);
        plot(out, b.x, b.y, kVertex);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", a.theta_deg);
        const std::string label = buf;
        const int tw = static_cast<int>(label.size()) * 4;
        const int tx = std::clamp(b.x + 3, 0, std::max(0, img.width() - tw));
        const int ty = std::clamp(b.y - 8, 0, std::max(0, img.height() - 5));
        draw_text(out, tx, ty, label, kText);
    }
    return out;
}

ColorImage render_angle_overlay(const BinaryMask& mask, const std::vector<BranchAngle>& angles) {
    return render_angle_overlay(mask_to_color(mask), angles);
}

}  // namespace rba
