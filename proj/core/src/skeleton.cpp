#include "rba/skeleton.hpp"

#include <array>
#include <queue>

namespace rba {
namespace {

// Clockwise from north: N, NE, E, SE, S, SW, W, NW.
constexpr std::array<int, 8> kDx = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr std::array<int, 8> kDy = {-1, -1, 0, 1, 1, 1, 0, -1};

std::array<bool, 8> ring(const BinaryMask& m, int x, int y) {
    std::array<bool, 8> r{};
    for (int i = 0; i < 8; ++i) r[static_cast<std::size_t>(i)] = m.value_or(x + kDx[static_cast<std::size_t>(i)], y + kDy[static_cast<std::size_t>(i)], 0) != 0;
    return r;
}

bool adjacent8(int i, int j) {
    return std::abs(kDx[static_cast<std::size_t>(i)] - kDx[static_cast<std::size_t>(j)]) <= 1 &&
           std::abs(kDy[static_cast<std::size_t>(i)] - kDy[static_cast<std::size_t>(j)]) <= 1;
}

bool adjacent4(int i, int j) {
    return std::abs(kDx[static_cast<std::size_t>(i)] - kDx[static_cast<std::size_t>(j)]) +
               std::abs(kDy[static_cast<std::size_t>(i)] - kDy[static_cast<std::size_t>(j)]) == 1;
}

// Components among ring cells selected by `want`, optionally restricted to
// those containing at least one cell flagged in `seed`.
int ring_components(const std::array<bool, 8>& want, bool four, const std::array<bool, 8>* seed) {
    std::array<int, 8> comp{};
    comp.fill(-1);
    int n = 0;
    int counted = 0;
    for (int s = 0; s < 8; ++s) {
        if (!want[static_cast<std::size_t>(s)] || comp[static_cast<std::size_t>(s)] >= 0) continue;
        bool has_seed = false;
        std::array<int, 8> stack{};
        int top = 0;
        stack[static_cast<std::size_t>(top++)] = s;
        comp[static_cast<std::size_t>(s)] = n;
        while (top > 0) {
            const int c = stack[static_cast<std::size_t>(--top)];
            if (seed && (*seed)[static_cast<std::size_t>(c)]) has_seed = true;
            for (int o = 0; o < 8; ++o) {
                if (!want[static_cast<std::size_t>(o)] || comp[static_cast<std::size_t>(o)] >= 0) continue;
                if (four ? adjacent4(c, o) : adjacent8(c, o)) {
                    comp[static_cast<std::size_t>(o)] = n;
                    stack[static_cast<std::size_t>(top++)] = o;
                }
            }
        }
        ++n;
        if (!seed || has_seed) ++counted;
    }
    return counted;
}

bool is_simple(const std::array<bool, 8>& fg) {
    if (ring_components(fg, false, nullptr) != 1) return false;
    std::array<bool, 8> bg{};
    for (std::size_t i = 0; i < 8; ++i) bg[i] = !fg[i];
    // background components that touch the centre through an edge
    static constexpr std::array<bool, 8> edge = {true, false, true, false, true, false, true, false};
    return ring_components(bg, true, &edge) == 1;
}

int count(const std::array<bool, 8>& r) {
    int n = 0;
    for (bool b : r) n += b ? 1 : 0;
    return n;
}

// Zhang-Suen deletion test for one sub-iteration.
bool zhang_suen_candidate(const std::array<bool, 8>& p, int pass) {
    const int b = count(p);
    if (b < 2 || b > 6) return false;
    int a = 0;
    for (std::size_t i = 0; i < 8; ++i) a += (!p[i] && p[(i + 1) % 8]) ? 1 : 0;
    if (a != 1) return false;
    const bool n = p[0], e = p[2], s = p[4], w = p[6];
    if (pass == 0) return !(n && e && s) && !(e && s && w);
    return !(n && e && w) && !(n && s && w);
}

bool is_redundant_corner(const std::array<bool, 8>& p) {
    const bool n = p[0], e = p[2], s = p[4], w = p[6];
    return (n && e) || (e && s) || (s && w) || (w && n);
}

bool zhang_suen_pass(BinaryMask& m) {
    bool changed = false;
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<Point> candidates;
        for (int y = 0; y < m.height(); ++y)
            for (int x = 0; x < m.width(); ++x)
                if (m(x, y) && zhang_suen_candidate(ring(m, x, y), pass)) candidates.push_back({x, y});
        for (const Point& c : candidates) {
            const auto r = ring(m, c.x, c.y);
            if (count(r) >= 2 && is_simple(r)) {
                m[c] = 0;
                changed = true;
            }
        }
    }
    return changed;
}

bool corner_pass(BinaryMask& m) {
    bool changed = false;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (!m(x, y)) continue;
            const auto r = ring(m, x, y);
            if (count(r) >= 2 && is_redundant_corner(r) && is_simple(r)) {
                m(x, y) = 0;
                changed = true;
            }
        }
    }
    return changed;
}

}  // namespace

BinaryMask binarize(const GrayImage& img, std::uint8_t threshold) {
    BinaryMask out(img.width(), img.height());
    for (std::size_t i = 0; i < out.size(); ++i) out.pixels()[i] = img.pixels()[i] >= threshold ? 1 : 0;
    return out;
}

bool is_simple_point(const BinaryMask& mask, int x, int y) { return is_simple(ring(mask, x, y)); }

int foreground_neighbors(const BinaryMask& mask, int x, int y) { return count(ring(mask, x, y)); }

BinaryMask thin(const BinaryMask& mask) {
    BinaryMask m = mask;
    for (;;) {
        while (zhang_suen_pass(m)) {
        }
        bool any = false;
        while (corner_pass(m)) any = true;
        if (!any) break;
    }
    return m;
}

ComponentLabels label_components(const BinaryMask& mask) {
    ComponentLabels out{LabelImage(mask.width(), mask.height(), -1), {}};
    std::queue<Point> q;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask(x, y) || out.labels(x, y) >= 0) continue;
            const int label = static_cast<int>(out.sizes.size());
            out.sizes.push_back(0);
            out.labels(x, y) = label;
            q.push({x, y});
            while (!q.empty()) {
                const Point p = q.front();
                q.pop();
                ++out.sizes.back();
                for (std::size_t i = 0; i < 8; ++i) {
                    const int nx = p.x + kDx[i];
                    const int ny = p.y + kDy[i];
                    if (mask.value_or(nx, ny, 0) && out.labels(nx, ny) < 0) {
                        out.labels(nx, ny) = label;
                        q.push({nx, ny});
                    }
                }
            }
        }
    }
    return out;
}

int count_components(const BinaryMask& mask) {
    return static_cast<int>(label_components(mask).sizes.size());
}

BinaryMask component_of(const BinaryMask& mask, Point seed) {
    BinaryMask out(mask.width(), mask.height());
    if (!mask.contains(seed) || !mask[seed]) return out;
    std::queue<Point> q;
    out[seed] = 1;
    q.push(seed);
    while (!q.empty()) {
        const Point p = q.front();
        q.pop();
        for (std::size_t i = 0; i < 8; ++i) {
            const Point n{p.x + kDx[i], p.y + kDy[i]};
            if (mask.value_or(n.x, n.y, 0) && !out[n]) {
                out[n] = 1;
                q.push(n);
            }
        }
    }
    return out;
}

BinaryMask remove_small_components(const BinaryMask& mask, int min_size) {
    const ComponentLabels cc = label_components(mask);
    BinaryMask out = mask;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int l = cc.labels.pixels()[i];
        if (l >= 0 && cc.sizes[static_cast<std::size_t>(l)] < min_size) out.pixels()[i] = 0;
    }
    return out;
}

BinaryMask skeletonize(const GrayImage& segmentation, const SkeletonParams& params) {
    return remove_small_components(thin(binarize(segmentation, params.threshold)), params.min_component);
}

}  // namespace rba
