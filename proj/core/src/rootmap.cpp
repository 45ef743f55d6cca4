#include "rba/rootmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rba {

int heatmap_radius(double sigma) { return static_cast<int>(std::ceil(3.0 * sigma)); }

HeatMap bifurcation_heatmap(const VesselGraph& graph, double sigma) {
    if (!(sigma > 0.0)) throw ParameterError("heatmap sigma must be positive");
    HeatMap heat(graph.width, graph.height, 0.0);
    const int r = heatmap_radius(sigma);
    const double r2 = static_cast<double>(r) * r;
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (const KeyPoint& k : graph.nodes) {
        if (k.type != NodeType::bifurcation) continue;
        const int x0 = std::max(0, k.position.x - r);
        const int x1 = std::min(graph.width - 1, k.position.x + r);
        const int y0 = std::max(0, k.position.y - r);
        const int y1 = std::min(graph.height - 1, k.position.y + r);
        for (int y = y0; y <= y1; ++y) {
            const double dy = y - k.position.y;
            for (int x = x0; x <= x1; ++x) {
                const double dx = x - k.position.x;
                const double d2 = dx * dx + dy * dy;
                if (d2 <= r2) heat(x, y) += std::exp(-d2 * inv);
            }
        }
    }
    return heat;
}

Point nearest_foreground(const BinaryMask& mask, Vec2 target) {
    double best = std::numeric_limits<double>::infinity();
    std::optional<Point> out;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask(x, y)) continue;
            const double dx = x - target.x;
            const double dy = y - target.y;
            const double d2 = dx * dx + dy * dy;
            if (d2 < best) {
                best = d2;
                out = Point{x, y};
            }
        }
    }
    if (!out) throw DomainError("mask has no foreground pixel");
    return *out;
}

Point find_root(const HeatMap& heat, const BinaryMask& skeleton) {
    if (heat.width() != skeleton.width() || heat.height() != skeleton.height())
        throw DomainError("heatmap and skeleton dimensions differ");
    std::size_t arg = 0;
    double peak = 0.0;
    for (std::size_t i = 0; i < heat.size(); ++i) {
        if (heat.pixels()[i] > peak) {
            peak = heat.pixels()[i];
            arg = i;
        }
    }
    if (peak <= 0.0) throw NoBifurcationError("heatmap has no bifurcation mass");
    return nearest_foreground(skeleton, heat.point_at(arg));
}

HeatMap bifurcation_heatmap(std::span<const VesselGraph> graphs, int width, int height, double sigma) {
    HeatMap heat(width, height, 0.0);
    for (const VesselGraph& g : graphs) {
        if (g.width != width || g.height != height) throw DomainError("graph dimensions differ");
        const HeatMap part = bifurcation_heatmap(g, sigma);
        for (std::size_t i = 0; i < heat.size(); ++i) heat.pixels()[i] += part.pixels()[i];
    }
    return heat;
}

std::vector<VesselGraph> detect_all_components(const BinaryMask& mask, const WalkerParams& params) {
    std::vector<VesselGraph> out;
    WalkResult walk = walk_skeleton(mask, pick_initial(mask, params), params);
    BinaryMask left = walk.remaining;
    out.push_back(std::move(walk.graph));
    for (std::size_t i = 0; i < left.size(); ++i) {
        if (!left.pixels()[i]) continue;
        walk = walk_skeleton(left, left.point_at(i), params);
        left = std::move(walk.remaining);
        out.push_back(std::move(walk.graph));
    }
    return out;
}

RootedDetection rooted_detection_full(const BinaryMask& mask, const WalkerParams& params, double sigma) {
    RootedDetection out;
    out.first_pass = detect_all_components(mask, params);
    out.heat = bifurcation_heatmap(out.first_pass, mask.width(), mask.height(), sigma);
    try {
        out.root = find_root(out.heat, mask);
    } catch (const NoBifurcationError&) {
        out.graph = out.first_pass.front();
        out.root = out.graph.nodes.front().position;
        out.fell_back = true;
        return out;
    }
    out.graph = detect_keypoints(mask, out.root, params);
    return out;
}

VesselGraph rooted_detection(const BinaryMask& mask, const WalkerParams& params, double sigma) {
    return rooted_detection_full(mask, params, sigma).graph;
}

GrayImage heatmap_to_gray(const HeatMap& heat) {
    double peak = 0.0;
    for (double v : heat.pixels()) peak = std::max(peak, v);
    GrayImage out(heat.width(), heat.height());
    if (peak <= 0.0) return out;
    for (std::size_t i = 0; i < heat.size(); ++i)
        out.pixels()[i] = static_cast<std::uint8_t>(std::lround(heat.pixels()[i] / peak * 255.0));
    return out;
}

}  // namespace rba
