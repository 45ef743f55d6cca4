#include "rba/angles.hpp"

#include <algorithm>
#include <cmath>

namespace rba {
namespace {

int quality_rank(AnchorQuality q) {
    switch (q) {
        case AnchorQuality::prune_pair: return 0;
        case AnchorQuality::mixed: return 1;
        case AnchorQuality::endpoint_pair: return 2;
    }
    return 3;
}

AnchorQuality classify(NodeType a, NodeType c) {
    if (a == NodeType::prune && c == NodeType::prune) return AnchorQuality::prune_pair;
    if (a == NodeType::endpoint && c == NodeType::endpoint) return AnchorQuality::endpoint_pair;
    return AnchorQuality::mixed;
}

Vec2 unit(Vec2 v) {
    const double n = norm(v);
    return n > 0.0 ? (1.0 / n) * v : Vec2{};
}

// Cosine between the pair's bisector and the summed direction of every other
// branch at the node (including the way back to the parent). More negative
// means the pair opens away from the rest of the tree.
double opposition(const VesselGraph& g, const KeyPoint& node, const AnchorPair& pair) {
    const Vec2 p = node.position;
    Vec2 rest{};
    if (node.parent_position) rest = rest + unit(Vec2(*node.parent_position) - p);
    for (int c : node.children_indices) {
        if (c == pair.a_index || c == pair.c_index) continue;
        rest = rest + unit(Vec2(g.nodes[static_cast<std::size_t>(c)].position) - p);
    }
    const Vec2 bis = unit(Vec2(g.nodes[static_cast<std::size_t>(pair.a_index)].position) - p) +
                     unit(Vec2(g.nodes[static_cast<std::size_t>(pair.c_index)].position) - p);
    if (norm(rest) < 1e-9 || norm(bis) < 1e-9) return 0.0;
    return dot(unit(bis), unit(rest));
}

BranchAngle make_angle(const VesselGraph& g, const KeyPoint& node, const AnchorPair& pair) {
    const KeyPoint& a = g.nodes[static_cast<std::size_t>(pair.a_index)];
    const KeyPoint& c = g.nodes[static_cast<std::size_t>(pair.c_index)];
    BranchAngle out;
    out.bifurcation = node.position;
    out.anchor_a = a.position;
    out.anchor_c = c.position;
    out.theta_deg = vector_angle(out.bifurcation, out.anchor_a, out.anchor_c);
    out.anchor_types = std::pair{a.type, c.type};
    out.quality = pair.quality;
    out.bifurcation_index = node.index;
    return out;
}

}  // namespace

std::string_view to_string(AnchorQuality q) {
    switch (q) {
        case AnchorQuality::prune_pair: return "prune_pair";
        case AnchorQuality::mixed: return "mixed";
        case AnchorQuality::endpoint_pair: return "endpoint_pair";
    }
    return "unknown";
}

double vector_angle(Vec2 p, Vec2 a, Vec2 c) {
    const Vec2 v1 = a - p;
    const Vec2 v2 = c - p;
    const double n1 = norm(v1);
    const double n2 = norm(v2);
    if (n1 == 0.0 || n2 == 0.0) throw DomainError("vector_angle: zero-length vector");
    const double cosine = std::clamp(dot(v1, v2) / (n1 * n2), -1.0, 1.0);
    return std::acos(cosine) * 180.0 / kPi;
}

bool is_branching_node(const KeyPoint& node) {
    return node.type == NodeType::bifurcation ||
           (node.type == NodeType::root && node.children_indices.size() >= 3);
}

std::vector<AnchorPair> select_anchors(const VesselGraph& graph, int bif_index) {
    if (bif_index < 0 || bif_index >= static_cast<int>(graph.nodes.size()))
        throw DomainError("select_anchors: index out of range");
    const KeyPoint& node = graph.nodes[static_cast<std::size_t>(bif_index)];
    if (!is_branching_node(node)) throw DomainError("select_anchors: node is not a bifurcation");
    std::vector<AnchorPair> out;
    const auto& ch = node.children_indices;
    for (std::size_t i = 0; i < ch.size(); ++i) {
        for (std::size_t j = i + 1; j < ch.size(); ++j) {
            const NodeType ta = graph.nodes[static_cast<std::size_t>(ch[i])].type;
            const NodeType tc = graph.nodes[static_cast<std::size_t>(ch[j])].type;
            out.push_back({ch[i], ch[j], classify(ta, tc)});
        }
    }
    return out;
}

std::vector<BranchAngle> compute_angle_map(const VesselGraph& graph, AnglePolicy policy) {
    std::vector<BranchAngle> out;
    for (const KeyPoint& node : graph.nodes) {
        if (!is_branching_node(node)) continue;
        const auto pairs = select_anchors(graph, node.index);
        if (pairs.empty()) continue;
        if (policy == AnglePolicy::all) {
            for (const auto& p : pairs) out.push_back(make_angle(graph, node, p));
            continue;
        }
        const Vec2 at = node.position;
        auto min_dist = [&](const AnchorPair& p) {
            return std::min(distance(at, graph.nodes[static_cast<std::size_t>(p.a_index)].position),
                            distance(at, graph.nodes[static_cast<std::size_t>(p.c_index)].position));
        };
        const AnchorPair* best = &pairs.front();
        for (const auto& p : pairs) {
            if (&p == best) continue;
            const int qr = quality_rank(p.quality) - quality_rank(best->quality);
            if (qr != 0) {
                if (qr < 0) best = &p;
                continue;
            }
            const double op = opposition(graph, node, p) - opposition(graph, node, *best);
            if (std::abs(op) > 1e-9) {
                if (op < 0) best = &p;
                continue;
            }
            if (min_dist(p) > min_dist(*best) + 1e-12) best = &p;
        }
        out.push_back(make_angle(graph, node, *best));
    }
    return out;
}

Vec2 fit_in_bounds(Vec2 p, Vec2 anchor, int width, int height) {
    const Vec2 d = anchor - p;
    double s = 1.0;
    auto limit = [&](double from, double delta, double hi) {
        if (from + s * delta > hi) s = std::min(s, (hi - from) / delta);
        if (from + s * delta < 0.0) s = std::min(s, (0.0 - from) / delta);
    };
    limit(p.x, d.x, width - 1.0);
    limit(p.y, d.y, height - 1.0);
    return p + s * d;
}

}  // namespace rba
