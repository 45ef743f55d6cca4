#include "rba/keypoints.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <random>
#include <string>

namespace rba {
namespace {

// Clockwise from north: N, NE, E, SE, S, SW, W, NW.
constexpr std::array<int, 8> kDx = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr std::array<int, 8> kDy = {-1, -1, 0, 1, 1, 1, 0, -1};

struct Branches {
    int unvisited = 0;
    std::vector<Point> entries;  // one pixel per run, clockwise from north
};

// Runs of consecutive ring cells are exactly the 4-connected groups of the
// neighbourhood; each run is entered through its first orthogonal cell.
Branches find_branches(const BinaryMask& work, Point p) {
    std::array<bool, 8> on{};
    Branches out;
    for (std::size_t i = 0; i < 8; ++i) {
        on[i] = work.value_or(p.x + kDx[i], p.y + kDy[i], 0) != 0;
        out.unvisited += on[i] ? 1 : 0;
    }
    if (out.unvisited == 0) return out;
    if (out.unvisited == 8) {
        out.entries.push_back({p.x, p.y - 1});
        return out;
    }
    // start scanning right after an empty cell so runs never wrap
    std::size_t start = 0;
    while (on[start]) ++start;
    std::vector<int> chosen;
    for (std::size_t k = 1; k <= 8; ++k) {
        const std::size_t i = (start + k) % 8;
        if (!on[i]) continue;
        const std::size_t prev = (i + 7) % 8;
        if (on[prev]) continue;  // not the first cell of its run
        int pick = -1;
        for (std::size_t j = i; on[j]; j = (j + 1) % 8) {
            if (j % 2 == 0) {
                pick = static_cast<int>(j);
                break;
            }
            if ((j + 1) % 8 == i) break;
        }
        if (pick < 0) pick = static_cast<int>(i);
        chosen.push_back(pick);
    }
    std::sort(chosen.begin(), chosen.end());
    for (int c : chosen) {
        out.entries.push_back({p.x + kDx[static_cast<std::size_t>(c)], p.y + kDy[static_cast<std::size_t>(c)]});
    }
    return out;
}

struct Window {
    Point pos;
    int parent;
    int steps;
};

struct RawNode {
    Point pos;
    NodeType type;
    int step;
    int parent;  // -1 for root
    std::vector<int> children;
    bool alive = true;
};

void merge_clusters(std::vector<RawNode>& nodes, int merge_distance) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        RawNode& b = nodes[i];
        if (!b.alive || b.type != NodeType::bifurcation || b.parent < 0) continue;
        RawNode& up = nodes[static_cast<std::size_t>(b.parent)];
        if (up.type != NodeType::bifurcation && up.type != NodeType::root) continue;
        if (b.step >= merge_distance) continue;
        auto it = std::find(up.children.begin(), up.children.end(), static_cast<int>(i));
        it = up.children.erase(it);
        for (int c : b.children) {
            nodes[static_cast<std::size_t>(c)].parent = b.parent;
            nodes[static_cast<std::size_t>(c)].step += b.step;
        }
        up.children.insert(it, b.children.begin(), b.children.end());
        b.children.clear();
        b.alive = false;
    }
}

VesselGraph finalize(const std::vector<RawNode>& raw, int width, int height) {
    std::vector<int> remap(raw.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (raw[i].alive) remap[i] = next++;
    VesselGraph g;
    g.width = width;
    g.height = height;
    g.nodes.reserve(static_cast<std::size_t>(next));
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const RawNode& r = raw[i];
        if (!r.alive) continue;
        KeyPoint k;
        k.index = remap[i];
        k.position = r.pos;
        k.type = r.type;
        k.step = r.step;
        if (r.parent >= 0) {
            k.parent_index = remap[static_cast<std::size_t>(r.parent)];
            k.parent_position = raw[static_cast<std::size_t>(r.parent)].pos;
        }
        for (int c : r.children) {
            k.children_indices.push_back(remap[static_cast<std::size_t>(c)]);
            k.children_positions.push_back(raw[static_cast<std::size_t>(c)].pos);
        }
        g.nodes.push_back(std::move(k));
    }
    return g;
}

}  // namespace

std::string_view to_string(NodeType t) {
    switch (t) {
        case NodeType::root: return "root";
        case NodeType::bifurcation: return "bifurcation";
        case NodeType::endpoint: return "endpoint";
        case NodeType::prune: return "prune";
    }
    return "unknown";
}

NodeType parse_node_type(std::string_view name) {
    if (name == "root") return NodeType::root;
    if (name == "bifurcation") return NodeType::bifurcation;
    if (name == "endpoint") return NodeType::endpoint;
    if (name == "prune") return NodeType::prune;
    throw FormatError("unknown node type: " + std::string(name));
}

const KeyPoint* VesselGraph::root() const {
    for (const auto& n : nodes)
        if (n.type == NodeType::root) return &n;
    return nullptr;
}

Point pick_initial(const BinaryMask& mask, const WalkerParams& params) {
    if (!params.rng_seed) {
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (mask.pixels()[i]) return mask.point_at(i);
        throw DomainError("pick_initial: mask has no foreground pixel");
    }
    std::vector<std::size_t> fg;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask.pixels()[i]) fg.push_back(i);
    if (fg.empty()) throw DomainError("pick_initial: mask has no foreground pixel");
    std::mt19937_64 rng(*params.rng_seed);
    return mask.point_at(fg[static_cast<std::size_t>(rng() % fg.size())]);
}

int neighbor_count(const BinaryMask& mask, Point p) {
    if (!mask.contains(p)) throw DomainError("neighbor_count: point out of bounds");
    int n = 0;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) n += mask.value_or(p.x + dx, p.y + dy, 0) ? 1 : 0;
    return n;
}

WalkResult walk_skeleton(const BinaryMask& mask, Point start, const WalkerParams& params) {
    if (params.neighbor_threshold < 1) throw ParameterError("neighbor threshold must be >= 1");
    if (params.prune_step < 2) throw ParameterError("prune step must be >= 2");
    if (!mask.contains(start) || !mask[start]) throw DomainError("detect_keypoints: start is not a foreground pixel");

    WalkResult res{{}, Raster<std::uint8_t, VisitTag>(mask.width(), mask.height()), mask};
    BinaryMask& work = res.remaining;
    auto& visits = res.visits;
    std::vector<RawNode> nodes;
    std::deque<Window> queue;

    auto enter = [&](Point p) {
        work[p] = 0;
        ++visits[p];
    };
    auto spawn = [&](const Branches& br, int parent, int steps) {
        for (const Point& e : br.entries) {
            enter(e);
            queue.push_back({e, parent, steps});
        }
    };

    enter(start);
    nodes.push_back({start, NodeType::root, 0, -1, {}});
    spawn(find_branches(work, start), 0, 1);

    while (!queue.empty()) {
        const Window w = queue.front();
        queue.pop_front();
        const Branches br = find_branches(work, w.pos);

        const bool bifurcation = params.predicate == BifurcationPredicate::branch_components
                                     ? br.entries.size() >= 2
                                     : 1 + br.unvisited > params.neighbor_threshold;
        std::optional<NodeType> kind;
        if (bifurcation) {
            kind = NodeType::bifurcation;
        } else if (br.entries.empty()) {
            kind = NodeType::endpoint;
        } else if (w.steps >= params.prune_step) {
            kind = NodeType::prune;
        }

        if (kind) {
            const int idx = static_cast<int>(nodes.size());
            nodes.push_back({w.pos, *kind, w.steps, w.parent, {}});
            nodes[static_cast<std::size_t>(w.parent)].children.push_back(idx);
            spawn(br, idx, 1);
        } else {
            spawn(br, w.parent, w.steps + 1);
        }
    }

    merge_clusters(nodes, params.merge_distance);
    res.graph = finalize(nodes, mask.width(), mask.height());
    return res;
}

VesselGraph detect_keypoints(const BinaryMask& mask, Point start, const WalkerParams& params) {
    return walk_skeleton(mask, start, params).graph;
}

NodeCensus branch_census(const VesselGraph& graph) {
    NodeCensus c;
    for (const auto& n : graph.nodes) {
        switch (n.type) {
            case NodeType::root: ++c.root; break;
            case NodeType::bifurcation: ++c.bifurcation; break;
            case NodeType::endpoint: ++c.endpoint; break;
            case NodeType::prune: ++c.prune; break;
        }
    }
    return c;
}

std::string check_graph(const VesselGraph& graph) {
    const int n = static_cast<int>(graph.nodes.size());
    int roots = 0;
    for (int i = 0; i < n; ++i) {
        const KeyPoint& k = graph.nodes[static_cast<std::size_t>(i)];
        if (k.index != i) return "index " + std::to_string(i) + " out of order";
        if (k.children_indices.size() != k.children_positions.size()) return "child lists differ in length";
        if (!k.parent_index) {
            ++roots;
            if (k.parent_position) return "parentless node carries a parent position";
            continue;
        }
        const int p = *k.parent_index;
        if (p < 0 || p >= n) return "parent index out of range at node " + std::to_string(i);
        const KeyPoint& up = graph.nodes[static_cast<std::size_t>(p)];
        if (!k.parent_position || *k.parent_position != up.position) return "parent position mismatch at node " + std::to_string(i);
        if (std::count(up.children_indices.begin(), up.children_indices.end(), i) != 1)
            return "node " + std::to_string(i) + " missing from its parent's children";
        if (k.step < 1) return "non-root node with step < 1 at " + std::to_string(i);
    }
    for (int i = 0; i < n; ++i) {
        const KeyPoint& k = graph.nodes[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < k.children_indices.size(); ++j) {
            const int c = k.children_indices[j];
            if (c < 0 || c >= n) return "child index out of range at node " + std::to_string(i);
            const KeyPoint& child = graph.nodes[static_cast<std::size_t>(c)];
            if (child.parent_index != i) return "child " + std::to_string(c) + " does not point back";
            if (k.children_positions[j] != child.position) return "child position mismatch";
        }
        // walk up; a chain longer than n means a cycle
        int cur = i;
        int hops = 0;
        while (graph.nodes[static_cast<std::size_t>(cur)].parent_index) {
            cur = *graph.nodes[static_cast<std::size_t>(cur)].parent_index;
            if (++hops > n) return "cycle through node " + std::to_string(i);
        }
    }
    if (n > 0 && roots != 1) return "expected exactly one root, found " + std::to_string(roots);
    return {};
}

}  // namespace rba
