#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rba/raster.hpp"

namespace rba {

enum class NodeType { root, bifurcation, endpoint, prune };

std::string_view to_string(NodeType t);
/// Throws FormatError on unknown names.
NodeType parse_node_type(std::string_view name);

/// One row of the keypoint table.
struct KeyPoint {
    int index = 0;
    Point position;
    NodeType type = NodeType::root;
    int step = 0;  // pixels walked from the parent keypoint; 0 for the root
    std::optional<Point> parent_position;
    std::optional<int> parent_index;
    std::vector<Point> children_positions;
    std::vector<int> children_indices;

    friend bool operator==(const KeyPoint&, const KeyPoint&) = default;
};

/// Keypoints in discovery order; nodes[i].index == i.
struct VesselGraph {
    std::vector<KeyPoint> nodes;
    int width = 0;
    int height = 0;

    const KeyPoint* root() const;

    friend bool operator==(const VesselGraph&, const VesselGraph&) = default;
};

enum class BifurcationPredicate {
    /// N(x, y) > T, with N counting the window centre and unvisited neighbours.
    window_count,
    /// Two or more separate runs of unvisited pixels around the window.
    branch_components,
};

struct WalkerParams {
    int neighbor_threshold = 3;  // T
    int prune_step = 10;         // n
    BifurcationPredicate predicate = BifurcationPredicate::branch_components;
    std::optional<std::uint64_t> rng_seed;
    /// Bifurcations fewer than this many pixels below another bifurcation are merged into it.
    int merge_distance = 3;
};

/// Start pixel: uniform over foreground pixels for a given seed, otherwise the
/// first foreground pixel in row-major order. Throws DomainError on an empty mask.
Point pick_initial(const BinaryMask& mask, const WalkerParams& params);

/// Sum of the 3x3 window centred on p, centre included; outside pixels count 0.
int neighbor_count(const BinaryMask& mask, Point p);

struct WalkResult {
    VesselGraph graph;
    /// How many times each pixel was entered by a window (0 outside the start's component).
    Raster<std::uint8_t, struct VisitTag> visits;
    /// Working copy after the walk; visited pixels are erased.
    BinaryMask remaining;
};

/**
 * Sliding-window keypoint walk over a 1-pixel skeleton.
 *
 * Windows are processed breadth-first. Each window erases its pixel from a
 * private working copy, groups the still-unvisited 8-neighbours into runs that
 * are 4-adjacent around the ring, and spawns one window per run (clockwise
 * from north). A window's pixel becomes a keypoint when it is a bifurcation
 * (per the predicate), has no unvisited continuation (endpoint), or its step
 * counter reaches prune_step (prune). The counter restarts after every
 * keypoint. Every pixel 8-connected to `start` is entered exactly once.
 */
WalkResult walk_skeleton(const BinaryMask& mask, Point start, const WalkerParams& params);

/// walk_skeleton(...).graph
VesselGraph detect_keypoints(const BinaryMask& mask, Point start, const WalkerParams& params);

struct NodeCensus {
    int root = 0;
    int bifurcation = 0;
    int endpoint = 0;
    int prune = 0;

    int total() const { return root + bifurcation + endpoint + prune; }
    friend bool operator==(const NodeCensus&, const NodeCensus&) = default;
};

NodeCensus branch_census(const VesselGraph& graph);

/// Checks index density, parent/child symmetry, step >= 1 and acyclicity.
/// Returns an empty string when the graph is well formed.
std::string check_graph(const VesselGraph& graph);

}  // namespace rba
