#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "rba/keypoints.hpp"
#include "rba/raster.hpp"

namespace rba {

enum class AnchorQuality { prune_pair, mixed, endpoint_pair };

std::string_view to_string(AnchorQuality q);

/// One branching angle: the angle at `bifurcation` between the rays to the two anchors.
struct BranchAngle {
    Vec2 bifurcation;
    Vec2 anchor_a;
    Vec2 anchor_c;
    double theta_deg = 0.0;
    /// Set for graph-based detections; baselines leave these empty.
    std::optional<std::pair<NodeType, NodeType>> anchor_types;
    std::optional<AnchorQuality> quality;
    std::optional<int> bifurcation_index;
};

/**
 * Angle in degrees between v1 = a - p and v2 = c - p:
 * acos(v1 . v2 / (|v1| |v2|)) with the cosine clamped to [-1, 1].
 * Throws DomainError when either vector has zero length.
 */
double vector_angle(Vec2 p, Vec2 a, Vec2 c);

struct AnchorPair {
    int a_index = 0;  // graph node indices of the two anchors
    int c_index = 0;
    AnchorQuality quality = AnchorQuality::mixed;
};

/// True for bifurcation nodes and for a root with three or more branches
/// (the walk started on a junction).
bool is_branching_node(const KeyPoint& node);

/// One pair per unordered pair of outgoing branches; each branch is anchored at
/// its first downstream keypoint. Throws DomainError for non-branching nodes.
std::vector<AnchorPair> select_anchors(const VesselGraph& graph, int bif_index);

enum class AnglePolicy { prune_preferred, all };

/**
 * prune_preferred emits one angle per branching node: the best pair by
 * quality (prune_pair, then mixed, then endpoint_pair), then by how squarely
 * the pair's bisector points away from the node's remaining branches, then
 * by the larger minimum anchor distance. `all` emits every pair.
 * Output is ordered by node index.
 */
std::vector<BranchAngle> compute_angle_map(const VesselGraph& graph,
                                           AnglePolicy policy = AnglePolicy::prune_preferred);

/// Draws both anchor rays and a numeric label per angle on a copy of the image.
/// Throws DomainError when a point lies outside the image.
ColorImage render_angle_overlay(const ColorImage& img, const std::vector<BranchAngle>& angles);
ColorImage render_angle_overlay(const BinaryMask& mask, const std::vector<BranchAngle>& angles);

/// Shrinks `anchor - p` until the anchor lies inside [0, w-1] x [0, h-1]. The
/// angle at p is unchanged.
Vec2 fit_in_bounds(Vec2 p, Vec2 anchor, int width, int height);

}  // namespace rba
