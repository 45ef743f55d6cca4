#pragma once

#include <span>
#include <vector>

#include "rba/keypoints.hpp"
#include "rba/raster.hpp"

namespace rba {

/// Non-negative bifurcation density; same grid as the source skeleton.
using HeatMap = Raster<double, struct HeatTag>;

/// Integer truncation radius ceil(3 sigma).
int heatmap_radius(double sigma);

/// Sum over bifurcation nodes of exp(-d^2 / (2 sigma^2)) (peak 1 per node),
/// evaluated for pixels with d <= ceil(3 sigma).
HeatMap bifurcation_heatmap(const VesselGraph& graph, double sigma = 21.0);

/// Sum of the per-graph heatmaps on a width x height grid.
HeatMap bifurcation_heatmap(std::span<const VesselGraph> graphs, int width, int height,
                            double sigma = 21.0);

/// Foreground pixel of `skeleton` nearest to the heatmap argmax. Argmax ties go
/// to the lowest row-major index, as do distance ties. Throws
/// NoBifurcationError when the heatmap is zero everywhere.
Point find_root(const HeatMap& heat, const BinaryMask& skeleton);

/// First foreground pixel nearest (Euclidean) to `target`, row-major tie-break.
Point nearest_foreground(const BinaryMask& mask, Vec2 target);

/// Walks the component of pick_initial(), then every remaining component from
/// its first row-major pixel. The first graph always belongs to pick_initial().
std::vector<VesselGraph> detect_all_components(const BinaryMask& mask, const WalkerParams& params);

struct RootedDetection {
    std::vector<VesselGraph> first_pass;
    HeatMap heat;
    VesselGraph graph;  // second pass; root at `root`
    Point root;
    bool fell_back = false;  // first pass found no bifurcation
};

/// First pass over every component from pick_initial(), heatmap of all first-pass
/// bifurcations, find_root, then detect_keypoints from the root. Without any
/// bifurcation the first-pass graph of pick_initial()'s component is returned.
RootedDetection rooted_detection_full(const BinaryMask& mask, const WalkerParams& params,
                                      double sigma = 21.0);

VesselGraph rooted_detection(const BinaryMask& mask, const WalkerParams& params, double sigma = 21.0);

/// Max-normalised 8-bit rendering of a heatmap (all-zero stays zero).
GrayImage heatmap_to_gray(const HeatMap& heat);

}  // namespace rba
