#pragma once

#include <vector>

#include "rba/angles.hpp"
#include "rba/raster.hpp"

namespace rba {

struct LineSegment {
    Vec2 a;
    Vec2 b;
};

struct LineDetectionParams {
    int min_segment_length = 20;   // px
    double line_tolerance = 1.0;   // max pixel distance from a voted line
    int max_gap = 3;               // px along the line before a run is split
    double foreground_reach = 2.0; // intersection must be this close to foreground
    double segment_reach = 5.0;    // ... and this close to both segments
    double min_separation_deg = 10.0;
};

/// Straight runs on the thinned mask found by repeated peak extraction from a
/// (theta, rho) vote accumulator with 1 degree and 1 pixel bins.
std::vector<LineSegment> detect_line_segments(const BinaryMask& skeleton,
                                              const LineDetectionParams& params = {});

/// Line-detection baseline: every pair of segments whose lines cross next to
/// both segments and next to the mask yields an angle between the far ends.
std::vector<BranchAngle> line_detection_method(const BinaryMask& mask,
                                               const LineDetectionParams& params = {});

/// Pixels of the root's component whose 3x3 window sum (centre included) reaches `neighbor_thresh`.
std::vector<Point> roi_candidates(const BinaryMask& mask, Point root, int neighbor_thresh = 5);

/**
 * ROI-window baseline. Candidate pixels are grouped into 8-connected clusters;
 * each cluster is one bifurcation located at its pixel nearest the centroid.
 * Branches are the mask components inside the roi x roi window around it that
 * touch the cluster; the branch the trace from `root` arrived through is the
 * parent and is skipped. A branch's vector tail is its farthest pixel on the
 * window border, or its farthest pixel overall when it ends inside the window.
 */
std::vector<BranchAngle> roi_window_method(const BinaryMask& mask, Point root,
                                           int neighbor_thresh = 5, int roi = 50);

/**
 * Rule-based baseline on the thinned mask: pixels whose 3x3 window holds more
 * than three foreground pixels form junction clusters; each branch direction
 * is the least-squares axis of its first `tangent_window` pixels. The most
 * acute pair is reported, folded to at most 90 degrees.
 */
std::vector<BranchAngle> rule_based_method(const BinaryMask& mask, int tangent_window = 7);

}  // namespace rba
