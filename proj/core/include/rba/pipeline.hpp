#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "rba/angles.hpp"
#include "rba/baselines.hpp"
#include "rba/keypoints.hpp"
#include "rba/skeleton.hpp"

namespace rba {

enum class Method { ours, roi, rule, line };

std::string_view to_string(Method m);
/// Accepts ours, roi, rule, line. Throws ParameterError otherwise.
Method parse_method(std::string_view name);

struct PipelineParams {
    WalkerParams walker;
    double sigma = 21.0;
    AnglePolicy policy = AnglePolicy::prune_preferred;
    int min_component = 5;
    int roi_thresh = 5;
    int roi_size = 50;
    std::optional<Point> roi_root;  // default: the rootmap root
    int rule_tangent_window = 7;
    LineDetectionParams line;
};

/// The thinned skeleton the proposed method and the rootmap work on.
BinaryMask mask_skeleton(const BinaryMask& mask, int min_component = 5);

/// Angles of one method on a binary vessel mask.
std::vector<BranchAngle> run_method(Method method, const BinaryMask& mask, const PipelineParams& params = {});

}  // namespace rba
