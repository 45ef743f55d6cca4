#include "rba/pipeline.hpp"

#include <string>

#include "rba/errors.hpp"
#include "rba/rootmap.hpp"

namespace rba {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::ours: return "ours";
        case Method::roi: return "roi";
        case Method::rule: return "rule";
        case Method::line: return "line";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    for (Method m : {Method::ours, Method::roi, Method::rule, Method::line})
        if (to_string(m) == name) return m;
    throw ParameterError("unknown method '" + std::string(name) + "' (expected ours, roi, rule or line)");
}

BinaryMask mask_skeleton(const BinaryMask& mask, int min_component) {
    return remove_small_components(thin(mask), min_component);
}

std::vector<BranchAngle> run_method(Method method, const BinaryMask& mask, const PipelineParams& params) {
    if (count_foreground(mask) == 0) return {};
    switch (method) {
        case Method::ours: {
            const BinaryMask skel = mask_skeleton(mask, params.min_component);
            if (count_foreground(skel) == 0) return {};
            return compute_angle_map(rooted_detection(skel, params.walker, params.sigma), params.policy);
        }
        case Method::roi: {
            // traced on the skeleton; window sums on a thick mask saturate everywhere
            const BinaryMask skel = mask_skeleton(mask, params.min_component);
            if (count_foreground(skel) == 0) return {};
            Point root;
            if (params.roi_root) {
                root = *params.roi_root;
            } else {
                root = rooted_detection_full(skel, params.walker, params.sigma).root;
            }
            if (!skel.contains(root) || !skel[root]) root = nearest_foreground(skel, root);
            return roi_window_method(skel, root, params.roi_thresh, params.roi_size);
        }
        case Method::rule: return rule_based_method(mask, params.rule_tangent_window);
        case Method::line: return line_detection_method(mask, params.line);
    }
    return {};
}

}  // namespace rba
