#pragma once

#include <cstdint>
#include <vector>

#include "rba/raster.hpp"

namespace rba {

/// output(x, y) = img(x, y) >= threshold
BinaryMask binarize(const GrayImage& img, std::uint8_t threshold = 1);

/**
 * Zhang-Suen thinning to a 1-pixel-wide, 8-connected centerline.
 *
 * Each Zhang-Suen deletion is additionally required to be a simple point in
 * the partially updated image, so foreground components and holes survive
 * (plain Zhang-Suen erases 2x2 blocks and two-pixel-thick diagonals). A final
 * pass removes redundant corner pixels (pixels 4-adjacent to two foreground
 * pixels that touch diagonally), leaving no 2x2 foreground block wherever that
 * is topologically possible. The two passes alternate until neither changes
 * the mask, which makes thin() idempotent.
 */
BinaryMask thin(const BinaryMask& mask);

/// True when deleting the pixel changes neither the 8-connected foreground
/// nor the 4-connected background topology of its 3x3 neighbourhood.
bool is_simple_point(const BinaryMask& mask, int x, int y);

/// Number of foreground pixels among the 8 neighbours (centre excluded).
int foreground_neighbors(const BinaryMask& mask, int x, int y);

using LabelImage = Raster<int, struct LabelTag>;

struct ComponentLabels {
    LabelImage labels;  // -1 on background
    std::vector<int> sizes;               // indexed by label, labels in row-major discovery order
};

/// 8-connected component labelling.
ComponentLabels label_components(const BinaryMask& mask);

int count_components(const BinaryMask& mask);

/// Mask of the 8-connected component containing `seed` (empty mask if seed is background).
BinaryMask component_of(const BinaryMask& mask, Point seed);

/// Clears every 8-connected component with fewer than `min_size` pixels.
BinaryMask remove_small_components(const BinaryMask& mask, int min_size = 5);

struct SkeletonParams {
    std::uint8_t threshold = 1;
    int min_component = 5;
};

/// binarize -> thin -> remove_small_components
BinaryMask skeletonize(const GrayImage& segmentation, const SkeletonParams& params = {});

}  // namespace rba
