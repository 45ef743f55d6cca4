#pragma once

#include <functional>
#include <vector>

#include "rba/raster.hpp"

namespace rba {

GrayImage green_channel(const ColorImage& img);

/// k x k aperture of the second-derivative (Laplacian) operator, row-major.
/// Built as d2/dx2 + d2/dy2 from binomial smoothing and central difference
/// kernels, which gives [[2,0,2],[0,-8,0],[2,0,2]] for k = 3.
std::vector<double> laplacian_kernel(int kernel_size);

/// Signed Laplacian response with edge-replicated borders.
FloatImage laplacian_response(const GrayImage& img, int kernel_size = 5);

/// |Laplacian| rescaled so the strongest response maps to 255. A flat image maps to all zeros.
GrayImage laplacian_edges(const GrayImage& img, int kernel_size = 5);

enum class BlurKind { gaussian, mean };

/// Gaussian weights of the given odd length, sigma = length / 6, normalised to unit sum.
std::vector<double> gaussian_kernel_1d(int kernel_size);

/// Separable blur with edge replication. Gaussian uses sigma = kernel_size / 6.
NormalizedImage blur(const NormalizedImage& img, int kernel_size, BlurKind kind);

/// I_norm - (I_blurred - mu) before clamping; mu is the mean of I_norm.
FloatImage high_pass_response(const GrayImage& img, int kernel_size = 51, bool gaussian = true);

/// High-pass response clamped to [0, 1].
NormalizedImage high_pass(const GrayImage& img, int kernel_size = 51, bool gaussian = true);

/// Applies a single-channel transform to R, G and B independently.
ColorImage apply_per_channel(const ColorImage& img,
                             const std::function<GrayImage(const GrayImage&)>& transform);

}  // namespace rba
