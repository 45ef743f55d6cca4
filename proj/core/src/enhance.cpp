#include "rba/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace rba {
namespace {

void check_kernel(int k) {
    if (k < 3 || k % 2 == 0) throw ParameterError("kernel size must be odd and >= 3");
}

std::vector<double> convolve_1d(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// Binomial smoothing applied `smooth` times followed by `order` differences.
std::vector<double> derivative_kernel(int smooth, int order) {
    std::vector<double> k = {1.0};
    for (int i = 0; i < smooth; ++i) k = convolve_1d(k, {1.0, 1.0});
    for (int i = 0; i < order; ++i) k = convolve_1d(k, {-1.0, 1.0});
    return k;
}

template <class Img>
Img separable(const Img& img, const std::vector<double>& kx, const std::vector<double>& ky) {
    const int w = img.width();
    const int h = img.height();
    const int rx = static_cast<int>(kx.size() / 2);
    const int ry = static_cast<int>(ky.size() / 2);
    Img tmp(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -rx; i <= rx; ++i) acc += kx[static_cast<std::size_t>(i + rx)] * img.clamped(x + i, y);
            tmp(x, y) = acc;
        }
    }
    Img out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int j = -ry; j <= ry; ++j) acc += ky[static_cast<std::size_t>(j + ry)] * tmp.clamped(x, y + j);
            out(x, y) = acc;
        }
    }
    return out;
}

}  // namespace

GrayImage green_channel(const ColorImage& img) { return extract_channel(img, 1); }

std::vector<double> laplacian_kernel(int kernel_size) {
    check_kernel(kernel_size);
    const auto d2 = derivative_kernel(kernel_size - 3, 2);
    const auto s = derivative_kernel(kernel_size - 1, 0);
    const auto k = static_cast<std::size_t>(kernel_size);
    std::vector<double> out(k * k);
    for (std::size_t y = 0; y < k; ++y)
        for (std::size_t x = 0; x < k; ++x) out[y * k + x] = d2[x] * s[y] + s[x] * d2[y];
    return out;
}

FloatImage laplacian_response(const GrayImage& img, int kernel_size) {
    const auto kernel = laplacian_kernel(kernel_size);
    const int r = kernel_size / 2;
    FloatImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double acc = 0.0;
            std::size_t ki = 0;
            for (int j = -r; j <= r; ++j)
                for (int i = -r; i <= r; ++i) acc += kernel[ki++] * img.clamped(x + i, y + j);
            out(x, y) = acc;
        }
    }
    return out;
}

GrayImage laplacian_edges(const GrayImage& img, int kernel_size) {
    const FloatImage resp = laplacian_response(img, kernel_size);
    double peak = 0.0;
    for (double v : resp.pixels()) peak = std::max(peak, std::abs(v));
    GrayImage out(img.width(), img.height());
    if (peak == 0.0) return out;
    auto src = resp.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = static_cast<std::uint8_t>(std::lround(std::abs(src[i]) * 255.0 / peak));
    }
    return out;
}

std::vector<double> gaussian_kernel_1d(int kernel_size) {
    check_kernel(kernel_size);
    const double sigma = kernel_size / 6.0;
    const int r = kernel_size / 2;
    std::vector<double> k(static_cast<std::size_t>(kernel_size));
    for (int i = -r; i <= r; ++i) k[static_cast<std::size_t>(i + r)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    const double sum = std::accumulate(k.begin(), k.end(), 0.0);
    for (double& v : k) v /= sum;
    return k;
}

NormalizedImage blur(const NormalizedImage& img, int kernel_size, BlurKind kind) {
    check_kernel(kernel_size);
    std::vector<double> k;
    if (kind == BlurKind::gaussian) {
        k = gaussian_kernel_1d(kernel_size);
    } else {
        k.assign(static_cast<std::size_t>(kernel_size), 1.0 / kernel_size);
    }
    return separable(img, k, k);
}

FloatImage high_pass_response(const GrayImage& img, int kernel_size, bool gaussian) {
    check_kernel(kernel_size);
    const NormalizedImage norm = normalize(img);
    const double mu = mean_intensity(img) / 255.0;
    const NormalizedImage blurred = blur(norm, kernel_size, gaussian ? BlurKind::gaussian : BlurKind::mean);
    FloatImage out(img.width(), img.height());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.pixels()[i] = norm.pixels()[i] - (blurred.pixels()[i] - mu);
    }
    return out;
}

NormalizedImage high_pass(const GrayImage& img, int kernel_size, bool gaussian) {
    const FloatImage resp = high_pass_response(img, kernel_size, gaussian);
    NormalizedImage out(img.width(), img.height());
    for (std::size_t i = 0; i < out.size(); ++i) out.pixels()[i] = std::clamp(resp.pixels()[i], 0.0, 1.0);
    return out;
}

ColorImage apply_per_channel(const ColorImage& img,
                             const std::function<GrayImage(const GrayImage&)>& transform) {
    return merge_channels(transform(extract_channel(img, 0)), transform(extract_channel(img, 1)),
                          transform(extract_channel(img, 2)));
}

}  // namespace rba
