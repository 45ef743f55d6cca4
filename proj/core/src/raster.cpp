#include "rba/raster.hpp"

#include <algorithm>
#include <cmath>

namespace rba {

ValidationError::ValidationError(std::vector<RecordIssue> issues)
    : Error([&] {
          std::string msg = "validation failed";
          for (const auto& issue : issues) {
              msg += issue.index >= 0 ? "; record " + std::to_string(issue.index) + ": " : "; ";
              msg += issue.message;
          }
          return msg;
      }()),
      issues_(std::move(issues)) {}

NormalizedImage normalize(const GrayImage& img) {
    NormalizedImage out(img.width(), img.height());
    auto src = img.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] / 255.0;
    return out;
}

double mean_intensity(const NormalizedImage& img) {
    if (img.empty()) throw DomainError("mean_intensity of an empty image");
    // Neumaier summation
    double sum = 0.0;
    double comp = 0.0;
    for (double v : img.pixels()) {
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return (sum + comp) / static_cast<double>(img.size());
}

double mean_intensity(const GrayImage& img) {
    if (img.empty()) throw DomainError("mean_intensity of an empty image");
    std::uint64_t sum = 0;
    for (auto v : img.pixels()) sum += v;
    return static_cast<double>(sum) / static_cast<double>(img.size());
}

GrayImage to_gray(const NormalizedImage& img) {
    GrayImage out(img.width(), img.height());
    auto src = img.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = static_cast<std::uint8_t>(std::lround(std::clamp(src[i], 0.0, 1.0) * 255.0));
    }
    return out;
}

GrayImage mask_to_gray(const BinaryMask& mask) {
    GrayImage out(mask.width(), mask.height());
    auto src = mask.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 255 : 0;
    return out;
}

ColorImage gray_to_color(const GrayImage& img) {
    ColorImage out(img.width(), img.height());
    auto src = img.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = {src[i], src[i], src[i]};
    return out;
}

ColorImage mask_to_color(const BinaryMask& mask) { return gray_to_color(mask_to_gray(mask)); }

GrayImage extract_channel(const ColorImage& img, int channel) {
    if (channel < 0 || channel > 2) throw ParameterError("channel index must be 0, 1 or 2");
    GrayImage out(img.width(), img.height());
    auto src = img.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = channel == 0 ? src[i].r : (channel == 1 ? src[i].g : src[i].b);
    }
    return out;
}

ColorImage merge_channels(const GrayImage& r, const GrayImage& g, const GrayImage& b) {
    if (r.width() != g.width() || r.width() != b.width() || r.height() != g.height() ||
        r.height() != b.height()) {
        throw DomainError("channel dimensions differ");
    }
    ColorImage out(r.width(), r.height());
    auto dst = out.pixels();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = {r.pixels()[i], g.pixels()[i], b.pixels()[i]};
    }
    return out;
}

std::size_t count_foreground(const BinaryMask& mask) {
    return static_cast<std::size_t>(std::count_if(mask.pixels().begin(), mask.pixels().end(),
                                                  [](std::uint8_t v) { return v != 0; }));
}

}  // namespace rba
