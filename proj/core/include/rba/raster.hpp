#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rba/errors.hpp"
#include "rba/geometry.hpp"

namespace rba {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend constexpr bool operator==(Rgb, Rgb) = default;
};

/**
 * Row-major pixel grid. The Tag parameter keeps semantically different grids
 * with the same pixel type (a gray image and a binary mask) from mixing.
 *
 * Values are plain data; copies are deep and cheap enough for 565x584 fundus
 * images.
 */
template <class T, class Tag>
class Raster {
public:
    using value_type = T;

    Raster() = default;

    Raster(int width, int height, T fill = T{}) : width_(width), height_(height) {
        if (width < 0 || height < 0) throw DomainError("raster dimensions must be non-negative");
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    Raster(int width, int height, std::vector<T> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (width < 0 || height < 0 ||
            data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
            throw DomainError("raster data length does not match width x height");
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }
    bool contains(Point p) const noexcept { return contains(p.x, p.y); }

    T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }
    T& operator[](Point p) noexcept { return data_[index(p.x, p.y)]; }
    const T& operator[](Point p) const noexcept { return data_[index(p.x, p.y)]; }

    /// Out-of-bounds reads return `outside`.
    T value_or(int x, int y, T outside) const noexcept {
        return contains(x, y) ? data_[index(x, y)] : outside;
    }

    /// Edge-replicated read.
    const T& clamped(int x, int y) const noexcept {
        x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
        y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
        return data_[index(x, y)];
    }

    std::span<T> pixels() noexcept { return data_; }
    std::span<const T> pixels() const noexcept { return data_; }

    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }
    Point point_at(std::size_t i) const noexcept {
        return {static_cast<int>(i % static_cast<std::size_t>(width_)),
                static_cast<int>(i / static_cast<std::size_t>(width_))};
    }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

using ColorImage = Raster<Rgb, struct ColorTag>;
using GrayImage = Raster<std::uint8_t, struct GrayTag>;
/// Real-valued single channel; [0,1] after clamping operations.
using NormalizedImage = Raster<double, struct NormalizedTag>;
/// Signed real-valued filter response.
using FloatImage = Raster<double, struct FloatTag>;
/// Foreground = 1, background = 0.
using BinaryMask = Raster<std::uint8_t, struct MaskTag>;

/// I / 255 per pixel.
NormalizedImage normalize(const GrayImage& img);

/// Arithmetic mean of all values (compensated summation). Throws DomainError on empty input.
double mean_intensity(const NormalizedImage& img);

/// Mean of an 8-bit image computed with an exact integer accumulator.
double mean_intensity(const GrayImage& img);

/// round(clamp(v, 0, 1) * 255)
GrayImage to_gray(const NormalizedImage& img);

/// Gray image with 255 on foreground and 0 elsewhere.
GrayImage mask_to_gray(const BinaryMask& mask);

ColorImage gray_to_color(const GrayImage& img);
ColorImage mask_to_color(const BinaryMask& mask);

/// Channel 0 = R, 1 = G, 2 = B.
GrayImage extract_channel(const ColorImage& img, int channel);
ColorImage merge_channels(const GrayImage& r, const GrayImage& g, const GrayImage& b);

std::size_t count_foreground(const BinaryMask& mask);

}  // namespace rba
