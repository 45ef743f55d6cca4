#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rba/raster.hpp"

namespace rba {

/// Decodes a PNG or JPEG file. Gray sources are replicated into all three channels.
/// Throws IoError when the file cannot be read and FormatError when it does not decode.
ColorImage load_image(const std::filesystem::path& path);
ColorImage decode_image(std::span<const std::uint8_t> bytes);

/// Single-channel view of a file: gray sources are taken as-is, color sources
/// with identical channels collapse to that channel, other color sources use
/// integer Rec.601 luma.
GrayImage load_gray(const std::filesystem::path& path);
GrayImage decode_gray(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_png(const ColorImage& img);
std::vector<std::uint8_t> encode_png(const GrayImage& img);

void write_png(const std::filesystem::path& path, const ColorImage& img);
void write_png(const std::filesystem::path& path, const GrayImage& img);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace rba
