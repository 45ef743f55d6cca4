#include "rba/image_io.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace rba {
namespace {

bool is_png(std::span<const std::uint8_t> b) {
    static constexpr std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    return b.size() >= 8 && std::equal(sig, sig + 8, b.begin());
}

bool is_jpeg(std::span<const std::uint8_t> b) {
    return b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF;
}

// A PNG must end with an IEND chunk; libpng tolerates some truncations
// silently, so check explicitly.
bool png_complete(std::span<const std::uint8_t> b) {
    static constexpr std::uint8_t iend[8] = {'I', 'E', 'N', 'D', 0xAE, 0x42, 0x60, 0x82};
    return b.size() >= 20 && std::equal(iend, iend + 8, b.end() - 8);
}

// Entropy-coded data stuffs 0xFF bytes, so an FF D9 pair only occurs as the
// end-of-image marker.
bool jpeg_complete(std::span<const std::uint8_t> b) {
    for (std::size_t i = b.size(); i-- > 3;) {
        if (b[i - 1] == 0xFF && b[i] == 0xD9) return true;
    }
    return false;
}

cv::Mat decode_mat(std::span<const std::uint8_t> bytes) {
    if (is_png(bytes)) {
        if (!png_complete(bytes)) throw FormatError("truncated PNG stream");
    } else if (is_jpeg(bytes)) {
        if (!jpeg_complete(bytes)) throw FormatError("truncated JPEG stream");
    } else {
        throw FormatError("unsupported image container (expected PNG or JPEG)");
    }
    const cv::Mat buf(1, static_cast<int>(bytes.size()), CV_8UC1,
                      const_cast<std::uint8_t*>(bytes.data()));
    cv::Mat mat = cv::imdecode(buf, cv::IMREAD_UNCHANGED);
    if (mat.empty()) throw FormatError("image data could not be decoded");
    if (mat.depth() != CV_8U) throw FormatError("only 8-bit images are supported");
    if (mat.channels() != 1 && mat.channels() != 3 && mat.channels() != 4) {
        throw FormatError("unsupported channel count");
    }
    return mat;
}

std::vector<std::uint8_t> encode_mat(const cv::Mat& mat) {
    std::vector<std::uint8_t> out;
    const std::vector<int> opts = {cv::IMWRITE_PNG_COMPRESSION, 6};
    if (!cv::imencode(".png", mat, out, opts)) throw IoError("PNG encoding failed");
    return out;
}

}  // namespace

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw IoError("file not found: " + path.string());
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path.string());
    return bytes;
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    static std::atomic<unsigned> counter{0};
    auto tmp = path;
    tmp += ".tmp" + std::to_string(counter.fetch_add(1));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open file for writing: " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot replace file: " + path.string());
    }
}

ColorImage decode_image(std::span<const std::uint8_t> bytes) {
    const cv::Mat mat = decode_mat(bytes);
    ColorImage out(mat.cols, mat.rows);
    const int ch = mat.channels();
    for (int y = 0; y < mat.rows; ++y) {
        const std::uint8_t* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < mat.cols; ++x) {
            const std::uint8_t* px = row + x * ch;
            // OpenCV stores BGR(A)
            out(x, y) = ch == 1 ? Rgb{px[0], px[0], px[0]} : Rgb{px[2], px[1], px[0]};
        }
    }
    return out;
}

GrayImage decode_gray(std::span<const std::uint8_t> bytes) {
    const cv::Mat mat = decode_mat(bytes);
    GrayImage out(mat.cols, mat.rows);
    const int ch = mat.channels();
    for (int y = 0; y < mat.rows; ++y) {
        const std::uint8_t* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < mat.cols; ++x) {
            const std::uint8_t* px = row + x * ch;
            if (ch == 1 || (px[0] == px[1] && px[1] == px[2])) {
                out(x, y) = px[0];
            } else {
                out(x, y) = static_cast<std::uint8_t>((299 * px[2] + 587 * px[1] + 114 * px[0] + 500) / 1000);
            }
        }
    }
    return out;
}

ColorImage load_image(const std::filesystem::path& path) { return decode_image(read_file_bytes(path)); }

GrayImage load_gray(const std::filesystem::path& path) { return decode_gray(read_file_bytes(path)); }

std::vector<std::uint8_t> encode_png(const ColorImage& img) {
    if (img.empty()) throw DomainError("cannot encode an empty image");
    cv::Mat mat(img.height(), img.width(), CV_8UC3);
    for (int y = 0; y < img.height(); ++y) {
        auto* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.width(); ++x) {
            const Rgb& p = img(x, y);
            row[3 * x] = p.b;
            row[3 * x + 1] = p.g;
            row[3 * x + 2] = p.r;
        }
    }
    return encode_mat(mat);
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
    if (img.empty()) throw DomainError("cannot encode an empty image");
    cv::Mat mat(img.height(), img.width(), CV_8UC1,
                const_cast<std::uint8_t*>(img.pixels().data()));
    return encode_mat(mat);
}

void write_png(const std::filesystem::path& path, const ColorImage& img) {
    write_file_atomic(path, encode_png(img));
}

void write_png(const std::filesystem::path& path, const GrayImage& img) {
    write_file_atomic(path, encode_png(img));
}

}  // namespace rba
