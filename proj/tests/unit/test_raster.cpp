#include <gtest/gtest.h>

#include <rba/image_io.hpp>
#include <rba/raster.hpp>

#include "fixtures.hpp"

using namespace rba;
namespace fx = rba::testing;

TEST(Raster, RejectsMismatchedData) {
    EXPECT_THROW(GrayImage(3, 2, std::vector<std::uint8_t>(5)), DomainError);
    EXPECT_THROW(GrayImage(-1, 2), DomainError);
    EXPECT_NO_THROW(GrayImage(0, 0));
}

TEST(Raster, RowMajorAddressing) {
    GrayImage g(4, 3, std::vector<std::uint8_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
    EXPECT_EQ(g(1, 2), 9);
    EXPECT_EQ(g.index(3, 1), 7u);
    EXPECT_EQ(g.point_at(7), (Point{3, 1}));
    EXPECT_EQ(g.value_or(-1, 0, 77), 77);
    EXPECT_EQ(g.clamped(-5, 9), 8);
    EXPECT_EQ(g.clamped(10, -3), 3);
}

TEST(Raster, MeanIntensity) {
    GrayImage g(2, 2, std::vector<std::uint8_t>{0, 255, 255, 0});
    EXPECT_DOUBLE_EQ(mean_intensity(g), 127.5);
    EXPECT_DOUBLE_EQ(mean_intensity(normalize(g)), 0.5);
    EXPECT_THROW(mean_intensity(GrayImage()), DomainError);
}

TEST(Raster, ToGrayRoundsAndClamps) {
    NormalizedImage n(4, 1, std::vector<double>{-0.5, 0.5, 1.0 / 255.0 * 10.4, 3.0});
    const GrayImage g = to_gray(n);
    EXPECT_EQ(g(0, 0), 0);
    EXPECT_EQ(g(1, 0), 128);
    EXPECT_EQ(g(2, 0), 10);
    EXPECT_EQ(g(3, 0), 255);
}

TEST(Raster, ChannelsSplitAndMerge) {
    ColorImage c(2, 1);
    c(0, 0) = {10, 200, 30};
    c(1, 0) = {1, 2, 3};
    EXPECT_EQ(extract_channel(c, 1)(0, 0), 200);
    EXPECT_EQ(merge_channels(extract_channel(c, 0), extract_channel(c, 1), extract_channel(c, 2)), c);
    EXPECT_THROW(extract_channel(c, 3), ParameterError);
}

TEST(ImageIo, PngRoundTrip) {
    fx::TempDir dir;
    ColorImage c(5, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 5; ++x) c(x, y) = {static_cast<std::uint8_t>(x * 40), static_cast<std::uint8_t>(y * 60), 7};
    write_png(dir / "c.png", c);
    EXPECT_EQ(load_image(dir / "c.png"), c);

    GrayImage g(3, 3, 9);
    g(1, 1) = 200;
    write_png(dir / "g.png", g);
    EXPECT_EQ(load_gray(dir / "g.png"), g);
    EXPECT_EQ(load_image(dir / "g.png"), gray_to_color(g));
}

TEST(ImageIo, EncodingIsDeterministic) {
    const BinaryMask m = fx::random_blobs(40, 30, 3);
    EXPECT_EQ(encode_png(mask_to_gray(m)), encode_png(mask_to_gray(m)));
}

TEST(ImageIo, Errors) {
    fx::TempDir dir;
    EXPECT_THROW(load_image(dir / "missing.png"), IoError);
    const std::vector<std::uint8_t> junk{'h', 'e', 'l', 'l', 'o'};
    EXPECT_THROW(decode_image(junk), FormatError);

    auto png = encode_png(GrayImage(8, 8, 100));
    png.resize(png.size() - 12);  // drop IEND
    EXPECT_THROW(decode_image(png), FormatError);
}
