#include <gtest/gtest.h>

#include <fstream>

#include "aaglsd/image.hpp"
#include "support/test_support.hpp"

using namespace aaglsd;
using namespace testsupport;

TEST(Grayscale, LumaExamples) {
    EXPECT_EQ(luma601(50, 50, 50), 50);
    EXPECT_EQ(luma601(255, 255, 255), 255);
    EXPECT_EQ(luma601(255, 0, 0), 76);  // round(0.299 * 255) = round(76.245)
    EXPECT_EQ(luma601(0, 255, 0), 150); // round(149.685)
    EXPECT_EQ(luma601(0, 0, 255), 29);  // round(29.07)
}

TEST(Grayscale, LumaIsNearestInteger) {
    for (int r = 0; r < 256; r += 17)
        for (int g = 0; g < 256; g += 13)
            for (int b = 0; b < 256; b += 11) {
                const double exact = 0.299 * r + 0.587 * g + 0.114 * b;
                // Exact .5 cases round up; doubles cannot represent them exactly.
                EXPECT_LE(std::abs(luma601(r, g, b) - exact), 0.5 + 1e-9) << r << ' ' << g << ' ' << b;
            }
}

TEST(Grayscale, ConvertsRgbBuffer) {
    ChannelImage rgb;
    rgb.width = 16;
    rgb.height = 16;
    rgb.channels = 3;
    rgb.data.assign(16 * 16 * 3, 0);
    rgb.data[0] = 255;
    const GrayImage g = to_grayscale(rgb);
    EXPECT_EQ(g.at(0, 0), 76);
    EXPECT_EQ(g.at(1, 0), 0);
}

TEST(GrayImage, RejectsSmallOrInconsistentInput) {
    EXPECT_THROW(GrayImage(15, 16), std::invalid_argument);
    EXPECT_THROW(GrayImage(16, 8), std::invalid_argument);
    EXPECT_THROW(GrayImage(16, 16, std::vector<std::uint8_t>(10)), std::invalid_argument);
    EXPECT_NO_THROW(GrayImage(16, 16));
}

TEST(Gaussian, KernelIsNormalizedAndSymmetric) {
    const auto k = gaussian_kernel();
    double sum = 0.0;
    for (double v : k) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(k[0], k[4]);
    EXPECT_DOUBLE_EQ(k[1], k[3]);
    EXPECT_NEAR(k[1] / k[2], std::exp(-0.5), 1e-12);
    EXPECT_NEAR(k[0] / k[2], std::exp(-2.0), 1e-12);
}

TEST(Gaussian, ConstantImageStaysConstant) {
    const GrayImage img = make_image(32, 20, [](int, int) { return 93; });
    const RealImage s = gaussian_smooth(img);
    for (double v : s.data) EXPECT_NEAR(v, 93.0, 1e-12);
}

TEST(Gaussian, ImpulseMatchesDirectConvolution) {
    const GrayImage img = make_image(16, 16, [](int x, int y) { return x == 8 && y == 8 ? 255 : 0; });
    const RealImage s = gaussian_smooth(img);
    const auto k = gaussian_kernel();
    const RealImage oracle = conv2d_direct(img, std::vector<double>(k.begin(), k.end()));
    for (std::size_t i = 0; i < s.data.size(); ++i) EXPECT_NEAR(s.data[i], oracle.data[i], 1e-9);
    EXPECT_NEAR(s.at(8, 8), 255.0 * k[2] * k[2], 1e-9);
    EXPECT_NEAR(s.at(6, 9), 255.0 * k[0] * k[1], 1e-9);
}

TEST(Gaussian, RandomImageMatchesDirectConvolution) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> d(0, 255);
    const GrayImage img = make_image(23, 17, [&](int, int) { return d(rng); });
    const auto k = gaussian_kernel();
    const RealImage s = gaussian_smooth(img);
    const RealImage oracle = conv2d_direct(img, std::vector<double>(k.begin(), k.end()));
    for (std::size_t i = 0; i < s.data.size(); ++i) EXPECT_NEAR(s.data[i], oracle.data[i], 1e-9);
}

TEST(Gaussian, StepProfileIsSymmetric) {
    // Step between rows 9 and 10: mirrored samples sum to lo + hi.
    const GrayImage img = make_image(20, 20, [](int, int y) { return y < 10 ? 40 : 200; });
    const RealImage s = gaussian_smooth(img);
    for (int d = 0; d < 5; ++d) {
        EXPECT_NEAR(s.at(10, 9 - d) + s.at(10, 10 + d), 240.0, 1e-9) << d;
    }
}

TEST(Gaussian, MassPreservedOnFlatBorders) {
    // Content away from the border: replication adds no drift.
    std::mt19937 rng(1);
    std::uniform_int_distribution<int> d(0, 255);
    const GrayImage img = make_image(64, 48, [&](int x, int y) {
        const bool inner = x >= 4 && y >= 4 && x < 60 && y < 44;
        return inner ? d(rng) : 100;
    });
    double in = 0.0, out = 0.0;
    for (auto v : img.pixels()) in += v;
    for (double v : gaussian_smooth(img).data) out += v;
    EXPECT_NEAR(out, in, 0.5 * 64 * 48 / 1e6 + 1e-6);
}

TEST(ImageIo, PgmRoundTrip) {
    const auto dir = temp_dir("pgm");
    const GrayImage img = make_image(19, 17, [](int x, int y) { return (x * 13 + y * 7) % 256; });
    write_pgm(dir / "a.pgm", img);
    const GrayImage back = read_image(dir / "a.pgm");
    EXPECT_EQ(back.width(), 19);
    EXPECT_EQ(back.height(), 17);
    EXPECT_TRUE(std::equal(img.pixels().begin(), img.pixels().end(), back.pixels().begin()));
}

TEST(ImageIo, PngRoundTrip) {
    const auto dir = temp_dir("png");
    const GrayImage img = make_image(33, 16, [](int x, int y) { return (x * 5 + y * 11) % 256; });
    const auto bytes = encode_png(img);
    std::ofstream(dir / "a.png", std::ios::binary).write(reinterpret_cast<const char*>(bytes.data()),
                                                          static_cast<std::streamsize>(bytes.size()));
    const GrayImage back = read_image(dir / "a.png");
    EXPECT_TRUE(std::equal(img.pixels().begin(), img.pixels().end(), back.pixels().begin()));
}

TEST(ImageIo, Errors) {
    const auto dir = temp_dir("ioerr");
    EXPECT_THROW(read_image(dir / "missing.png"), ImageIoError);
    std::ofstream(dir / "junk.png") << "not an image";
    EXPECT_THROW(read_image(dir / "junk.png"), ImageIoError);
    std::ofstream(dir / "deep.pgm", std::ios::binary) << "P5\n16 16\n65535\n" << std::string(512, '\0');
    try {
        read_image(dir / "deep.pgm");
        FAIL() << "16-bit PGM accepted";
    } catch (const ImageIoError& e) {
        EXPECT_NE(std::string(e.what()).find("bit depth"), std::string::npos);
    }
    std::ofstream(dir / "small.pgm", std::ios::binary) << "P5\n8 8\n255\n" << std::string(64, '\0');
    EXPECT_THROW(read_image(dir / "small.pgm"), ImageIoError);
}
