#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aaglsd {

/// Raised for unreadable, undecodable or unsupported image files.
class ImageIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Smallest width/height the detection pipeline accepts.
inline constexpr int kMinImageSide = 16;

/// 8-bit single-channel raster, row-major.
class GrayImage {
public:
    GrayImage() = default;
    /// Zero-filled image. Throws std::invalid_argument below kMinImageSide.
    GrayImage(int width, int height);
    GrayImage(int width, int height, std::vector<std::uint8_t> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return data_.empty(); }

    std::uint8_t at(int x, int y) const { return data_[index(x, y)]; }
    std::uint8_t& at(int x, int y) { return data_[index(x, y)]; }

    std::span<const std::uint8_t> pixels() const noexcept { return data_; }
    std::span<std::uint8_t> pixels() noexcept { return data_; }

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Real-valued single-channel raster used between smoothing and gradient.
struct RealImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    RealImage() = default;
    RealImage(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }

    static RealImage from(const GrayImage& img);
    /// Round-half-up and clamp to [0, 255].
    GrayImage quantize() const;
};

/// Interleaved 8-bit raster with 1 (gray) or 3 (RGB) channels.
struct ChannelImage {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;
};

/// Rec.601 luma, integer-rounded. Single-channel input is copied through.
GrayImage to_grayscale(const ChannelImage& image);

/// Luma of one RGB triple, round(0.299 R + 0.587 G + 0.114 B).
std::uint8_t luma601(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

/// The normalized 5-tap sigma=1 Gaussian used by gaussian_smooth.
std::span<const double, 5> gaussian_kernel() noexcept;

/// Separable 5x5 Gaussian with edge replication.
RealImage gaussian_smooth(const GrayImage& img);

/// Decodes PNG (any 8-bit colour type) or binary PGM (P5, maxval <= 255).
ChannelImage read_channel_image(const std::filesystem::path& path);
/// read_channel_image followed by to_grayscale.
GrayImage read_image(const std::filesystem::path& path);

void write_pgm(const std::filesystem::path& path, const GrayImage& img);
std::vector<std::uint8_t> encode_png(const GrayImage& img);

}  // namespace aaglsd
