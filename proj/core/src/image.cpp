#include "aaglsd/image.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace aaglsd {

namespace {

constexpr std::array<double, 5> make_kernel() {
    // exp(-k^2 / 2) for k = 0, 1, 2, normalized below.
    constexpr double w0 = 1.0;
    constexpr double w1 = 0.60653065971263342;
    constexpr double w2 = 0.13533528323661270;
    constexpr double sum = w0 + 2.0 * w1 + 2.0 * w2;
    return {w2 / sum, w1 / sum, w0 / sum, w1 / sum, w2 / sum};
}

constexpr std::array<double, 5> kKernel = make_kernel();

bool has_png_signature(const std::vector<std::uint8_t>& bytes) {
    static constexpr std::array<std::uint8_t, 8> sig = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    return bytes.size() >= sig.size() && std::equal(sig.begin(), sig.end(), bytes.begin());
}

ChannelImage decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw ImageIoError(name + ": undecodable PNG (" + image.message + ")");
    }
    if (image.format & PNG_FORMAT_FLAG_LINEAR) {
        png_image_free(&image);
        throw ImageIoError(name + ": unsupported bit depth (16-bit PNG)");
    }
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

    ChannelImage out;
    out.width = static_cast<int>(image.width);
    out.height = static_cast<int>(image.height);
    out.channels = color ? 3 : 1;
    out.data.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, out.data.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw ImageIoError(name + ": undecodable PNG (" + msg + ")");
    }
    return out;
}

// Binary PGM header tokens, skipping '#' comments.
std::string next_pnm_token(const std::vector<std::uint8_t>& bytes, std::size_t& pos) {
    std::string tok;
    while (pos < bytes.size()) {
        char c = static_cast<char>(bytes[pos]);
        if (c == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        tok.push_back(static_cast<char>(bytes[pos++]));
    }
    return tok;
}

ChannelImage decode_pgm(const std::vector<std::uint8_t>& bytes, const std::string& name) {
    std::size_t pos = 0;
    if (next_pnm_token(bytes, pos) != "P5") {
        throw ImageIoError(name + ": undecodable file (expected PNG or binary PGM)");
    }
    long w = 0, h = 0, maxval = 0;
    try {
        w = std::stol(next_pnm_token(bytes, pos));
        h = std::stol(next_pnm_token(bytes, pos));
        maxval = std::stol(next_pnm_token(bytes, pos));
    } catch (const std::exception&) {
        throw ImageIoError(name + ": malformed PGM header");
    }
    if (w <= 0 || h <= 0) throw ImageIoError(name + ": malformed PGM header");
    if (maxval <= 0 || maxval > 255) {
        throw ImageIoError(name + ": unsupported bit depth (PGM maxval " + std::to_string(maxval) + ")");
    }
    ++pos;  // single whitespace after maxval
    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (bytes.size() < pos + n) throw ImageIoError(name + ": truncated PGM data");

    ChannelImage out;
    out.width = static_cast<int>(w);
    out.height = static_cast<int>(h);
    out.channels = 1;
    out.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                    bytes.begin() + static_cast<std::ptrdiff_t>(pos + n));
    if (maxval != 255) {
        for (auto& v : out.data) {
            v = static_cast<std::uint8_t>(std::lround(255.0 * std::min<long>(v, maxval) / maxval));
        }
    }
    return out;
}

}  // namespace

GrayImage::GrayImage(int width, int height)
    : GrayImage(width, height,
                std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                          static_cast<std::size_t>(std::max(height, 0)))) {}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width < kMinImageSide || height < kMinImageSide) {
        throw std::invalid_argument("image is " + std::to_string(width) + "x" + std::to_string(height) +
                                    ", minimum is " + std::to_string(kMinImageSide) + "x" +
                                    std::to_string(kMinImageSide));
    }
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw std::invalid_argument("image data length does not match width*height");
    }
}

RealImage RealImage::from(const GrayImage& img) {
    RealImage out(img.width(), img.height());
    std::copy(img.pixels().begin(), img.pixels().end(), out.data.begin());
    return out;
}

GrayImage RealImage::quantize() const {
    std::vector<std::uint8_t> bytes(data.size());
    std::transform(data.begin(), data.end(), bytes.begin(), [](double v) {
        return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
    });
    return GrayImage(width, height, std::move(bytes));
}

std::uint8_t luma601(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
    // Integer form of round(0.299 R + 0.587 G + 0.114 B).
    const int acc = 299 * r + 587 * g + 114 * b;
    return static_cast<std::uint8_t>((acc + 500) / 1000);
}

GrayImage to_grayscale(const ChannelImage& image) {
    if (image.channels == 1) return GrayImage(image.width, image.height, image.data);
    if (image.channels != 3) {
        throw std::invalid_argument("unsupported channel count " + std::to_string(image.channels));
    }
    const std::size_t n = static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height);
    if (image.data.size() != 3 * n) throw std::invalid_argument("RGB data length mismatch");
    std::vector<std::uint8_t> gray(n);
    for (std::size_t i = 0; i < n; ++i) {
        gray[i] = luma601(image.data[3 * i], image.data[3 * i + 1], image.data[3 * i + 2]);
    }
    return GrayImage(image.width, image.height, std::move(gray));
}

std::span<const double, 5> gaussian_kernel() noexcept { return kKernel; }

RealImage gaussian_smooth(const GrayImage& img) {
    const int w = img.width();
    const int h = img.height();
    RealImage tmp(w, h);
    RealImage out(w, h);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -2; k <= 2; ++k) {
                acc += kKernel[k + 2] * img.at(std::clamp(x + k, 0, w - 1), y);
            }
            tmp.at(x, y) = acc;
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -2; k <= 2; ++k) {
                acc += kKernel[k + 2] * tmp.at(x, std::clamp(y + k, 0, h - 1));
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

ChannelImage read_channel_image(const std::filesystem::path& path) {
    std::error_code ec;
    if (std::filesystem::is_directory(path, ec)) throw ImageIoError(path.string() + ": is a directory");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ImageIoError(path.string() + ": cannot open");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.empty()) throw ImageIoError(path.string() + ": empty file");
    if (has_png_signature(bytes)) return decode_png(bytes, path.string());
    return decode_pgm(bytes, path.string());
}

GrayImage read_image(const std::filesystem::path& path) {
    ChannelImage raw = read_channel_image(path);
    try {
        return to_grayscale(raw);
    } catch (const std::invalid_argument& e) {
        throw ImageIoError(path.string() + ": " + e.what());
    }
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ImageIoError(path.string() + ": cannot open for writing");
    out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels().data()),
              static_cast<std::streamsize>(img.pixels().size()));
    if (!out) throw ImageIoError(path.string() + ": write failed");
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_GRAY;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.pixels().data(), 0, nullptr)) {
        throw ImageIoError(std::string("PNG encode failed: ") + image.message);
    }
    std::vector<std::uint8_t> buffer(size);
    if (!png_image_write_to_memory(&image, buffer.data(), &size, 0, img.pixels().data(), 0, nullptr)) {
        throw ImageIoError(std::string("PNG encode failed: ") + image.message);
    }
    buffer.resize(size);
    return buffer;
}

}  // namespace aaglsd
