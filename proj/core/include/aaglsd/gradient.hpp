#pragma once

#include <cstdint>
#include <vector>

#include "aaglsd/geometry.hpp"
#include "aaglsd/image.hpp"

namespace aaglsd {

/// Per-pixel gradient on the 2x2 stencil anchored at (x, y).
///
/// Orientation is the gradient direction folded into [0, pi); the level-line
/// is orientation - pi/2 and therefore lies in [-pi/2, pi/2). A pixel is
/// valid when its magnitude reaches the threshold and it is not on the
/// one-pixel frame (the last row/column has no 2x2 support). Invalid pixels
/// take no part in anchor extraction.
struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<double> gx;
    std::vector<double> gy;
    std::vector<double> magnitude;
    std::vector<double> orientation;
    std::vector<double> levelLine;
    std::vector<std::uint8_t> validMask;
    double magnitudeThreshold = 0.0;

    GradientField() = default;
    GradientField(int w, int h);

    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
    }
    bool inside(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width && y < height; }
    bool interior(int x, int y) const noexcept {
        return x >= 1 && y >= 1 && x < width - 1 && y < height - 1;
    }
    double mag(Pixel p) const noexcept { return magnitude[index(p.x, p.y)]; }
    double level(Pixel p) const noexcept { return levelLine[index(p.x, p.y)]; }
    bool valid(Pixel p) const noexcept { return inside(p.x, p.y) && validMask[index(p.x, p.y)] != 0; }

    /// Sets gx/gy at one pixel and derives magnitude, orientation and level-line.
    void set_vector(int x, int y, double gxv, double gyv) noexcept;
    /// Recomputes validMask from the stored magnitudes.
    void refresh_valid(double threshold) noexcept;
};

/// Folds atan2 output into [0, pi), identifying angle and angle + pi.
double fold_orientation(double angle) noexcept;

GradientField compute_gradient(const RealImage& img, double magnitudeThreshold);
GradientField compute_gradient(const GrayImage& img, double magnitudeThreshold);

}  // namespace aaglsd
