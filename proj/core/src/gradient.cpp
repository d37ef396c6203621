#include "aaglsd/gradient.hpp"

#include <cmath>

namespace aaglsd {

GradientField::GradientField(int w, int h)
    : width(w),
      height(h),
      gx(static_cast<std::size_t>(w) * h, 0.0),
      gy(static_cast<std::size_t>(w) * h, 0.0),
      magnitude(static_cast<std::size_t>(w) * h, 0.0),
      orientation(static_cast<std::size_t>(w) * h, 0.0),
      levelLine(static_cast<std::size_t>(w) * h, -kPi / 2.0),
      validMask(static_cast<std::size_t>(w) * h, 0) {}

double fold_orientation(double angle) noexcept {
    if (angle < 0.0) angle += kPi;
    // Tiny negative inputs round to exactly pi above.
    if (angle >= kPi) angle -= kPi;
    return angle;
}

void GradientField::set_vector(int x, int y, double gxv, double gyv) noexcept {
    const std::size_t i = index(x, y);
    gx[i] = gxv;
    gy[i] = gyv;
    magnitude[i] = std::sqrt(gxv * gxv + gyv * gyv);
    orientation[i] = fold_orientation(std::atan2(gyv, gxv));
    levelLine[i] = orientation[i] - kPi / 2.0;
}

void GradientField::refresh_valid(double threshold) noexcept {
    magnitudeThreshold = threshold;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t i = index(x, y);
            validMask[i] = interior(x, y) && magnitude[i] >= threshold ? 1 : 0;
        }
    }
}

GradientField compute_gradient(const RealImage& img, double magnitudeThreshold) {
    GradientField field(img.width, img.height);
    for (int y = 0; y + 1 < img.height; ++y) {
        const double* row0 = img.data.data() + static_cast<std::size_t>(y) * img.width;
        const double* row1 = row0 + img.width;
        for (int x = 0; x + 1 < img.width; ++x) {
            const double a = row0[x];
            const double b = row0[x + 1];
            const double c = row1[x];
            const double d = row1[x + 1];
            field.set_vector(x, y, (b - a + d - c) / 2.0, (c - a + d - b) / 2.0);
        }
    }
    field.refresh_valid(magnitudeThreshold);
    return field;
}

GradientField compute_gradient(const GrayImage& img, double magnitudeThreshold) {
    return compute_gradient(RealImage::from(img), magnitudeThreshold);
}

}  // namespace aaglsd
