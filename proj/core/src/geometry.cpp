#include "aaglsd/geometry.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace aaglsd {

double fold_axial(double angle) noexcept {
    double a = std::fmod(angle + kPi / 2.0, kPi);
    if (a < 0.0) a += kPi;
    a -= kPi / 2.0;
    // fmod can land exactly on the excluded upper bound after rounding.
    if (a >= kPi / 2.0) a -= kPi;
    return a;
}

double angular_diff(double a, double b) noexcept {
    const double d = std::abs(a - b);
    return std::min(kPi - d, d);
}

double axial_mean(const double* angles, int count) noexcept {
    double s = 0.0;
    double c = 0.0;
    for (int i = 0; i < count; ++i) {
        s += std::sin(2.0 * angles[i]);
        c += std::cos(2.0 * angles[i]);
    }
    return fold_axial(0.5 * std::atan2(s, c));
}

Line Segment::line() const {
    const double len = length();
    if (!(len > 0.0)) throw std::invalid_argument("degenerate segment");
    return {p1, {(p2.x - p1.x) / len, (p2.y - p1.y) / len}};
}

std::vector<Pixel> bresenham(Pixel from, Pixel to) {
    std::vector<Pixel> out;
    const int dx = std::abs(to.x - from.x);
    const int dy = -std::abs(to.y - from.y);
    const int sx = from.x < to.x ? 1 : -1;
    const int sy = from.y < to.y ? 1 : -1;
    out.reserve(static_cast<std::size_t>(std::max(dx, -dy)) + 1);
    int err = dx + dy;
    Pixel p = from;
    while (true) {
        out.push_back(p);
        if (p == to) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            p.x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            p.y += sy;
        }
    }
    return out;
}

Pixel round_pixel(Point2d p) noexcept {
    return {static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y))};
}

}  // namespace aaglsd
