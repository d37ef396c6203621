#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace aaglsd {

inline constexpr double kPi = std::numbers::pi;

/// Integer pixel coordinate.
struct Pixel {
    int x = 0;
    int y = 0;

    friend bool operator==(const Pixel&, const Pixel&) = default;
};

struct Point2d {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2d&, const Point2d&) = default;
    friend Point2d operator+(Point2d a, Point2d b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2d operator-(Point2d a, Point2d b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2d operator*(double s, Point2d a) { return {s * a.x, s * a.y}; }
};

inline Point2d to_point(Pixel p) { return {static_cast<double>(p.x), static_cast<double>(p.y)}; }
inline double dot(Point2d a, Point2d b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2d a, Point2d b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2d a) { return std::hypot(a.x, a.y); }
inline double distance(Point2d a, Point2d b) { return norm(a - b); }

/// Folds any angle of an undirected line into [-pi/2, pi/2).
double fold_axial(double angle) noexcept;

/// Difference between two undirected orientations in [-pi/2, pi/2),
/// min(pi - |a - b|, |a - b|); the result lies in [0, pi/2].
double angular_diff(double a, double b) noexcept;

/// Circular mean of undirected orientations via doubled angles, in [-pi/2, pi/2).
double axial_mean(const double* angles, int count) noexcept;

/// Infinite line through `origin` along unit vector `dir`.
struct Line {
    Point2d origin;
    Point2d dir{1.0, 0.0};

    static Line through(Point2d origin, double angle) {
        return {origin, {std::cos(angle), std::sin(angle)}};
    }

    double angle() const noexcept { return fold_axial(std::atan2(dir.y, dir.x)); }
    /// Signed coordinate of the orthogonal projection of p along dir.
    double param(Point2d p) const noexcept { return dot(p - origin, dir); }
    Point2d at(double t) const noexcept { return origin + t * dir; }
    Point2d project(Point2d p) const noexcept { return at(param(p)); }
    double distance(Point2d p) const noexcept { return std::abs(cross(dir, p - origin)); }
};

/// Bare segment geometry, shared by detection output, ground truth and metrics.
struct Segment {
    Point2d p1;
    Point2d p2;

    double length() const noexcept { return aaglsd::distance(p1, p2); }
    /// Undirected orientation in [-pi/2, pi/2).
    double angle() const noexcept { return fold_axial(std::atan2(p2.y - p1.y, p2.x - p1.x)); }
    Point2d midpoint() const noexcept { return 0.5 * (p1 + p2); }
    /// Supporting line with origin p1 and direction towards p2; requires length() > 0.
    Line line() const;
};

/// 8-connected integer raster of the segment between two pixels, inclusive.
std::vector<Pixel> bresenham(Pixel from, Pixel to);

/// Nearest pixel to a sub-pixel point (round half away from zero).
Pixel round_pixel(Point2d p) noexcept;

}  // namespace aaglsd
