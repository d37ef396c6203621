#pragma once

#include <optional>
#include <vector>

#include "aaglsd/anchors.hpp"
#include "aaglsd/geometry.hpp"
#include "aaglsd/gradient.hpp"

namespace aaglsd {

struct LinkParams {
    double T_dist = 1.5;
    int S_min = 2;
    int S_ra = 3;
    int S_aag = 5;
    /// Level-line tolerance for group alignment; shares its value with AnchorParams::T_aligned.
    double T_aligned = kPi / 8.0;

    void validate() const;
};

/// Running sums for an ordinary least-squares line fit.
///
/// Coordinates are accumulated relative to the first point added so the
/// second moments stay well conditioned on large images.
class FitAccumulator {
public:
    void add(Point2d p) noexcept;
    void add(Pixel p) noexcept { add(to_point(p)); }

    int count() const noexcept { return count_; }
    Point2d centroid() const noexcept;
    /// Central second moments.
    double sxx() const noexcept;
    double syy() const noexcept;
    double sxy() const noexcept;
    /// True when x is fitted as a function of y (y has the larger spread).
    bool axisSwap() const noexcept { return syy() > sxx(); }

private:
    Point2d ref_{};
    double sx_ = 0.0, sy_ = 0.0, sxx_ = 0.0, syy_ = 0.0, sxy_ = 0.0;
    int count_ = 0;
};

struct LineFit {
    double theta = 0.0;  ///< in [-pi/2, pi/2)
    Line line;
};

/// OLS of y on x, or of x on y when axisSwap(). Throws std::domain_error
/// when fewer than two points were added or all points coincide.
LineFit fit_line(const FitAccumulator& acc);

/// A detected segment with the evidence collected while linking.
struct LineSegment {
    Point2d p1;
    Point2d p2;
    double thetaSeg = 0.0;
    int nAnchors = 0;       ///< regular anchors in the support set
    int nAags = 0;          ///< groups in the support set, the seed included
    int nAligned = 0;       ///< support pixels whose level-line is within T_aligned of thetaSeg
    int supportPixels = 0;  ///< size of the support set
    double maxAdmissionResidual = 0.0;
    std::vector<int> groups;
    std::vector<Pixel> support;

    Segment geometry() const noexcept { return {p1, p2}; }
    double length() const noexcept { return distance(p1, p2); }
    double angle() const noexcept { return geometry().angle(); }
};

enum class Direction { Forward, Backward };

/// Next pixel along `heading` (need not be normalized): the strongest of the
/// three pixels in the row or column ahead of `current`. Ties prefer the
/// straight-ahead pixel, then the smaller distance to `guide` when given.
/// Returns nullopt when every candidate is outside the image or on its
/// one-pixel frame.
std::optional<Pixel> route_next(const GradientField& field, Pixel current, Point2d heading,
                                const Line* guide = nullptr);

/// Direction-flag form: forward walks along (cos theta, sin theta).
std::optional<Pixel> route_next(const GradientField& field, Pixel current, Direction direction,
                                double thetaSeg);

/// The three candidate pixels route_next inspects, straight-ahead first.
std::array<Pixel, 3> routing_candidates(Pixel current, Point2d heading) noexcept;

/// Grows one segment from an available group. Marks the seed visited,
/// and marks every group whose pixels join the segment linked and visited.
std::optional<LineSegment> link_from_aag(int groupId, AnchorMap& anchors, const GradientField& field,
                                         const LinkParams& params);

/// Links every available group in creation order.
std::vector<LineSegment> detect_all(AnchorMap& anchors, const GradientField& field, const LinkParams& params);

}  // namespace aaglsd
