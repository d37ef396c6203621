#pragma once

#include <vector>

#include "aaglsd/anchors.hpp"
#include "aaglsd/gradient.hpp"
#include "aaglsd/image.hpp"
#include "aaglsd/linking.hpp"
#include "aaglsd/validate_merge.hpp"

namespace aaglsd {

struct DetectorParams {
    AnchorParams anchor;
    LinkParams link;
    ValidateParams validation;
    MergeParams merge;

    /// Validates every parameter block; the link-stage alignment tolerance
    /// must equal the anchor-stage one.
    void validate() const;
    /// Copy with link.T_aligned taken from anchor.T_aligned.
    DetectorParams synced() const;
};

/// Everything the pipeline computed for one image.
struct DetectionResult {
    GradientField gradient;
    AnchorMap anchors;
    std::vector<LineSegment> candidates;  ///< linking output, gradient-grid coordinates
    std::vector<LineSegment> validated;   ///< candidates passing validate()
    std::vector<LineSegment> segments;    ///< merged, in image coordinates
};

/// Offset between the gradient grid and pixel-centre image coordinates:
/// the 2x2 stencil at (x, y) is centred on (x + 0.5, y + 0.5).
inline constexpr double kGradientGridOffset = 0.5;

/// smooth -> gradient -> anchors -> linking -> validation -> merging.
///
/// Output coordinates put the centre of pixel (i, j) at (i, j).
class Detector {
public:
    explicit Detector(DetectorParams params = {});

    const DetectorParams& params() const noexcept { return params_; }

    std::vector<LineSegment> detect(const GrayImage& img) const;
    DetectionResult run(const GrayImage& img) const;

private:
    DetectorParams params_;
};

std::vector<Segment> geometries(const std::vector<LineSegment>& segs);

}  // namespace aaglsd
