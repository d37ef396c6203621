#include "aaglsd/detector.hpp"

#include <stdexcept>

namespace aaglsd {

void DetectorParams::validate() const {
    anchor.validate();
    link.validate();
    validation.validate();
    merge.validate();
    if (link.T_aligned != anchor.T_aligned) {
        throw std::invalid_argument("link and anchor T_aligned differ");
    }
}

DetectorParams DetectorParams::synced() const {
    DetectorParams p = *this;
    p.link.T_aligned = anchor.T_aligned;
    return p;
}

Detector::Detector(DetectorParams params) : params_(params.synced()) { params_.validate(); }

DetectionResult Detector::run(const GrayImage& img) const {
    DetectionResult r;
    r.gradient = compute_gradient(gaussian_smooth(img), params_.anchor.T_mag);
    r.anchors = build_anchor_map(r.gradient, params_.anchor);
    r.candidates = detect_all(r.anchors, r.gradient, params_.link);
    for (const auto& seg : r.candidates) {
        if (validate(seg, params_.validation)) r.validated.push_back(seg);
    }
    r.segments = merge_all(r.validated, params_.merge);
    const Point2d shift{kGradientGridOffset, kGradientGridOffset};
    for (auto& seg : r.segments) {
        seg.p1 = seg.p1 + shift;
        seg.p2 = seg.p2 + shift;
    }
    return r;
}

std::vector<LineSegment> Detector::detect(const GrayImage& img) const { return run(img).segments; }

std::vector<Segment> geometries(const std::vector<LineSegment>& segs) {
    std::vector<Segment> out;
    out.reserve(segs.size());
    for (const auto& s : segs) out.push_back(s.geometry());
    return out;
}

}  // namespace aaglsd
