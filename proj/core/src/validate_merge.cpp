#include "aaglsd/validate_merge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aaglsd {

void ValidateParams::validate() const {
    if (!(T_len > 0.0)) throw std::invalid_argument("T_len must be > 0");
    if (N_aag < 1) throw std::invalid_argument("N_aag must be >= 1");
    if (!(rho1 > 0.0 && rho1 <= 1.0)) throw std::invalid_argument("rho1 must lie in (0, 1]");
    if (!(rho2 > 0.0 && rho2 <= 1.0)) throw std::invalid_argument("rho2 must lie in (0, 1]");
}

void MergeParams::validate() const {
    if (!(D_c > 0.0)) throw std::invalid_argument("D_c must be > 0");
    if (!(D_a > 0.0)) throw std::invalid_argument("D_a must be > 0");
    if (!(D_e > 0.0)) throw std::invalid_argument("D_e must be > 0");
}

bool validate(const LineSegment& seg, const ValidateParams& p) {
    const double len = seg.length();
    if (!(len >= p.T_len) || seg.nAags < p.N_aag) return false;
    const double pixels = std::ceil(len);
    const double anchorDensity = (seg.nAnchors + 3.0 * seg.nAags) / pixels;
    const double alignDensity = seg.nAligned / pixels;
    return anchorDensity >= p.rho1 && alignDensity >= p.rho2;
}

PairDistances geometry_dists(const Segment& a, const Segment& b) {
    const Line la = a.line();
    const Line lb = b.line();
    PairDistances d;
    d.da = angular_diff(a.angle(), b.angle());
    d.dcMax = std::max(lb.distance(a.midpoint()), la.distance(b.midpoint()));
    d.deMin = std::min({distance(a.p1, b.p1), distance(a.p1, b.p2), distance(a.p2, b.p1), distance(a.p2, b.p2)});

    const double t1 = lb.param(a.p1);
    const double t2 = lb.param(a.p2);
    const double lo = std::max(std::min(t1, t2), 0.0);
    const double hi = std::min(std::max(t1, t2), b.length());
    d.overlap = hi - lo > 0.0;
    return d;
}

bool should_merge(const Segment& a, const Segment& b, const MergeParams& p) {
    const PairDistances d = geometry_dists(a, b);
    const bool overlap = d.overlap || geometry_dists(b, a).overlap;
    const bool close = d.dcMax <= p.D_c && d.da <= p.D_a;
    if (overlap) return close;
    return d.deMin <= p.D_e && (p.strictEq7 || close);
}

LineSegment merge_pair(const LineSegment& a, const LineSegment& b) {
    std::vector<Pixel> raster = bresenham(round_pixel(a.p1), round_pixel(a.p2));
    const std::vector<Pixel> rb = bresenham(round_pixel(b.p1), round_pixel(b.p2));
    raster.insert(raster.end(), rb.begin(), rb.end());
    std::sort(raster.begin(), raster.end(), [](Pixel u, Pixel v) { return u.y != v.y ? u.y < v.y : u.x < v.x; });
    raster.erase(std::unique(raster.begin(), raster.end()), raster.end());

    FitAccumulator acc;
    for (const Pixel& px : raster) acc.add(px);

    LineSegment out;
    Line line;
    double theta = 0.0;
    try {
        const LineFit fit = fit_line(acc);
        line = fit.line;
        theta = fit.theta;
    } catch (const std::domain_error&) {
        // Both segments collapse onto one pixel; keep the longer one's geometry.
        const LineSegment& keep = a.length() >= b.length() ? a : b;
        line = Line{keep.p1, keep.geometry().line().dir};
        theta = keep.angle();
    }
    // Keep the orientation of `a` so repeated merges do not flip endpoints.
    if (dot(line.dir, a.p2 - a.p1) < 0.0) line.dir = {-line.dir.x, -line.dir.y};

    double tmin = std::numeric_limits<double>::infinity();
    double tmax = -std::numeric_limits<double>::infinity();
    for (const Pixel& px : raster) {
        const double t = line.param(to_point(px));
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
    }
    out.p1 = line.at(tmin);
    out.p2 = line.at(tmax);
    out.thetaSeg = theta;
    out.nAnchors = a.nAnchors + b.nAnchors;
    out.nAags = a.nAags + b.nAags;
    out.nAligned = a.nAligned + b.nAligned;
    out.supportPixels = a.supportPixels + b.supportPixels;
    out.maxAdmissionResidual = std::max(a.maxAdmissionResidual, b.maxAdmissionResidual);
    out.groups = a.groups;
    out.groups.insert(out.groups.end(), b.groups.begin(), b.groups.end());
    out.support = a.support;
    out.support.insert(out.support.end(), b.support.begin(), b.support.end());
    return out;
}

namespace {

void sort_by_length(std::vector<LineSegment>& segs) {
    std::stable_sort(segs.begin(), segs.end(), [](const LineSegment& u, const LineSegment& v) {
        const double lu = u.length();
        const double lv = v.length();
        if (lu != lv) return lu > lv;
        if (u.p1.y != v.p1.y) return u.p1.y < v.p1.y;
        return u.p1.x < v.p1.x;
    });
}

}  // namespace

std::vector<LineSegment> merge_all(std::vector<LineSegment> segs, const MergeParams& p) {
    p.validate();
    sort_by_length(segs);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            for (std::size_t j = i + 1; j < segs.size();) {
                if (should_merge(segs[i].geometry(), segs[j].geometry(), p)) {
                    segs[i] = merge_pair(segs[i], segs[j]);
                    segs.erase(segs.begin() + static_cast<std::ptrdiff_t>(j));
                    changed = true;
                    j = i + 1;  // segs[i] changed; recheck everything after it
                } else {
                    ++j;
                }
            }
        }
        sort_by_length(segs);
    }
    return segs;
}

}  // namespace aaglsd
