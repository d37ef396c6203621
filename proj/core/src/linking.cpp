#include "aaglsd/linking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aaglsd {

void LinkParams::validate() const {
    if (!(T_dist > 0.0)) throw std::invalid_argument("T_dist must be > 0");
    if (!(S_min > 0 && S_min <= S_ra && S_ra <= S_aag)) {
        throw std::invalid_argument("skip budgets must satisfy 0 < S_min <= S_ra <= S_aag");
    }
    if (!(T_aligned > 0.0 && T_aligned <= kPi / 2.0)) {
        throw std::invalid_argument("T_aligned must lie in (0, pi/2]");
    }
}

void FitAccumulator::add(Point2d p) noexcept {
    if (count_ == 0) ref_ = p;
    const double x = p.x - ref_.x;
    const double y = p.y - ref_.y;
    sx_ += x;
    sy_ += y;
    sxx_ += x * x;
    syy_ += y * y;
    sxy_ += x * y;
    ++count_;
}

Point2d FitAccumulator::centroid() const noexcept {
    if (count_ == 0) return ref_;
    return {ref_.x + sx_ / count_, ref_.y + sy_ / count_};
}

double FitAccumulator::sxx() const noexcept { return count_ ? sxx_ - sx_ * sx_ / count_ : 0.0; }
double FitAccumulator::syy() const noexcept { return count_ ? syy_ - sy_ * sy_ / count_ : 0.0; }
double FitAccumulator::sxy() const noexcept { return count_ ? sxy_ - sx_ * sy_ / count_ : 0.0; }

LineFit fit_line(const FitAccumulator& acc) {
    const double vx = acc.sxx();
    const double vy = acc.syy();
    // Relative tolerance: the moments carry rounding error from the raw sums.
    const double scale = std::max(1.0, std::abs(vx) + std::abs(vy));
    if (acc.count() < 2 || !(vx + vy > 1e-12 * scale)) {
        throw std::domain_error("line fit is degenerate: fewer than two distinct points");
    }
    Point2d dir;
    if (acc.axisSwap()) {
        dir = {acc.sxy() / vy, 1.0};  // x = a + b y
    } else {
        dir = {1.0, acc.sxy() / vx};  // y = a + b x
    }
    const double len = norm(dir);
    dir = {dir.x / len, dir.y / len};
    LineFit fit;
    fit.line = {acc.centroid(), dir};
    fit.theta = fit.line.angle();
    return fit;
}

std::array<Pixel, 3> routing_candidates(Pixel current, Point2d heading) noexcept {
    if (std::abs(heading.x) >= std::abs(heading.y)) {
        const int x = current.x + (heading.x >= 0.0 ? 1 : -1);
        return {Pixel{x, current.y}, Pixel{x, current.y - 1}, Pixel{x, current.y + 1}};
    }
    const int y = current.y + (heading.y >= 0.0 ? 1 : -1);
    return {Pixel{current.x, y}, Pixel{current.x - 1, y}, Pixel{current.x + 1, y}};
}

std::optional<Pixel> route_next(const GradientField& field, Pixel current, Point2d heading, const Line* guide) {
    auto candidates = routing_candidates(current, heading);
    if (guide) {
        std::stable_sort(candidates.begin() + 1, candidates.end(), [&](Pixel a, Pixel b) {
            return guide->distance(to_point(a)) < guide->distance(to_point(b));
        });
    }
    std::optional<Pixel> best;
    double bestMag = -1.0;
    for (const Pixel& p : candidates) {
        if (!field.interior(p.x, p.y)) continue;
        const double m = field.mag(p);
        if (m > bestMag) {
            bestMag = m;
            best = p;
        }
    }
    return best;
}

std::optional<Pixel> route_next(const GradientField& field, Pixel current, Direction direction, double thetaSeg) {
    const double s = direction == Direction::Forward ? 1.0 : -1.0;
    return route_next(field, current, Point2d{s * std::cos(thetaSeg), s * std::sin(thetaSeg)});
}

namespace {

// Per-image scratch shared by consecutive link_from_aag calls.
class Linker {
public:
    Linker(AnchorMap& anchors, const GradientField& field, const LinkParams& params)
        : anchors_(anchors), field_(field), params_(params), stamp_(field.magnitude.size(), 0) {}

    std::optional<LineSegment> link(int groupId);

private:
    struct State {
        FitAccumulator acc;
        Line line;
        double theta = 0.0;
        LineSegment seg;
    };

    bool stamped(Pixel p) const { return stamp_[field_.index(p.x, p.y)] == token_; }
    void mark(Pixel p) { stamp_[field_.index(p.x, p.y)] = token_; }

    void admit(State& s, Pixel p) {
        if (stamped(p)) return;
        mark(p);
        s.acc.add(p);
        s.seg.support.push_back(p);
    }

    void absorb(State& s, AlignedAnchorGroup& g) {
        for (const Pixel& p : g.pixels) admit(s, p);
        g.linked = true;
        g.visited = true;
        s.seg.groups.push_back(g.id);
        ++s.seg.nAags;
    }

    // Refit after an insertion; keeps the previous line while the fit is degenerate.
    void refit(State& s, Point2d& heading) {
        try {
            const LineFit fit = fit_line(s.acc);
            s.line = fit.line;
            s.theta = fit.theta;
        } catch (const std::domain_error&) {
            return;
        }
        Point2d dir = s.line.dir;
        if (dot(dir, heading) < 0.0) dir = {-dir.x, -dir.y};
        heading = dir;
    }

    bool aligned(const AlignedAnchorGroup& g, const State& s) const {
        return angular_diff(g.thetaAag, s.theta) <= params_.T_aligned;
    }

    static Pixel furthest(const AlignedAnchorGroup& g, Point2d heading) {
        Pixel best = g.pixels[0];
        for (const Pixel& p : g.pixels) {
            if (dot(to_point(p), heading) > dot(to_point(best), heading)) best = p;
        }
        return best;
    }

    // Rule for a misaligned group: look up to S_min rounded steps ahead
    // along the segment for another available, aligned group.
    AlignedAnchorGroup* probe(const State& s, Pixel from, Point2d heading, int skipGroup) {
        for (int k = 1; k <= params_.S_min; ++k) {
            const Pixel p = round_pixel(to_point(from) + static_cast<double>(k) * heading);
            if (!anchors_.inside(p)) break;
            const auto gid = anchors_.groupOf(p);
            if (!gid || *gid == skipGroup) continue;
            AlignedAnchorGroup& g = anchors_.groups[static_cast<std::size_t>(*gid)];
            if (g.available() && aligned(g, s) && s.line.distance(to_point(p)) <= params_.T_dist) return &g;
        }
        return nullptr;
    }

    Pixel walk(State& s, Point2d& heading, Pixel start);

    AnchorMap& anchors_;
    const GradientField& field_;
    const LinkParams& params_;
    std::vector<int> stamp_;
    int token_ = 0;
};

Pixel Linker::walk(State& s, Point2d& heading, Pixel start) {
    Pixel cur = start;
    Pixel end = start;
    int remain = params_.S_min;
    const int maxIter = field_.width + field_.height;

    for (int iter = 0; iter < maxIter && remain > 0; ++iter) {
        const auto next = route_next(field_, cur, heading, &s.line);
        if (!next) break;
        const double residual = s.line.distance(to_point(*next));
        if (residual > params_.T_dist) break;

        if (stamped(*next)) {
            --remain;
            cur = *next;
            continue;
        }

        const AnchorClass cls = anchors_.classOf(*next);
        if (cls == AnchorClass::RegularAnchor) {
            admit(s, *next);
            ++s.seg.nAnchors;
            s.seg.maxAdmissionResidual = std::max(s.seg.maxAdmissionResidual, residual);
            remain = params_.S_ra;
            cur = end = *next;
            refit(s, heading);
            continue;
        }

        if (cls == AnchorClass::AagMember) {
            AlignedAnchorGroup& g = anchors_.groups[static_cast<std::size_t>(*anchors_.groupOf(*next))];
            if (g.available()) {
                AlignedAnchorGroup* target = nullptr;
                Pixel entry = *next;
                if (aligned(g, s)) {
                    target = &g;
                } else if ((target = probe(s, *next, heading, g.id))) {
                    entry = target->seed();
                }
                if (target) {
                    s.seg.maxAdmissionResidual =
                        std::max(s.seg.maxAdmissionResidual, s.line.distance(to_point(entry)));
                    absorb(s, *target);
                    remain = params_.S_aag;
                    refit(s, heading);
                    cur = end = furthest(*target, heading);
                    continue;
                }
            }
        }

        // Non-anchor, unavailable group, or a misaligned group with nothing ahead.
        mark(*next);
        --remain;
        cur = *next;
    }
    return end;
}

std::optional<LineSegment> Linker::link(int groupId) {
    AlignedAnchorGroup& seed = anchors_.groups.at(static_cast<std::size_t>(groupId));
    if (!seed.available()) return std::nullopt;
    seed.visited = true;
    ++token_;

    State s;
    s.theta = seed.thetaAag;
    for (const Pixel& p : seed.pixels) admit(s, p);
    s.seg.groups.push_back(seed.id);
    s.seg.nAags = 1;
    s.line = Line::through(s.acc.centroid(), s.theta);

    Point2d heading = s.line.dir;
    const Pixel endF = walk(s, heading, furthest(seed, heading));
    Point2d back{-heading.x, -heading.y};
    const Pixel endB = walk(s, back, furthest(seed, back));

    s.seg.supportPixels = s.acc.count();
    if (s.seg.supportPixels < 3) return std::nullopt;

    // Orient p1 -> p2 along the forward walk.
    Point2d dir = s.line.dir;
    if (dot(dir, Point2d{-back.x, -back.y}) < 0.0) dir = {-dir.x, -dir.y};
    const Line oriented{s.line.origin, dir};
    s.seg.p1 = oriented.project(to_point(endB));
    s.seg.p2 = oriented.project(to_point(endF));
    if (!(s.seg.length() > 1e-9)) return std::nullopt;

    s.seg.thetaSeg = s.theta;
    for (const Pixel& p : s.seg.support) {
        if (angular_diff(field_.level(p), s.theta) <= params_.T_aligned) ++s.seg.nAligned;
    }
    seed.linked = true;
    return std::move(s.seg);
}

}  // namespace

std::optional<LineSegment> link_from_aag(int groupId, AnchorMap& anchors, const GradientField& field,
                                         const LinkParams& params) {
    params.validate();
    Linker linker(anchors, field, params);
    return linker.link(groupId);
}

std::vector<LineSegment> detect_all(AnchorMap& anchors, const GradientField& field, const LinkParams& params) {
    params.validate();
    Linker linker(anchors, field, params);
    std::vector<LineSegment> out;
    for (std::size_t i = 0; i < anchors.groups.size(); ++i) {
        if (!anchors.groups[i].available()) continue;
        if (auto seg = linker.link(static_cast<int>(i))) out.push_back(std::move(*seg));
    }
    return out;
}

}  // namespace aaglsd
