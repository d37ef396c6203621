#include <gtest/gtest.h>

#include <random>

#include "aaglsd/detector.hpp"
#include "aaglsd/synthetic.hpp"
#include "aaglsd/validate_merge.hpp"
#include "support/test_support.hpp"

using namespace aaglsd;
using namespace testsupport;

namespace {

// Fully supported segment: every raster pixel aligned, groups tiling the length.
LineSegment seg(double x1, double y1, double x2, double y2) {
    LineSegment s;
    s.p1 = {x1, y1};
    s.p2 = {x2, y2};
    const int pixels = static_cast<int>(std::ceil(s.length()));
    s.nAags = pixels / 3;
    s.nAnchors = pixels - 3 * s.nAags;
    s.nAligned = pixels;
    s.supportPixels = pixels;
    s.thetaSeg = s.angle();
    return s;
}

double endpoint_error(const Segment& a, const Segment& b) {
    return std::min(std::max(distance(a.p1, b.p1), distance(a.p2, b.p2)),
                    std::max(distance(a.p1, b.p2), distance(a.p2, b.p1)));
}

std::vector<Pixel> union_raster(const LineSegment& a, const LineSegment& b) {
    auto r = bresenham(round_pixel(a.p1), round_pixel(a.p2));
    const auto rb = bresenham(round_pixel(b.p1), round_pixel(b.p2));
    r.insert(r.end(), rb.begin(), rb.end());
    return r;
}

}  // namespace

TEST(Validate, Examples) {
    const ValidateParams p;
    EXPECT_FALSE(validate(seg(0, 0, 8, 0), p));  // length 8 < T_len
    EXPECT_TRUE(validate(seg(0, 0, 100, 0), p));
    LineSegment two = seg(0, 0, 100, 0);
    two.nAags = 2;
    two.nAnchors = 94;
    EXPECT_FALSE(validate(two, p));
}

TEST(Validate, DensityThresholds) {
    const ValidateParams p;
    LineSegment s = seg(0, 0, 20, 0);  // ceil(length) = 20
    s.nAags = 3;
    s.nAnchors = 1;  // (1 + 9) / 20 = 0.5
    s.nAligned = 10;
    EXPECT_TRUE(validate(s, p));
    s.nAnchors = 0;
    EXPECT_FALSE(validate(s, p));
    s.nAnchors = 1;
    s.nAligned = 9;
    EXPECT_FALSE(validate(s, p));
}

TEST(Validate, ParamRanges) {
    ValidateParams v;
    v.rho1 = 0.0;
    EXPECT_THROW(v.validate(), std::invalid_argument);
    v = {};
    v.N_aag = 0;
    EXPECT_THROW(v.validate(), std::invalid_argument);
    MergeParams m;
    m.D_e = -1;
    EXPECT_THROW(m.validate(), std::invalid_argument);
}

TEST(GeometryDists, Examples) {
    const Segment a{{0, 0}, {20, 0}};
    auto d = geometry_dists(a, a);
    EXPECT_DOUBLE_EQ(d.dcMax, 0.0);
    EXPECT_DOUBLE_EQ(d.da, 0.0);
    EXPECT_DOUBLE_EQ(d.deMin, 0.0);
    EXPECT_TRUE(d.overlap);

    d = geometry_dists(a, Segment{{25, 0}, {45, 0}});
    EXPECT_FALSE(d.overlap);
    EXPECT_DOUBLE_EQ(d.deMin, 5.0);
    EXPECT_DOUBLE_EQ(d.dcMax, 0.0);

    d = geometry_dists(a, Segment{{0, 1}, {20, 1}});
    EXPECT_DOUBLE_EQ(d.dcMax, 1.0);
    EXPECT_DOUBLE_EQ(d.da, 0.0);
    EXPECT_TRUE(d.overlap);

    EXPECT_THROW(geometry_dists(a, Segment{{3, 3}, {3, 3}}), std::invalid_argument);
}

TEST(GeometryDists, TouchingEndpointsIsNotOverlap) {
    const auto d = geometry_dists(Segment{{0, 0}, {10, 0}}, Segment{{10, 0}, {20, 0}});
    EXPECT_FALSE(d.overlap);
    EXPECT_DOUBLE_EQ(d.deMin, 0.0);
}

TEST(ShouldMerge, Examples) {
    const MergeParams p;
    const Segment a{{0, 0}, {40, 0}};
    EXPECT_TRUE(should_merge(a, Segment{{2, 1}, {38, 1}}, p));
    EXPECT_FALSE(should_merge(a, Segment{{20, -20}, {20, 20}}, p));
    EXPECT_TRUE(should_merge(a, Segment{{48, 0}, {80, 0}}, p));
    EXPECT_FALSE(should_merge(a, Segment{{50, 0}, {80, 0}}, p));  // 10 px > D_e
}

TEST(ShouldMerge, ShortPieceInsideLongOne) {
    // The short piece's projection covers the long one only partly; either order merges.
    const MergeParams p;
    const Segment longer{{0, 0}, {100, 0}};
    const Segment shorter{{40, 0.5}, {60, 0.5}};
    EXPECT_TRUE(should_merge(longer, shorter, p));
    EXPECT_TRUE(should_merge(shorter, longer, p));
}

TEST(ShouldMerge, StrictModeMergesCorners) {
    const Segment a{{0, 0}, {20, 0}};
    const Segment b{{20, 3}, {20, 23}};
    MergeParams p;
    EXPECT_FALSE(should_merge(a, b, p));
    p.strictEq7 = true;
    EXPECT_TRUE(should_merge(a, b, p));
}

TEST(MergePair, SplitHalvesRecoverSegment) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pos(20.0, 480.0);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> len(30.0, 200.0);
    std::uniform_real_distribution<double> gapDist(0.0, MergeParams{}.D_e);
    std::uniform_real_distribution<double> cut(0.3, 0.7);
    for (int i = 0; i < 300; ++i) {
        const Point2d c{pos(rng), pos(rng)};
        const double a = ang(rng), l = len(rng);
        const Point2d u{std::cos(a), std::sin(a)};
        const Segment full{c - 0.5 * l * u, c + 0.5 * l * u};
        const double t = cut(rng) * l, gap = gapDist(rng);
        const LineSegment h1 = seg(full.p1.x, full.p1.y, full.p1.x + (t - gap / 2) * u.x, full.p1.y + (t - gap / 2) * u.y);
        const LineSegment h2 = seg(full.p1.x + (t + gap / 2) * u.x, full.p1.y + (t + gap / 2) * u.y, full.p2.x, full.p2.y);
        ASSERT_TRUE(should_merge(h1.geometry(), h2.geometry(), MergeParams{})) << i;
        const LineSegment m = merge_pair(h1, h2);
        EXPECT_LE(endpoint_error(m.geometry(), full), 1.0) << i;
        EXPECT_EQ(m.nAags, h1.nAags + h2.nAags);
        EXPECT_EQ(m.nAnchors, h1.nAnchors + h2.nAnchors);
        EXPECT_EQ(m.nAligned, h1.nAligned + h2.nAligned);
    }
}

TEST(MergePair, IdenticalIntegerSegmentsAreFixed) {
    // Axis-aligned and diagonal rasters are exact lines, so the refit is exact.
    for (const auto& s : {seg(3, 7, 53, 7), seg(9, 2, 9, 80), seg(4, 4, 60, 60), seg(70, 5, 10, 65)}) {
        const LineSegment m = merge_pair(s, s);
        EXPECT_NEAR(distance(m.p1, s.p1), 0.0, 1e-6);
        EXPECT_NEAR(distance(m.p2, s.p2), 0.0, 1e-6);
    }
}

TEST(MergePair, ParallelDuplicatesMeetInTheMiddle) {
    const LineSegment a = seg(0, 10, 50, 10);
    const LineSegment b = seg(0, 11, 50, 11);
    const LineSegment m = merge_pair(a, b);
    // Union raster is symmetric about y = 10.5; the OLS oracle agrees.
    std::vector<Point2d> pts;
    for (const auto& p : union_raster(a, b)) pts.push_back(to_point(p));
    const auto [slope, intercept] = ols(pts);
    EXPECT_NEAR(slope, 0.0, 1e-12);
    EXPECT_NEAR(intercept, 10.5, 1e-12);
    EXPECT_NEAR(m.p1.y, 10.5, 1e-9);
    EXPECT_NEAR(m.p2.y, 10.5, 1e-9);
    EXPECT_NEAR(m.length(), 50.0, 1e-9);
}

TEST(MergePair, EndpointsBoundUnionProjections) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(0.0, 200.0);
    std::normal_distribution<double> jitter(0.0, 0.6);
    for (int i = 0; i < 200; ++i) {
        const LineSegment a = seg(pos(rng), pos(rng), pos(rng), pos(rng));
        if (a.length() < 2.0) continue;
        const LineSegment b = seg(a.p1.x + jitter(rng), a.p1.y + jitter(rng), a.p2.x + jitter(rng), a.p2.y + jitter(rng));
        const LineSegment m = merge_pair(a, b);
        const Line l = m.geometry().line();
        const double lo = l.param(m.p1), hi = l.param(m.p2);
        for (const auto& p : union_raster(a, b)) {
            const double t = l.param(to_point(p));
            EXPECT_GE(t, lo - 1e-9);
            EXPECT_LE(t, hi + 1e-9);
        }
    }
}

TEST(MergeAll, NoQualifyingPairsIsIdentity) {
    const std::vector<LineSegment> in{seg(0, 0, 50, 0), seg(0, 40, 30, 40), seg(80, 0, 80, 60)};
    const auto out = merge_all(in, MergeParams{});
    ASSERT_EQ(out.size(), 3u);
    EXPECT_DOUBLE_EQ(out[0].length(), 60.0);
    EXPECT_DOUBLE_EQ(out[1].length(), 50.0);
    EXPECT_DOUBLE_EQ(out[2].length(), 30.0);
}

TEST(MergeAll, ChainOfThreeBecomesOne) {
    const auto out = merge_all({seg(70, 0, 100, 0), seg(0, 0, 30, 0), seg(35, 0, 65, 0)}, MergeParams{});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_NEAR(std::min(out[0].p1.x, out[0].p2.x), 0.0, 1e-9);
    EXPECT_NEAR(std::max(out[0].p1.x, out[0].p2.x), 100.0, 1e-9);
    EXPECT_EQ(out[0].nAags, 30);
}

TEST(MergeAllProperties, FixedPointAndNoMergeablePairs) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pos(10.0, 300.0);
    std::uniform_real_distribution<double> ang(0.0, kPi);
    std::uniform_real_distribution<double> len(10.0, 120.0);
    std::normal_distribution<double> jitter(0.0, 0.4);
    std::uniform_int_distribution<int> pieces(1, 4);
    const MergeParams p;
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<LineSegment> in;
        for (int line = 0; line < 6; ++line) {
            const Point2d c{pos(rng), pos(rng)};
            const double a = ang(rng), l = len(rng);
            const Point2d u{std::cos(a), std::sin(a)};
            const int k = pieces(rng);
            for (int j = 0; j < k; ++j) {
                const double t0 = l * j / k, t1 = l * (j + 1) / k - 2.0;
                if (t1 - t0 < 3.0) continue;
                in.push_back(seg(c.x + t0 * u.x + jitter(rng), c.y + t0 * u.y + jitter(rng), c.x + t1 * u.x + jitter(rng),
                                 c.y + t1 * u.y + jitter(rng)));
            }
        }
        const auto out = merge_all(in, p);
        EXPECT_LE(out.size(), in.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (i > 0) EXPECT_GE(out[i - 1].length(), out[i].length());
            for (std::size_t j = i + 1; j < out.size(); ++j) {
                EXPECT_FALSE(should_merge(out[i].geometry(), out[j].geometry(), p)) << trial << ' ' << i << ' ' << j;
            }
        }
        const auto again = merge_all(out, p);
        ASSERT_EQ(again.size(), out.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            EXPECT_EQ(again[i].p1, out[i].p1);
            EXPECT_EQ(again[i].p2, out[i].p2);
        }
    }
}

TEST(MergeAllProperties, DetectorOutputStaysValid) {
    synth::SceneSpec spec;
    spec.width = 256;
    spec.height = 256;
    spec.segments = 6;
    spec.maxLength = 150;
    const Detector det;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto r = det.run(synth::make_scene(spec, seed).image);
        for (const auto& s : r.segments) EXPECT_TRUE(validate(s, det.params().validation)) << seed;
        for (std::size_t i = 0; i < r.segments.size(); ++i)
            for (std::size_t j = i + 1; j < r.segments.size(); ++j)
                EXPECT_FALSE(should_merge(r.segments[i].geometry(), r.segments[j].geometry(), det.params().merge));
    }
}
