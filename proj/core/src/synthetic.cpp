#include "aaglsd/synthetic.hpp"

#include <algorithm>
#include <cmath>

namespace aaglsd::synth {

namespace {

struct EdgeFrame {
    Point2d a;
    Point2d u;  // along the segment
    Point2d n;  // towards the bright side
    double length;
};

EdgeFrame frame_of(const Segment& s) {
    const double len = s.length();
    const Point2d u{(s.p2.x - s.p1.x) / len, (s.p2.y - s.p1.y) / len};
    return {s.p1, u, {-u.y, u.x}, len};
}

double sample(const EdgeFrame& f, const EdgeSpec& e, Point2d p) {
    const Point2d r = p - f.a;
    const double s = dot(r, f.u);
    const double d = dot(r, f.n);

    // Beyond an end, brightness ramps with the angle measured from the
    // bright-side normal through the endpoint.
    double dist = 0.0;
    double bright = 0.0;
    if (s < 0.0 || s > f.length) {
        const double beyond = s < 0.0 ? -s : s - f.length;
        dist = std::hypot(beyond, d);
        bright = std::clamp(1.0 - std::atan2(beyond, d) / e.capSpread, 0.0, 1.0);
    } else {
        dist = std::abs(d);
        bright = d > 0.0 ? 1.0 : (d < 0.0 ? 0.0 : 0.5);
    }
    const double envelope = std::max(0.0, 1.0 - dist / e.fade);
    return e.contrast * bright * envelope;
}

}  // namespace

double segment_distance(const Segment& a, const Segment& b) {
    auto pointSeg = [](Point2d p, const Segment& s) {
        const Point2d d = s.p2 - s.p1;
        const double l2 = dot(d, d);
        double t = l2 > 0.0 ? dot(p - s.p1, d) / l2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        return distance(p, s.p1 + t * d);
    };
    const Point2d da = a.p2 - a.p1;
    const Point2d db = b.p2 - b.p1;
    const double c1 = cross(da, b.p1 - a.p1);
    const double c2 = cross(da, b.p2 - a.p1);
    const double c3 = cross(db, a.p1 - b.p1);
    const double c4 = cross(db, a.p2 - b.p1);
    if (((c1 > 0) != (c2 > 0)) && ((c3 > 0) != (c4 > 0))) return 0.0;
    return std::min({pointSeg(a.p1, b), pointSeg(a.p2, b), pointSeg(b.p1, a), pointSeg(b.p2, a)});
}

RealImage render_edges(int width, int height, const std::vector<EdgeSpec>& edges, double background) {
    RealImage img(width, height, background);
    constexpr int kSuper = 4;
    for (const EdgeSpec& e : edges) {
        const EdgeFrame f = frame_of(e.segment);
        const double pad = e.fade + 2.0;
        const int x0 = std::max(0, static_cast<int>(std::floor(std::min(e.segment.p1.x, e.segment.p2.x) - pad)));
        const int x1 = std::min(width - 1, static_cast<int>(std::ceil(std::max(e.segment.p1.x, e.segment.p2.x) + pad)));
        const int y0 = std::max(0, static_cast<int>(std::floor(std::min(e.segment.p1.y, e.segment.p2.y) - pad)));
        const int y1 = std::min(height - 1, static_cast<int>(std::ceil(std::max(e.segment.p1.y, e.segment.p2.y) + pad)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const Point2d c{static_cast<double>(x), static_cast<double>(y)};
                const Point2d r = c - f.a;
                const double s = dot(r, f.u);
                const double d = dot(r, f.n);
                const double dist = s < 0.0 ? std::hypot(s, d) : (s > f.length ? std::hypot(s - f.length, d) : std::abs(d));
                if (dist > e.fade + 1.0) continue;
                double v = 0.0;
                if (dist < 2.0) {
                    for (int sy = 0; sy < kSuper; ++sy) {
                        for (int sx = 0; sx < kSuper; ++sx) {
                            const Point2d q{x - 0.5 + (sx + 0.5) / kSuper, y - 0.5 + (sy + 0.5) / kSuper};
                            v += sample(f, e, q);
                        }
                    }
                    v /= kSuper * kSuper;
                } else {
                    v = sample(f, e, c);
                }
                img.at(x, y) += v;
            }
        }
    }
    return img;
}

GrayImage add_noise(const RealImage& img, double sigma, std::mt19937_64& rng) {
    std::normal_distribution<double> noise(0.0, sigma);
    RealImage noisy = img;
    if (sigma > 0.0) {
        for (double& v : noisy.data) v += noise(rng);
    }
    return noisy.quantize();
}

std::vector<Segment> Scene::truth() const {
    std::vector<Segment> out;
    out.reserve(edges.size());
    for (const auto& e : edges) out.push_back(e.segment);
    return out;
}

namespace {

std::vector<EdgeSpec> place_edges(const SceneSpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ux(spec.margin, spec.width - 1 - spec.margin);
    std::uniform_real_distribution<double> uy(spec.margin, spec.height - 1 - spec.margin);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> len(spec.minLength, spec.maxLength);
    std::uniform_real_distribution<double> con(spec.minContrast, spec.maxContrast);

    std::vector<EdgeSpec> edges;
    const auto inside = [&](Point2d p) {
        return p.x >= spec.margin && p.y >= spec.margin && p.x <= spec.width - 1 - spec.margin &&
               p.y <= spec.height - 1 - spec.margin;
    };
    for (int attempt = 0; static_cast<int>(edges.size()) < spec.segments && attempt < 100000; ++attempt) {
        const Point2d c{ux(rng), uy(rng)};
        const double a = ang(rng);
        const double l = len(rng);
        const double contrast = con(rng);
        const Point2d half{0.5 * l * std::cos(a), 0.5 * l * std::sin(a)};
        const Segment s{c - half, c + half};
        if (!inside(s.p1) || !inside(s.p2)) continue;
        const bool clear = std::all_of(edges.begin(), edges.end(), [&](const EdgeSpec& e) {
            return segment_distance(e.segment, s) >= spec.minSeparation;
        });
        if (!clear) continue;
        // Lateral fade keeps the ramp gradient near 2 grey levels per pixel.
        edges.push_back({s, contrast, std::max(20.0, contrast / 2.0), spec.capSpread});
    }
    return edges;
}

}  // namespace

Scene make_scene(const SceneSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Scene scene;
    scene.edges = place_edges(spec, rng);
    scene.clean = render_edges(spec.width, spec.height, scene.edges, spec.background);
    scene.image = add_noise(scene.clean, spec.noiseSigma, rng);
    return scene;
}

GrayImage rerender(const Scene& scene, const SceneSpec& spec, double offset, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    RealImage shifted = scene.clean;
    for (double& v : shifted.data) v += offset;
    return add_noise(shifted, spec.noiseSigma, rng);
}

}  // namespace aaglsd::synth
