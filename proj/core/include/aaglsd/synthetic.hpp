#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "aaglsd/geometry.hpp"
#include "aaglsd/image.hpp"

namespace aaglsd::synth {

/// One rendered edge: a step of `contrast` grey levels across the segment,
/// bright towards the normal (-dy, dx) of p1 -> p2. The bright
/// side fades linearly to the background within `fade` pixels of the
/// segment. Past each endpoint the bright side turns into an angular ramp
/// spanning `capSpread` radians from the bright-side normal, so the end has
/// no sharp cap edge. capSpread = pi spreads the ramp over the whole half
/// plane beyond the end, which leaves a contrast tail along the extension.
struct EdgeSpec {
    Segment segment;
    double contrast = 60.0;
    double fade = 30.0;
    double capSpread = kPi / 3.0;
};

/// Noise-free rendering with 4x4 supersampling near the edges.
RealImage render_edges(int width, int height, const std::vector<EdgeSpec>& edges, double background);

/// Adds i.i.d. Gaussian noise and rounds to 8 bits.
GrayImage add_noise(const RealImage& img, double sigma, std::mt19937_64& rng);

struct SceneSpec {
    int width = 512;
    int height = 512;
    int segments = 10;
    double minLength = 40.0;
    double maxLength = 200.0;
    double minContrast = 40.0;
    double maxContrast = 80.0;
    double noiseSigma = 3.0;
    double background = 70.0;
    double minSeparation = 20.0;  ///< between any two segments
    double margin = 16.0;         ///< keeps endpoints away from the image border
    double capSpread = kPi / 3.0;  ///< see EdgeSpec
};

struct Scene {
    std::vector<EdgeSpec> edges;
    RealImage clean;
    GrayImage image;

    std::vector<Segment> truth() const;
};

/// Random non-intersecting edges, rendered and noised. Deterministic in `seed`.
Scene make_scene(const SceneSpec& spec, std::uint64_t seed);

/// Same edges, background shifted by `offset`, fresh noise from `seed`.
GrayImage rerender(const Scene& scene, const SceneSpec& spec, double offset, std::uint64_t seed);

/// Shortest distance between two segments (0 when they intersect).
double segment_distance(const Segment& a, const Segment& b);

}  // namespace aaglsd::synth
