#include "aaglsd/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aaglsd {

void AnchorParams::validate() const {
    if (!(T_mag >= 0.0)) throw std::invalid_argument("T_mag must be >= 0");
    if (!(T_anchor > 0.0)) throw std::invalid_argument("T_anchor must be > 0");
    if (!(T_aligned > 0.0 && T_aligned <= kPi / 2.0)) {
        throw std::invalid_argument("T_aligned must lie in (0, pi/2]");
    }
    if (n != 3) throw std::invalid_argument("n must be 3 (only supported neighbourhood size)");
}

std::vector<Pixel> pseudo_sort(const GradientField& field, int bins) {
    if (bins < 1) throw std::invalid_argument("pseudo_sort needs at least one bin");

    double maxMag = field.magnitudeThreshold;
    for (std::size_t i = 0; i < field.magnitude.size(); ++i) {
        if (field.validMask[i]) maxMag = std::max(maxMag, field.magnitude[i]);
    }
    const double lo = field.magnitudeThreshold;
    const double span = maxMag - lo;

    auto binOf = [&](double m) {
        if (!(span > 0.0)) return 0;
        const int b = static_cast<int>((m - lo) / span * bins);
        return std::clamp(b, 0, bins - 1);
    };

    // Counting sort keeps raster order within each bin.
    std::vector<int> counts(static_cast<std::size_t>(bins) + 1, 0);
    for (std::size_t i = 0; i < field.magnitude.size(); ++i) {
        if (field.validMask[i]) ++counts[static_cast<std::size_t>(bins - 1 - binOf(field.magnitude[i])) + 1];
    }
    for (int b = 0; b < bins; ++b) counts[b + 1] += counts[b];

    std::vector<Pixel> out(static_cast<std::size_t>(counts[bins]));
    for (int y = 0; y < field.height; ++y) {
        for (int x = 0; x < field.width; ++x) {
            const std::size_t i = field.index(x, y);
            if (!field.validMask[i]) continue;
            const int slot = bins - 1 - binOf(field.magnitude[i]);
            out[static_cast<std::size_t>(counts[slot]++)] = {x, y};
        }
    }
    return out;
}

Pixel gradient_step(double orientation) noexcept {
    const int q = static_cast<int>(std::floor(orientation / (kPi / 4.0) + 0.5)) & 3;
    switch (q) {
        case 0: return {1, 0};
        case 1: return {1, 1};
        case 2: return {0, 1};
        default: return {-1, 1};
    }
}

bool level_line_is_horizontal(double levelLine) noexcept { return std::abs(levelLine) <= kPi / 4.0; }

std::array<Pixel, 3> seed_subregion(Pixel seed, double levelLine, int sign) noexcept {
    if (level_line_is_horizontal(levelLine)) {
        const int x = seed.x + sign;
        return {Pixel{x, seed.y}, Pixel{x, seed.y - 1}, Pixel{x, seed.y + 1}};
    }
    const int y = seed.y + sign;
    return {Pixel{seed.x, y}, Pixel{seed.x - 1, y}, Pixel{seed.x + 1, y}};
}

bool passes_magnitude_test(const GradientField& field, Pixel seed, double T_anchor) noexcept {
    const std::size_t i = field.index(seed.x, seed.y);
    const Pixel step = gradient_step(field.orientation[i]);
    const Pixel a{seed.x + step.x, seed.y + step.y};
    const Pixel b{seed.x - step.x, seed.y - step.y};
    if (!field.inside(a.x, a.y) || !field.inside(b.x, b.y)) return false;
    const double m = field.magnitude[i];
    const double ma = field.mag(a);
    const double mb = field.mag(b);
    return m > ma && m > mb && std::max(m - ma, m - mb) >= T_anchor;
}

bool passes_alignment_test(const GradientField& field, Pixel seed, Pixel other, double T_aligned) noexcept {
    return angular_diff(field.level(seed), field.level(other)) <= T_aligned;
}

std::vector<AlignedAnchorGroup> extract_aags(const GradientField& field, const AnchorParams& params) {
    params.validate();
    std::vector<AlignedAnchorGroup> groups;
    std::vector<std::uint8_t> claimed(field.magnitude.size(), 0);

    auto strongest = [&](const std::array<Pixel, 3>& region) -> std::optional<Pixel> {
        std::optional<Pixel> best;
        double bestMag = -1.0;
        for (const Pixel& p : region) {
            if (!field.inside(p.x, p.y)) continue;
            const double m = field.mag(p);
            if (m > bestMag) {
                bestMag = m;
                best = p;
            }
        }
        return best;
    };

    for (const Pixel seed : pseudo_sort(field)) {
        if (claimed[field.index(seed.x, seed.y)]) continue;
        if (!passes_magnitude_test(field, seed, params.T_anchor)) continue;

        const double level = field.level(seed);
        const auto back = strongest(seed_subregion(seed, level, -1));
        const auto fwd = strongest(seed_subregion(seed, level, +1));
        if (!back || !fwd) continue;

        bool ok = true;
        for (const Pixel& p : {*back, *fwd}) {
            ok = ok && field.valid(p) && !claimed[field.index(p.x, p.y)] &&
                 passes_alignment_test(field, seed, p, params.T_aligned);
        }
        if (!ok) continue;

        AlignedAnchorGroup g;
        g.id = static_cast<int>(groups.size());
        g.pixels = {seed, *back, *fwd};
        const double levels[3] = {level, field.level(*back), field.level(*fwd)};
        g.thetaAag = axial_mean(levels, 3);
        for (const Pixel& p : g.pixels) claimed[field.index(p.x, p.y)] = 1;
        groups.push_back(g);
    }
    return groups;
}

AnchorMap nms_regular_anchors(const GradientField& field, std::vector<AlignedAnchorGroup> aags) {
    AnchorMap map;
    map.width = field.width;
    map.height = field.height;
    map.classes.assign(field.magnitude.size(), AnchorClass::NonAnchor);
    map.aagIndex.assign(field.magnitude.size(), -1);

    for (int y = 1; y + 1 < field.height; ++y) {
        for (int x = 1; x + 1 < field.width; ++x) {
            const std::size_t i = field.index(x, y);
            if (!field.validMask[i]) continue;
            const Pixel step = gradient_step(field.orientation[i]);
            const double m = field.magnitude[i];
            if (m > field.magnitude[field.index(x + step.x, y + step.y)] &&
                m > field.magnitude[field.index(x - step.x, y - step.y)]) {
                map.classes[i] = AnchorClass::RegularAnchor;
            }
        }
    }
    for (const auto& g : aags) {
        for (const Pixel& p : g.pixels) {
            const std::size_t i = map.index(p);
            map.classes[i] = AnchorClass::AagMember;
            map.aagIndex[i] = g.id;
        }
    }
    map.groups = std::move(aags);
    return map;
}

AnchorMap build_anchor_map(const GradientField& field, const AnchorParams& params) {
    return nms_regular_anchors(field, extract_aags(field, params));
}

GrayImage saliency_image(const AnchorMap& anchors) {
    std::vector<std::uint8_t> data(anchors.classes.size());
    std::transform(anchors.classes.begin(), anchors.classes.end(), data.begin(), [](AnchorClass c) {
        switch (c) {
            case AnchorClass::RegularAnchor: return std::uint8_t{128};
            case AnchorClass::AagMember: return std::uint8_t{255};
            default: return std::uint8_t{0};
        }
    });
    return GrayImage(anchors.width, anchors.height, std::move(data));
}

}  // namespace aaglsd
