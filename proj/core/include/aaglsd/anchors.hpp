#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "aaglsd/geometry.hpp"
#include "aaglsd/gradient.hpp"

namespace aaglsd {

struct AnchorParams {
    double T_mag = 5.22;
    double T_anchor = 3.0;
    double T_aligned = kPi / 8.0;
    int n = 3;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Three mutually distinct pixels of one seed neighbourhood whose
/// level-lines agree. pixels[0] is the seed, pixels[1] lies in the
/// backward sub-region and pixels[2] in the forward one.
struct AlignedAnchorGroup {
    int id = 0;
    std::array<Pixel, 3> pixels{};
    double thetaAag = 0.0;
    bool linked = false;
    bool visited = false;

    bool available() const noexcept { return !linked && !visited; }
    Pixel seed() const noexcept { return pixels[0]; }
};

enum class AnchorClass : std::uint8_t { NonAnchor = 0, RegularAnchor = 1, AagMember = 2 };

/// Per-pixel saliency classes plus the registry of aligned anchor groups.
struct AnchorMap {
    int width = 0;
    int height = 0;
    std::vector<AnchorClass> classes;
    std::vector<int> aagIndex;  ///< -1 when the pixel is in no group
    std::vector<AlignedAnchorGroup> groups;

    std::size_t index(Pixel p) const noexcept {
        return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(p.x);
    }
    bool inside(Pixel p) const noexcept { return p.x >= 0 && p.y >= 0 && p.x < width && p.y < height; }
    AnchorClass classOf(Pixel p) const noexcept { return classes[index(p)]; }
    std::optional<int> groupOf(Pixel p) const noexcept {
        const int g = aagIndex[index(p)];
        return g >= 0 ? std::optional<int>(g) : std::nullopt;
    }
};

/// Valid pixels bucketed into `bins` equal-width magnitude bins over
/// [T_mag, max magnitude], highest bin first, raster order within a bin.
std::vector<Pixel> pseudo_sort(const GradientField& field, int bins = 1024);

/// Offset of the neighbour along the gradient, quantized to 0/45/90/135 degrees.
Pixel gradient_step(double orientation) noexcept;

/// True when the level-line is within pi/4 of horizontal; the seed's
/// sub-regions are then the left and right columns, otherwise the top
/// and bottom rows.
bool level_line_is_horizontal(double levelLine) noexcept;

/// The three pixels of the backward (sign < 0) or forward (sign > 0)
/// sub-region, straight-ahead first.
std::array<Pixel, 3> seed_subregion(Pixel seed, double levelLine, int sign) noexcept;

/// Magnitude test for a seed: it strictly dominates both neighbours across
/// the edge and exceeds at least one of them by T_anchor.
bool passes_magnitude_test(const GradientField& field, Pixel seed, double T_anchor) noexcept;

/// Level-line consistency between the seed and one group member.
bool passes_alignment_test(const GradientField& field, Pixel seed, Pixel other, double T_aligned) noexcept;

/// Greedy extraction in pseudo-sort order. First-claimed pixels win.
std::vector<AlignedAnchorGroup> extract_aags(const GradientField& field, const AnchorParams& params);

/// Canny-style NMS over valid pixels; survivors not in a group become
/// regular anchors, group members are AagMember regardless of NMS.
AnchorMap nms_regular_anchors(const GradientField& field, std::vector<AlignedAnchorGroup> aags);

/// extract_aags followed by nms_regular_anchors.
AnchorMap build_anchor_map(const GradientField& field, const AnchorParams& params);

/// 0 = non-anchor, 128 = regular anchor, 255 = group member.
GrayImage saliency_image(const AnchorMap& anchors);

}  // namespace aaglsd
