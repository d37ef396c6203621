#pragma once

#include <vector>

#include "aaglsd/geometry.hpp"
#include "aaglsd/linking.hpp"

namespace aaglsd {

struct ValidateParams {
    double T_len = 9.0;
    int N_aag = 3;
    double rho1 = 0.5;  ///< anchor density
    double rho2 = 0.5;  ///< alignment density

    void validate() const;
};

struct MergeParams {
    double D_c = 1.5;
    double D_a = kPi / 36.0;
    double D_e = 9.0;
    /// Literal endpoint rule: no angle or centre-distance guard for disjoint pairs.
    bool strictEq7 = false;

    void validate() const;
};

/// Length, group count and the two support densities against their thresholds.
/// Densities use ceil(length) as the pixel-count denominator; each group
/// counts three anchor pixels.
bool validate(const LineSegment& seg, const ValidateParams& p);

struct PairDistances {
    double dcMax = 0.0;  ///< larger of the two midpoint-to-other-line distances
    double da = 0.0;     ///< orientation difference in [0, pi/2]
    double deMin = 0.0;  ///< closest endpoint pair
    bool overlap = false;  ///< a projects onto b's extent with positive length
};

/// Throws std::invalid_argument for a zero-length segment.
PairDistances geometry_dists(const Segment& a, const Segment& b);

/// Overlapping near-duplicates, or disjoint pieces with close endpoints.
bool should_merge(const Segment& a, const Segment& b, const MergeParams& p);

/// Rasterizes both segments, refits the union and takes the extreme pixel
/// projections as endpoints. Support statistics are summed.
LineSegment merge_pair(const LineSegment& a, const LineSegment& b);

/// Merges qualifying pairs (tested in both orders) until a fixed point.
/// Output is sorted by decreasing length.
std::vector<LineSegment> merge_all(std::vector<LineSegment> segs, const MergeParams& p);

}  // namespace aaglsd
