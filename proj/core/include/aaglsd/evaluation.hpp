#pragma once

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "aaglsd/geometry.hpp"

namespace aaglsd {

/// Raised by the ground-truth and homography readers; the message names
/// the file and, for content errors, the 1-based line number.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GroundTruth {
    std::string imageId;
    std::vector<Segment> segments;
};

enum class MatchMode { Con1, Con2, Custom };

struct MatchParams {
    double lambdaArea = 0.5;
    double D_c = 1.0;
    double D_a = kPi / 60.0;
    MatchMode mode = MatchMode::Con1;

    static MatchParams con1() { return {0.5, 1.0, kPi / 60.0, MatchMode::Con1}; }
    static MatchParams con2() { return {0.9, 1.0, kPi / 60.0, MatchMode::Con2}; }
    static MatchParams custom(double lambda, double dc = 1.0, double da = kPi / 60.0) {
        return {lambda, dc, da, MatchMode::Custom};
    }

    void validate() const;
};

/// Sums behind the ratios, kept so reports can be pooled across images.
struct MatchTotals {
    double intersection = 0.0;  ///< sum of len_inter over matched pairs
    double predLength = 0.0;
    double gtLength = 0.0;
    double unionLength = 0.0;   ///< IoU denominator
    int matched = 0;
    int predCount = 0;
    int gtCount = 0;

    MatchTotals& operator+=(const MatchTotals& o);
};

struct ImageScore {
    std::string imageId;
    MatchTotals totals;
    double ap = 0.0, ar = 0.0, iou = 0.0, fscore = 0.0;
};

struct EvalReport {
    double ap = 0.0;
    double ar = 0.0;
    double iou = 0.0;
    double fscore = 0.0;
    MatchTotals totals;
    std::vector<ImageScore> perImage;
    MatchParams params;
};

/// 2 ap ar / (ap + ar), or 0 when both are 0.
double f_score(double ap, double ar) noexcept;

/// Length of the overlap between pred's projection onto gt's supporting
/// line and gt itself.
double intersection_length(const Segment& pred, const Segment& gt);

/// Overlap, centre-distance and angle tests plus the two-sided area ratio.
bool is_true_positive(const Segment& pred, const Segment& gt, const MatchParams& p);

/// One matched prediction/ground-truth pair.
struct Match {
    int pred = -1;
    int gt = -1;
    double intersection = 0.0;
};

/// Greedy one-to-one assignment by decreasing intersection length among
/// true-positive-eligible pairs.
std::vector<Match> match_segments(const std::vector<Segment>& preds, const std::vector<Segment>& gts,
                                  const MatchParams& p);

/// Per-image sums. Matched pairs add len_pred + len_gt - len_inter to the
/// IoU denominator, unmatched segments their full length.
MatchTotals score_image(const std::vector<Segment>& preds, const std::vector<Segment>& gts, const MatchParams& p);

/// Single-image evaluation.
EvalReport evaluate(const std::vector<Segment>& preds, const std::vector<Segment>& gts, const MatchParams& p);

struct ImagePair {
    std::string imageId;
    std::vector<Segment> preds;
    std::vector<Segment> gts;
};

/// Corpus evaluation: sums are pooled over images before taking ratios.
EvalReport evaluate_corpus(const std::vector<ImagePair>& images, const MatchParams& p);

/// Row-major 3x3 projective transform.
struct Homography {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Homography identity() { return {}; }
    Point2d apply(Point2d p) const;
    double determinant() const noexcept;
    /// Throws std::domain_error when singular.
    Homography inverse() const;
};

/// (N_match / 2)(1 / N_ref + 1 / N_test), where N_match counts test segments
/// that, after warping by `testToRef`, match at least one reference segment.
/// Throws std::invalid_argument if either set is empty.
double repeatability(const std::vector<Segment>& ref, const std::vector<Segment>& test, const Homography& testToRef,
                     const MatchParams& p);

/// Number of test segments counted by repeatability().
int count_repeated(const std::vector<Segment>& ref, const std::vector<Segment>& test, const Homography& testToRef,
                   const MatchParams& p);

/// `x1,y1,x2,y2` per line; extra columns and one leading header line are
/// ignored, as are blank lines and `#` comments.
GroundTruth load_ground_truth(const std::filesystem::path& path);
GroundTruth parse_ground_truth(const std::string& text, const std::string& imageId = {});

/// Nine whitespace-separated reals, row-major.
Homography load_homography(const std::filesystem::path& path);
Homography parse_homography(const std::string& text, const std::string& source = "homography");

}  // namespace aaglsd
