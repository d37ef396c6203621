#include "aaglsd/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "aaglsd/validate_merge.hpp"

namespace aaglsd {

void MatchParams::validate() const {
    if (!(lambdaArea > 0.0 && lambdaArea <= 1.0)) throw std::invalid_argument("lambda_area must lie in (0, 1]");
    if (!(D_c > 0.0)) throw std::invalid_argument("match D_c must be > 0");
    if (!(D_a > 0.0)) throw std::invalid_argument("match D_a must be > 0");
}

MatchTotals& MatchTotals::operator+=(const MatchTotals& o) {
    intersection += o.intersection;
    predLength += o.predLength;
    gtLength += o.gtLength;
    unionLength += o.unionLength;
    matched += o.matched;
    predCount += o.predCount;
    gtCount += o.gtCount;
    return *this;
}

double f_score(double ap, double ar) noexcept { return ap + ar > 0.0 ? 2.0 * ap * ar / (ap + ar) : 0.0; }

double intersection_length(const Segment& pred, const Segment& gt) {
    const Line l = gt.line();
    const double t1 = l.param(pred.p1);
    const double t2 = l.param(pred.p2);
    const double lo = std::max(std::min(t1, t2), 0.0);
    const double hi = std::min(std::max(t1, t2), gt.length());
    return std::max(hi - lo, 0.0);
}

bool is_true_positive(const Segment& pred, const Segment& gt, const MatchParams& p) {
    const PairDistances d = geometry_dists(pred, gt);
    if (!d.overlap || d.dcMax > p.D_c || d.da > p.D_a) return false;
    const double inter = intersection_length(pred, gt);
    return inter / gt.length() >= p.lambdaArea && inter / pred.length() >= p.lambdaArea;
}

std::vector<Match> match_segments(const std::vector<Segment>& preds, const std::vector<Segment>& gts,
                                  const MatchParams& p) {
    std::vector<Match> candidates;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (!(preds[i].length() > 0.0)) continue;
        for (std::size_t j = 0; j < gts.size(); ++j) {
            if (is_true_positive(preds[i], gts[j], p)) {
                candidates.push_back({static_cast<int>(i), static_cast<int>(j), intersection_length(preds[i], gts[j])});
            }
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Match& a, const Match& b) { return a.intersection > b.intersection; });

    std::vector<char> predUsed(preds.size(), 0);
    std::vector<char> gtUsed(gts.size(), 0);
    std::vector<Match> out;
    for (const Match& m : candidates) {
        if (predUsed[static_cast<std::size_t>(m.pred)] || gtUsed[static_cast<std::size_t>(m.gt)]) continue;
        predUsed[static_cast<std::size_t>(m.pred)] = 1;
        gtUsed[static_cast<std::size_t>(m.gt)] = 1;
        out.push_back(m);
    }
    return out;
}

MatchTotals score_image(const std::vector<Segment>& preds, const std::vector<Segment>& gts, const MatchParams& p) {
    MatchTotals t;
    t.predCount = static_cast<int>(preds.size());
    t.gtCount = static_cast<int>(gts.size());
    for (const auto& s : preds) t.predLength += s.length();
    for (const auto& s : gts) t.gtLength += s.length();

    const auto matches = match_segments(preds, gts, p);
    double matchedPred = 0.0;
    double matchedGt = 0.0;
    for (const Match& m : matches) {
        const double lp = preds[static_cast<std::size_t>(m.pred)].length();
        const double lg = gts[static_cast<std::size_t>(m.gt)].length();
        t.intersection += m.intersection;
        t.unionLength += lp + lg - m.intersection;
        matchedPred += lp;
        matchedGt += lg;
    }
    t.matched = static_cast<int>(matches.size());
    t.unionLength += (t.predLength - matchedPred) + (t.gtLength - matchedGt);
    return t;
}

namespace {

void fill_ratios(const MatchTotals& t, double& ap, double& ar, double& iou, double& f) {
    ap = t.predLength > 0.0 ? t.intersection / t.predLength : 0.0;
    ar = t.gtLength > 0.0 ? t.intersection / t.gtLength : 0.0;
    iou = t.unionLength > 0.0 ? t.intersection / t.unionLength : 0.0;
    f = f_score(ap, ar);
}

}  // namespace

EvalReport evaluate(const std::vector<Segment>& preds, const std::vector<Segment>& gts, const MatchParams& p) {
    return evaluate_corpus({ImagePair{"", preds, gts}}, p);
}

EvalReport evaluate_corpus(const std::vector<ImagePair>& images, const MatchParams& p) {
    p.validate();
    EvalReport report;
    report.params = p;
    for (const auto& img : images) {
        ImageScore s;
        s.imageId = img.imageId;
        s.totals = score_image(img.preds, img.gts, p);
        fill_ratios(s.totals, s.ap, s.ar, s.iou, s.fscore);
        report.totals += s.totals;
        report.perImage.push_back(std::move(s));
    }
    fill_ratios(report.totals, report.ap, report.ar, report.iou, report.fscore);
    return report;
}

Point2d Homography::apply(Point2d p) const {
    const double x = m[0] * p.x + m[1] * p.y + m[2];
    const double y = m[3] * p.x + m[4] * p.y + m[5];
    const double w = m[6] * p.x + m[7] * p.y + m[8];
    return {x / w, y / w};
}

double Homography::determinant() const noexcept {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Homography Homography::inverse() const {
    const double det = determinant();
    double scale = 0.0;
    for (double v : m) scale = std::max(scale, std::abs(v));
    if (!(std::abs(det) > 1e-12 * scale * scale * scale)) throw std::domain_error("homography is not invertible");
    Homography inv;
    inv.m = {(m[4] * m[8] - m[5] * m[7]) / det, (m[2] * m[7] - m[1] * m[8]) / det, (m[1] * m[5] - m[2] * m[4]) / det,
             (m[5] * m[6] - m[3] * m[8]) / det, (m[0] * m[8] - m[2] * m[6]) / det, (m[2] * m[3] - m[0] * m[5]) / det,
             (m[3] * m[7] - m[4] * m[6]) / det, (m[1] * m[6] - m[0] * m[7]) / det, (m[0] * m[4] - m[1] * m[3]) / det};
    return inv;
}

int count_repeated(const std::vector<Segment>& ref, const std::vector<Segment>& test, const Homography& testToRef,
                   const MatchParams& p) {
    p.validate();
    int n = 0;
    for (const Segment& t : test) {
        const Segment warped{testToRef.apply(t.p1), testToRef.apply(t.p2)};
        if (!(warped.length() > 0.0)) continue;
        const bool hit = std::any_of(ref.begin(), ref.end(),
                                     [&](const Segment& r) { return r.length() > 0.0 && is_true_positive(warped, r, p); });
        if (hit) ++n;
    }
    return n;
}

double repeatability(const std::vector<Segment>& ref, const std::vector<Segment>& test, const Homography& testToRef,
                     const MatchParams& p) {
    if (ref.empty() || test.empty()) throw std::invalid_argument("repeatability needs non-empty segment sets");
    const int nMatch = count_repeated(ref, test, testToRef, p);
    return nMatch / 2.0 * (1.0 / static_cast<double>(ref.size()) + 1.0 / static_cast<double>(test.size()));
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string() + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

GroundTruth parse_ground_truth(const std::string& text, const std::string& imageId) {
    GroundTruth gt;
    gt.imageId = imageId;
    const std::string where = imageId.empty() ? std::string("ground truth") : imageId;

    std::istringstream in(text);
    std::string raw;
    int lineNo = 0;
    bool firstContent = true;
    while (std::getline(in, raw)) {
        ++lineNo;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        const auto fields = split_fields(line);
        double v[4];
        bool numeric = fields.size() >= 4;
        for (std::size_t k = 0; numeric && k < 4; ++k) numeric = parse_double(fields[k], v[k]);

        if (!numeric) {
            double dummy = 0.0;
            const bool header = firstContent && !parse_double(fields.front(), dummy);
            firstContent = false;
            if (header) continue;
            throw ParseError(where + ": line " + std::to_string(lineNo) + ": expected x1,y1,x2,y2 (got " +
                             std::to_string(fields.size()) + " field" + (fields.size() == 1 ? "" : "s") + ")");
        }
        firstContent = false;
        const Segment s{{v[0], v[1]}, {v[2], v[3]}};
        if (!(s.length() > 0.0)) {
            throw ParseError(where + ": line " + std::to_string(lineNo) + ": zero-length segment");
        }
        gt.segments.push_back(s);
    }
    return gt;
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
    GroundTruth gt = parse_ground_truth(read_file(path), path.string());
    gt.imageId = path.stem().string();
    return gt;
}

Homography parse_homography(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string tok;
    std::vector<double> vals;
    while (in >> tok) {
        double v = 0.0;
        if (!parse_double(tok, v)) throw ParseError(source + ": not a number: '" + tok + "'");
        vals.push_back(v);
    }
    if (vals.size() != 9) {
        throw ParseError(source + ": expected 9 values, found " + std::to_string(vals.size()));
    }
    Homography h;
    std::copy(vals.begin(), vals.end(), h.m.begin());
    try {
        (void)h.inverse();
    } catch (const std::domain_error&) {
        throw ParseError(source + ": homography is not invertible");
    }
    return h;
}

Homography load_homography(const std::filesystem::path& path) { return parse_homography(read_file(path), path.string()); }

}  // namespace aaglsd
