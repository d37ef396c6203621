#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "aaglsd/detector.hpp"
#include "aaglsd/evaluation.hpp"
#include "config.hpp"

namespace aaglsd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitConfig = 2;

struct DetectOptions {
    std::filesystem::path input;    ///< image file, or a directory of images
    std::filesystem::path output;   ///< CSV file (or directory for batch); empty = stdout
    std::filesystem::path overlay;  ///< optional SVG file (or directory for batch)
    std::filesystem::path anchors;  ///< optional saliency PGM (single image only)
    int jobs = 1;
};

struct EvalOptions {
    std::filesystem::path predDir;
    std::filesystem::path gtDir;
    std::vector<MatchParams> rows;   ///< one table row each
    std::filesystem::path sweep;     ///< "-" for stdout, empty for none
    bool perImage = false;
    int jobs = 1;
};

struct RepeatOptions {
    std::filesystem::path ref;
    std::filesystem::path test;
    std::filesystem::path homography;  ///< maps reference to test pixels; empty = identity
};

struct DumpAnchorsOptions {
    std::filesystem::path input;
    std::filesystem::path output;
};

/// Each command prints results to `out`, a one-line diagnostic to `err` on
/// failure, and returns the process exit code.
int cmd_detect(const DetectOptions& opt, const PipelineConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& opt, const PipelineConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_repeat(const RepeatOptions& opt, const PipelineConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_dump_anchors(const DumpAnchorsOptions& opt, const PipelineConfig& cfg, std::ostream& out,
                     std::ostream& err);

void write_segments_csv(std::ostream& os, const std::vector<LineSegment>& segs);

/// SVG with the image embedded as a PNG data URI and one stroke per segment.
std::string svg_overlay(const GrayImage& img, const std::vector<LineSegment>& segs);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);

/// Images (.png, .pgm) directly inside `dir`, sorted by filename.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

/// lambda_area = 0.50, 0.55, ..., 0.95.
std::vector<double> sweep_lambdas();

}  // namespace aaglsd::cli
