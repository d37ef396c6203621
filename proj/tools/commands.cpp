#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "aaglsd/anchors.hpp"
#include "parallel.hpp"

namespace aaglsd::cli {

namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ImageIoError(path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw ImageIoError(path.string() + ": write failed");
}

std::string csv_text(const std::vector<LineSegment>& segs) {
    std::ostringstream os;
    write_segments_csv(os, segs);
    return os.str();
}

const char* mode_name(MatchMode m) {
    switch (m) {
        case MatchMode::Con1: return "Con1";
        case MatchMode::Con2: return "Con2";
        case MatchMode::Custom: return "custom";
    }
    return "?";
}

// Runs `body`, mapping the error families onto exit codes.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

// Ground-truth style CSVs in `dir`, keyed by stem.
std::map<std::string, fs::path> csv_by_stem(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw ParseError(dir.string() + ": not a directory");
    std::map<std::string, fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && lower(entry.path().extension().string()) == ".csv") {
            out.emplace(entry.path().stem().string(), entry.path());
        }
    }
    return out;
}

}  // namespace

void write_segments_csv(std::ostream& os, const std::vector<LineSegment>& segs) {
    os << "x1,y1,x2,y2,length,angle_rad,n_aags,n_anchors\n";
    for (const auto& s : segs) {
        os << fixed(s.p1.x, 6) << ',' << fixed(s.p1.y, 6) << ',' << fixed(s.p2.x, 6) << ',' << fixed(s.p2.y, 6)
           << ',' << fixed(s.length(), 6) << ',' << fixed(s.angle(), 6) << ',' << s.nAags << ',' << s.nAnchors
           << '\n';
    }
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
    static constexpr char table[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 2 < bytes.size(); i += 3) {
        const unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out += table[(v >> 18) & 63];
        out += table[(v >> 12) & 63];
        out += table[(v >> 6) & 63];
        out += table[v & 63];
    }
    if (const std::size_t rest = bytes.size() - i; rest > 0) {
        const unsigned v = (bytes[i] << 16) | (rest == 2 ? bytes[i + 1] << 8 : 0);
        out += table[(v >> 18) & 63];
        out += table[(v >> 12) & 63];
        out += rest == 2 ? table[(v >> 6) & 63] : '=';
        out += '=';
    }
    return out;
}

std::string svg_overlay(const GrayImage& img, const std::vector<LineSegment>& segs) {
    const std::string w = std::to_string(img.width());
    const std::string h = std::to_string(img.height());
    std::ostringstream os;
    // Pixel (i, j) covers [i - 0.5, i + 0.5] x [j - 0.5, j + 0.5].
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"-0.5 -0.5 " << w << ' ' << h << "\">\n";
    os << "<image x=\"-0.5\" y=\"-0.5\" width=\"" << w << "\" height=\"" << h
       << "\" style=\"image-rendering:pixelated\" href=\"data:image/png;base64," << base64_encode(encode_png(img))
       << "\"/>\n";
    os << "<g stroke=\"#ff2a2a\" stroke-width=\"1.5\" stroke-linecap=\"round\" fill=\"none\">\n";
    for (const auto& s : segs) {
        os << "<line x1=\"" << fixed(s.p1.x, 3) << "\" y1=\"" << fixed(s.p1.y, 3) << "\" x2=\"" << fixed(s.p2.x, 3)
           << "\" y2=\"" << fixed(s.p2.y, 3) << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

std::vector<fs::path> list_images(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = lower(entry.path().extension().string());
        if (ext == ".png" || ext == ".pgm") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
        return a.filename().string() < b.filename().string();
    });
    return out;
}

std::vector<double> sweep_lambdas() {
    std::vector<double> out;
    for (int k = 0; k < 10; ++k) out.push_back((50 + 5 * k) / 100.0);
    return out;
}

int cmd_detect(const DetectOptions& opt, const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        cfg.validate();
        const Detector detector(cfg.detector.synced());

        if (!fs::is_directory(opt.input)) {
            const GrayImage img = read_image(opt.input);
            const DetectionResult result = detector.run(img);
            if (!opt.anchors.empty()) write_pgm(opt.anchors, saliency_image(result.anchors));
            if (!opt.overlay.empty()) write_text(opt.overlay, svg_overlay(img, result.segments));
            if (opt.output.empty()) {
                write_segments_csv(out, result.segments);
                err << result.segments.size() << " segments\n";
            } else {
                write_text(opt.output, csv_text(result.segments));
                out << result.segments.size() << " segments\n";
            }
            return kExitOk;
        }

        // Batch mode: one CSV (and optional SVG) per image.
        if (opt.output.empty()) throw ConfigError("batch detection needs an output directory (-o)");
        if (!opt.anchors.empty()) throw ConfigError("--dump-anchors takes a single image");
        const auto images = list_images(opt.input);
        fs::create_directories(opt.output);
        if (!opt.overlay.empty()) fs::create_directories(opt.overlay);

        std::vector<std::size_t> counts(images.size());
        parallel_for(images.size(), opt.jobs, [&](std::size_t i) {
            const GrayImage img = read_image(images[i]);
            const auto segs = detector.detect(img);
            const std::string stem = images[i].stem().string();
            write_text(opt.output / (stem + ".csv"), csv_text(segs));
            if (!opt.overlay.empty()) write_text(opt.overlay / (stem + ".svg"), svg_overlay(img, segs));
            counts[i] = segs.size();
        });
        std::size_t total = 0;
        for (std::size_t i = 0; i < images.size(); ++i) {
            out << images[i].filename().string() << ": " << counts[i] << " segments\n";
            total += counts[i];
        }
        out << images.size() << " images, " << total << " segments\n";
        return kExitOk;
    });
}

int cmd_eval(const EvalOptions& opt, const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        cfg.validate();
        const auto gtFiles = csv_by_stem(opt.gtDir);
        const auto predFiles = csv_by_stem(opt.predDir);
        for (const auto& [stem, path] : predFiles) {
            if (!gtFiles.count(stem)) err << "warning: no ground truth for " << path.string() << ", ignored\n";
        }

        std::vector<ImagePair> pairs(gtFiles.size());
        std::vector<const std::pair<const std::string, fs::path>*> order;
        for (const auto& entry : gtFiles) order.push_back(&entry);
        parallel_for(order.size(), opt.jobs, [&](std::size_t i) {
            const auto& [stem, gtPath] = *order[i];
            pairs[i].imageId = stem;
            pairs[i].gts = load_ground_truth(gtPath).segments;
            if (auto it = predFiles.find(stem); it != predFiles.end()) {
                pairs[i].preds = load_ground_truth(it->second).segments;
            }
        });

        std::vector<MatchParams> rows = opt.rows;
        if (rows.empty()) {
            if (cfg.match.mode == MatchMode::Custom) {
                rows.push_back(cfg.match);
            } else {
                rows = {MatchParams::con1(), MatchParams::con2()};
            }
        }
        for (const auto& r : rows) r.validate();

        std::vector<EvalReport> reports(rows.size());
        parallel_for(rows.size(), opt.jobs, [&](std::size_t i) { reports[i] = evaluate_corpus(pairs, rows[i]); });

        int nPred = 0, nGt = 0;
        for (const auto& p : pairs) {
            nPred += static_cast<int>(p.preds.size());
            nGt += static_cast<int>(p.gts.size());
        }
        out << pairs.size() << " images, " << nPred << " predicted, " << nGt << " ground-truth segments\n";
        out << "mode    lambda  D_c     D_a     AP      AR      IoU     F\n";
        for (const auto& rep : reports) {
            char line[160];
            std::snprintf(line, sizeof line, "%-7s %-7.2f %-7.2f %-7.4f %-7.4f %-7.4f %-7.4f %.4f\n",
                          mode_name(rep.params.mode), rep.params.lambdaArea, rep.params.D_c, rep.params.D_a, rep.ap,
                          rep.ar, rep.iou, rep.fscore);
            out << line;
        }
        if (opt.perImage) {
            for (const auto& rep : reports) {
                out << "\nper image (" << mode_name(rep.params.mode) << ", lambda " << fixed(rep.params.lambdaArea, 2)
                    << ")\nimage,ap,ar,iou,fscore\n";
                for (const auto& s : rep.perImage) {
                    out << s.imageId << ',' << fixed(s.ap, 4) << ',' << fixed(s.ar, 4) << ',' << fixed(s.iou, 4)
                        << ',' << fixed(s.fscore, 4) << '\n';
                }
            }
        }

        if (!opt.sweep.empty()) {
            const auto lambdas = sweep_lambdas();
            std::vector<EvalReport> curve(lambdas.size());
            parallel_for(lambdas.size(), opt.jobs, [&](std::size_t i) {
                curve[i] = evaluate_corpus(pairs, MatchParams::custom(lambdas[i], cfg.match.D_c, cfg.match.D_a));
            });
            std::ostringstream csv;
            csv << "lambda,ap,ar,iou,fscore\n";
            for (std::size_t i = 0; i < curve.size(); ++i) {
                csv << fixed(lambdas[i], 2) << ',' << fixed(curve[i].ap, 6) << ',' << fixed(curve[i].ar, 6) << ','
                    << fixed(curve[i].iou, 6) << ',' << fixed(curve[i].fscore, 6) << '\n';
            }
            if (opt.sweep == "-") {
                out << csv.str();
            } else {
                write_text(opt.sweep, csv.str());
            }
        }
        return kExitOk;
    });
}

int cmd_repeat(const RepeatOptions& opt, const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        cfg.validate();
        const Detector detector(cfg.detector.synced());
        Homography testToRef;
        if (!opt.homography.empty()) testToRef = load_homography(opt.homography).inverse();

        const GrayImage refImg = read_image(opt.ref);
        const GrayImage testImg = read_image(opt.test);
        const auto ref = geometries(detector.detect(refImg));
        const auto test = geometries(detector.detect(testImg));
        out << "reference: " << ref.size() << " segments, test: " << test.size() << " segments\n";
        if (ref.empty() || test.empty()) {
            err << "warning: no segments in " << (ref.empty() ? opt.ref : opt.test).string()
                << ", repeatability reported as 0\n";
        }

        out << "lambda  D_a     D_c=3.0  D_c=2.0  D_c=1.0\n";
        for (const double lambda : {0.75, 0.9}) {
            out << fixed(lambda, 2) << "    pi/60 ";
            for (const double dc : {3.0, 2.0, 1.0}) {
                const auto p = MatchParams::custom(lambda, dc, kPi / 60.0);
                const double r = (ref.empty() || test.empty()) ? 0.0 : repeatability(ref, test, testToRef, p);
                out << "  " << fixed(r, 4) << " ";
            }
            out << '\n';
        }
        return kExitOk;
    });
}

int cmd_dump_anchors(const DumpAnchorsOptions& opt, const PipelineConfig& cfg, std::ostream& out,
                     std::ostream& err) {
    return guarded(err, [&] {
        cfg.validate();
        const GrayImage img = read_image(opt.input);
        const DetectorParams params = cfg.detector.synced();
        const RealImage smooth = gaussian_smooth(img);
        const GradientField field = compute_gradient(smooth, params.anchor.T_mag);
        const AnchorMap anchors = build_anchor_map(field, params.anchor);
        write_pgm(opt.output, saliency_image(anchors));

        std::size_t regular = 0, members = 0;
        for (const auto c : anchors.classes) {
            if (c == AnchorClass::RegularAnchor) ++regular;
            if (c == AnchorClass::AagMember) ++members;
        }
        out << anchors.groups.size() << " aligned anchor groups, " << members << " group pixels, " << regular
            << " regular anchors\n";
        return kExitOk;
    });
}

}  // namespace aaglsd::cli
