#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"

using namespace aaglsd;
using namespace aaglsd::cli;

namespace {

// Flag name -> config key.
const std::vector<std::pair<std::string, std::string>> kParamFlags = {
    {"--t-mag", "T_mag"},   {"--t-anchor", "T_anchor"},       {"--t-aligned", "T_aligned"},
    {"--t-dist", "T_dist"}, {"--t-len", "T_len"},             {"--n-aag", "N_aag"},
    {"--rho1", "rho1"},     {"--rho2", "rho2"},               {"--dc", "D_c"},
    {"--da", "D_a"},        {"--de", "D_e"},                  {"--s-min", "S_min"},
    {"--s-ra", "S_ra"},     {"--s-aag", "S_aag"},             {"--lambda-area", "lambda_area"},
    {"--match-dc", "match_D_c"}, {"--match-da", "match_D_a"},
};

struct CommonArgs {
    std::string configPath;
    std::string dumpConfig;
    std::vector<std::optional<std::string>> values = std::vector<std::optional<std::string>>(kParamFlags.size());
    bool strictEq7 = false;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.configPath, "key = value parameter file (falls back to $AAGLSD_CONFIG)");
    cmd->add_option("--dump-config", args.dumpConfig, "write the effective configuration to this file ('-' = stdout)");
    for (std::size_t i = 0; i < kParamFlags.size(); ++i) {
        cmd->add_option(kParamFlags[i].first, args.values[i], "override " + kParamFlags[i].second);
    }
    cmd->add_flag("--strict-eq7", args.strictEq7, "merge non-overlapping segments on endpoint distance alone");
    cmd->add_option("--jobs,-j", args.jobs, "worker threads for corpus commands")->check(CLI::PositiveNumber);
}

// Defaults < config file < flags.
PipelineConfig resolve_config(const CommonArgs& args) {
    std::string path = args.configPath;
    if (path.empty()) {
        if (const char* env = std::getenv("AAGLSD_CONFIG"); env && *env) path = env;
    }
    PipelineConfig cfg;
    if (!path.empty()) cfg = load_config(path);
    for (std::size_t i = 0; i < kParamFlags.size(); ++i) {
        if (args.values[i]) set_config_value(cfg, kParamFlags[i].second, *args.values[i]);
    }
    if (args.strictEq7) cfg.detector.merge.strictEq7 = true;
    cfg.detector = cfg.detector.synced();
    cfg.validate();

    if (!args.dumpConfig.empty()) {
        if (args.dumpConfig == "-") {
            std::cout << dump_config(cfg);
        } else {
            std::ofstream out(args.dumpConfig);
            out << dump_config(cfg);
            if (!out) throw std::runtime_error(args.dumpConfig + ": cannot write config");
        }
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Aligned-anchor-group line segment detector"};
    app.require_subcommand(1);
    CommonArgs common;

    DetectOptions detect;
    auto* detectCmd = app.add_subcommand("detect", "detect line segments in an image or a directory of images");
    detectCmd->add_option("image", detect.input, "PNG/PGM image, or a directory")->required();
    detectCmd->add_option("-o,--output", detect.output, "CSV output (directory in batch mode; default stdout)");
    detectCmd->add_option("--overlay", detect.overlay, "SVG overlay output (directory in batch mode)");
    detectCmd->add_option("--dump-anchors", detect.anchors, "saliency PGM: 0 none, 128 regular, 255 group member");
    add_common(detectCmd, common);

    EvalOptions eval;
    bool con1 = false, con2 = false;
    auto* evalCmd = app.add_subcommand("eval", "score prediction CSVs against ground-truth CSVs, paired by stem");
    evalCmd->add_option("pred_dir", eval.predDir)->required();
    evalCmd->add_option("gt_dir", eval.gtDir)->required();
    evalCmd->add_flag("--con1", con1, "lambda_area = 0.5, D_c = 1, D_a = pi/60");
    evalCmd->add_flag("--con2", con2, "lambda_area = 0.9, D_c = 1, D_a = pi/60");
    evalCmd->add_option("--sweep", eval.sweep, "write the lambda_area 0.50..0.95 curve as CSV ('-' = stdout)");
    evalCmd->add_flag("--per-image", eval.perImage, "also print per-image scores");
    add_common(evalCmd, common);

    RepeatOptions repeat;
    auto* repeatCmd = app.add_subcommand("repeat", "repeatability between a reference and a test image");
    repeatCmd->add_option("ref", repeat.ref)->required();
    repeatCmd->add_option("test", repeat.test)->required();
    repeatCmd->add_option("-H,--homography", repeat.homography, "3x3 homography mapping reference to test pixels");
    add_common(repeatCmd, common);

    DumpAnchorsOptions dump;
    auto* dumpCmd = app.add_subcommand("dump-anchors", "write the anchor saliency map as PGM");
    dumpCmd->add_option("image", dump.input)->required();
    dumpCmd->add_option("-o,--output", dump.output)->required();
    add_common(dumpCmd, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitConfig;
    }

    PipelineConfig cfg;
    try {
        cfg = resolve_config(common);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }

    if (*detectCmd) {
        detect.jobs = common.jobs;
        return cmd_detect(detect, cfg, std::cout, std::cerr);
    }
    if (*evalCmd) {
        eval.jobs = common.jobs;
        if (con1) eval.rows.push_back(MatchParams::con1());
        if (con2) eval.rows.push_back(MatchParams::con2());
        for (std::size_t i = 0; i < kParamFlags.size(); ++i) {
            if (kParamFlags[i].first == "--lambda-area" && common.values[i]) eval.rows.push_back(cfg.match);
        }
        return cmd_eval(eval, cfg, std::cout, std::cerr);
    }
    if (*repeatCmd) return cmd_repeat(repeat, cfg, std::cout, std::cerr);
    return cmd_dump_anchors(dump, cfg, std::cout, std::cerr);
}
