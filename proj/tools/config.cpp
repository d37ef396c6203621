#include "config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace aaglsd::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double to_real(std::string_view key, std::string_view value) {
    std::string_view v = trim(value);
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError("invalid value for " + std::string(key) + ": '" + std::string(value) + "'");
    }
    return out;
}

int to_int(std::string_view key, std::string_view value) {
    const std::string_view v = trim(value);
    int out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ConfigError("invalid integer for " + std::string(key) + ": '" + std::string(value) + "'");
    }
    return out;
}

bool to_bool(std::string_view key, std::string_view value) {
    const std::string_view v = trim(value);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("invalid boolean for " + std::string(key) + ": '" + std::string(value) + "'");
}

struct Field {
    std::function<void(PipelineConfig&, std::string_view, std::string_view)> set;
    std::function<std::string(const PipelineConfig&)> get;
};

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
Field real_field(T PipelineConfig::*block, double T::*member) {
    return {[=](PipelineConfig& c, std::string_view k, std::string_view v) { c.*block.*member = to_real(k, v); },
            [=](const PipelineConfig& c) { return fmt_real(c.*block.*member); }};
}

template <typename T>
Field int_field(T PipelineConfig::*block, int T::*member) {
    return {[=](PipelineConfig& c, std::string_view k, std::string_view v) { c.*block.*member = to_int(k, v); },
            [=](const PipelineConfig& c) { return std::to_string(c.*block.*member); }};
}

template <typename T>
Field detector_real(T DetectorParams::*block, double T::*member) {
    return {[=](PipelineConfig& c, std::string_view k, std::string_view v) {
                c.detector.*block.*member = to_real(k, v);
            },
            [=](const PipelineConfig& c) { return fmt_real(c.detector.*block.*member); }};
}

template <typename T>
Field detector_int(T DetectorParams::*block, int T::*member) {
    return {[=](PipelineConfig& c, std::string_view k, std::string_view v) {
                c.detector.*block.*member = to_int(k, v);
            },
            [=](const PipelineConfig& c) { return std::to_string(c.detector.*block.*member); }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
    static const std::vector<std::pair<std::string, Field>> table = [] {
        std::vector<std::pair<std::string, Field>> t;
        t.emplace_back("T_mag", detector_real(&DetectorParams::anchor, &AnchorParams::T_mag));
        t.emplace_back("T_anchor", detector_real(&DetectorParams::anchor, &AnchorParams::T_anchor));
        t.emplace_back("T_aligned", detector_real(&DetectorParams::anchor, &AnchorParams::T_aligned));
        t.emplace_back("n", detector_int(&DetectorParams::anchor, &AnchorParams::n));
        t.emplace_back("T_dist", detector_real(&DetectorParams::link, &LinkParams::T_dist));
        t.emplace_back("S_min", detector_int(&DetectorParams::link, &LinkParams::S_min));
        t.emplace_back("S_ra", detector_int(&DetectorParams::link, &LinkParams::S_ra));
        t.emplace_back("S_aag", detector_int(&DetectorParams::link, &LinkParams::S_aag));
        t.emplace_back("T_len", detector_real(&DetectorParams::validation, &ValidateParams::T_len));
        t.emplace_back("N_aag", detector_int(&DetectorParams::validation, &ValidateParams::N_aag));
        t.emplace_back("rho1", detector_real(&DetectorParams::validation, &ValidateParams::rho1));
        t.emplace_back("rho2", detector_real(&DetectorParams::validation, &ValidateParams::rho2));
        t.emplace_back("D_c", detector_real(&DetectorParams::merge, &MergeParams::D_c));
        t.emplace_back("D_a", detector_real(&DetectorParams::merge, &MergeParams::D_a));
        t.emplace_back("D_e", detector_real(&DetectorParams::merge, &MergeParams::D_e));
        t.emplace_back("strict_eq7",
                       Field{[](PipelineConfig& c, std::string_view k, std::string_view v) {
                                 c.detector.merge.strictEq7 = to_bool(k, v);
                             },
                             [](const PipelineConfig& c) {
                                 return std::string(c.detector.merge.strictEq7 ? "true" : "false");
                             }});
        t.emplace_back("lambda_area", real_field(&PipelineConfig::match, &MatchParams::lambdaArea));
        t.emplace_back("match_D_c", real_field(&PipelineConfig::match, &MatchParams::D_c));
        t.emplace_back("match_D_a", real_field(&PipelineConfig::match, &MatchParams::D_a));
        return t;
    }();
    return table;
}

}  // namespace

void PipelineConfig::validate() const {
    try {
        detector.synced().validate();
        match.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, _] : fields()) k.push_back(name);
        return k;
    }();
    return keys;
}

void set_config_value(PipelineConfig& cfg, std::string_view key, std::string_view value) {
    for (const auto& [name, field] : fields()) {
        if (name == key) {
            field.set(cfg, key, value);
            if (key == "lambda_area" || key == "match_D_c" || key == "match_D_a") cfg.match.mode = MatchMode::Custom;
            return;
        }
    }
    throw ConfigError("unknown config key '" + std::string(key) + "'");
}

PipelineConfig parse_config(const std::string& text, const PipelineConfig& base, const std::string& source) {
    PipelineConfig cfg = base;
    std::istringstream in(text);
    std::string raw;
    int lineNo = 0;
    while (std::getline(in, raw)) {
        ++lineNo;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(source + ":" + std::to_string(lineNo) + ": expected key = value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        try {
            set_config_value(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(source + ":" + std::to_string(lineNo) + ": " + e.what());
        }
    }
    cfg.detector = cfg.detector.synced();
    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const std::string& path, const PipelineConfig& base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), base, path);
}

std::string dump_config(const PipelineConfig& cfg) {
    std::string out;
    for (const auto& [name, field] : fields()) out += name + " = " + field.get(cfg) + "\n";
    return out;
}

}  // namespace aaglsd::cli
