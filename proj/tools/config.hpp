#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "aaglsd/detector.hpp"
#include "aaglsd/evaluation.hpp"

namespace aaglsd::cli {

/// Unknown key, malformed value or out-of-range parameter. Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every tunable of the pipeline and of the matcher.
struct PipelineConfig {
    DetectorParams detector;
    MatchParams match = MatchParams::con1();

    /// Throws ConfigError with the failing field's message.
    void validate() const;
};

/// Applies one `key = value` assignment. Keys are the names listed by
/// config_keys(); angles are radians, booleans accept true/false/1/0.
void set_config_value(PipelineConfig& cfg, std::string_view key, std::string_view value);

/// Flat `key = value` text; `#` starts a comment, blank lines are skipped.
/// Later assignments override earlier ones and `base`.
PipelineConfig parse_config(const std::string& text, const PipelineConfig& base = {},
                            const std::string& source = "config");
PipelineConfig load_config(const std::string& path, const PipelineConfig& base = {});

/// Effective configuration in the same format, every key present, values
/// printed with enough digits to round-trip exactly.
std::string dump_config(const PipelineConfig& cfg);

/// All accepted keys, in dump order.
const std::vector<std::string>& config_keys();

}  // namespace aaglsd::cli
