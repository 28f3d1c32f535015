#pragma once

// key=value configuration files: '#' starts a comment, blank lines are
// ignored, keys must match CLI flag names.  Command-line flags override file
// values; unknown keys are hard errors that name the offending line.

#include <map>
#include <set>
#include <string>

#include "cqed/common.hpp"

namespace cqed {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using ConfigMap = std::map<std::string, std::string>;

// Parses file contents; `known_keys` is the accepted key set.
ConfigMap parse_config_text(const std::string& text, const std::set<std::string>& known_keys,
                            const std::string& filename = "<config>");

// Reads and parses the file at `path`.
ConfigMap parse_config(const std::string& path, const std::set<std::string>& known_keys);

// Accepts plain decimal ("0.5", "1e-4") or simple pi expressions
// ("pi", "-pi/2", "0.5pi", "2pi/3").
double parse_real_or_pi(const std::string& text);

}  // namespace cqed
