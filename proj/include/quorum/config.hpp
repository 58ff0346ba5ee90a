#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace quorum {

/// Raised for malformed configuration (files, keys, flag values). The CLI
/// maps it to exit status 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key=value configuration, '#' starts a comment.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text, const std::string& origin = "<config>");
ConfigMap parse_config_file(const std::string& path);

// Typed lookups; all throw ConfigError on unparsable values.
std::string config_string(const ConfigMap& map, const std::string& key,
                          const std::string& fallback);
double config_double(const ConfigMap& map, const std::string& key, double fallback);
long long config_int(const ConfigMap& map, const std::string& key, long long fallback);
bool config_bool(const ConfigMap& map, const std::string& key, bool fallback);

/// Comma-separated doubles, e.g. "0.1,0.2,0.5".
std::vector<double> parse_double_list(const std::string& text, const std::string& what);
/// Comma-separated non-negative integers.
std::vector<long long> parse_int_list(const std::string& text, const std::string& what);
/// "lo:hi" pair.
std::pair<double, double> parse_range(const std::string& text, const std::string& what);

} // namespace quorum
