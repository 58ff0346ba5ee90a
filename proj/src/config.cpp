#include "quorum/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace quorum {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw ConfigError(what + ": '" + text + "' is not a number");
    }
}

long long to_int(const std::string& text, const std::string& what) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(what + ": '" + text + "' is not an integer");
    }
    return value;
}

} // namespace

ConfigMap parse_config_text(const std::string& text, const std::string& origin) {
    ConfigMap map;
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        }
        map[key] = value;
    }
    return map;
}

ConfigMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

std::string config_string(const ConfigMap& map, const std::string& key,
                          const std::string& fallback) {
    const auto it = map.find(key);
    return it == map.end() ? fallback : it->second;
}

double config_double(const ConfigMap& map, const std::string& key, double fallback) {
    const auto it = map.find(key);
    return it == map.end() ? fallback : to_double(it->second, key);
}

long long config_int(const ConfigMap& map, const std::string& key, long long fallback) {
    const auto it = map.find(key);
    return it == map.end() ? fallback : to_int(it->second, key);
}

bool config_bool(const ConfigMap& map, const std::string& key, bool fallback) {
    const auto it = map.find(key);
    if (it == map.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw ConfigError(key + ": '" + it->second + "' is not a boolean");
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        field = trim(field);
        if (field.empty()) {
            throw ConfigError(what + ": empty entry in list '" + text + "'");
        }
        values.push_back(to_double(field, what));
    }
    if (values.empty()) {
        throw ConfigError(what + ": empty list");
    }
    return values;
}

std::vector<long long> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<long long> values;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        field = trim(field);
        if (field.empty()) {
            throw ConfigError(what + ": empty entry in list '" + text + "'");
        }
        values.push_back(to_int(field, what));
    }
    if (values.empty()) {
        throw ConfigError(what + ": empty list");
    }
    return values;
}

std::pair<double, double> parse_range(const std::string& text, const std::string& what) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ConfigError(what + ": expected 'lo:hi', got '" + text + "'");
    }
    return {to_double(trim(text.substr(0, colon)), what),
            to_double(trim(text.substr(colon + 1)), what)};
}

} // namespace quorum
