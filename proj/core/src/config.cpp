#include "terranav/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "terranav/errors.hpp"

namespace terranav {

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return parse(in, path);
}

Config Config::parse(std::istream& in, const std::string& name) {
    Config cfg;
    cfg.name_ = name;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;  // blank or comment-only
        std::string value;
        std::getline(ls, value);
        const auto begin = value.find_first_not_of(" \t");
        const auto end = value.find_last_not_of(" \t\r");
        value = (begin == std::string::npos) ? "" : value.substr(begin, end - begin + 1);
        if (value.empty()) {
            throw ConfigError(name + ":" + std::to_string(line_no) +
                              ": key '" + key + "' has no value");
        }
        Entry e;
        e.value = value;
        e.line = line_no;
        e.order = cfg.next_order_++;
        cfg.entries_[key] = e;
    }
    return cfg;
}

bool Config::has(const std::string& key) const {
    return entries_.count(key) > 0;
}

void Config::fail(const std::string& key, const std::string& what) const {
    const auto it = entries_.find(key);
    const std::string loc =
        (it != entries_.end()) ? name_ + ":" + std::to_string(it->second.line) : name_;
    throw ConfigError(loc + ": field '" + key + "': " + what);
}

const Config::Entry& Config::require(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        throw ConfigError(name_ + ": missing required field '" + key + "'");
    }
    return it->second;
}

std::string Config::get_string(const std::string& key) const {
    return require(key).value;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? entries_.at(key).value : fallback;
}

double Config::get_double(const std::string& key) const {
    const std::string& v = require(key).value;
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') fail(key, "expected a number, got '" + v + "'");
    return d;
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key) const {
    const std::string& v = require(key).value;
    char* end = nullptr;
    const long l = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') fail(key, "expected an integer, got '" + v + "'");
    return static_cast<int>(l);
}

int Config::get_int(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key) const {
    std::string v = require(key).value;
    std::transform(v.begin(), v.end(), v.begin(), ::tolower);
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    fail(key, "expected a boolean, got '" + v + "'");
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
}

std::vector<std::string> Config::keys_with_prefix(const std::string& prefix) const {
    std::vector<std::pair<int, std::string>> found;
    for (const auto& [key, entry] : entries_) {
        if (key.rfind(prefix, 0) == 0) found.emplace_back(entry.order, key);
    }
    std::sort(found.begin(), found.end());
    std::vector<std::string> keys;
    keys.reserve(found.size());
    for (const auto& [order, key] : found) keys.push_back(key);
    return keys;
}

void Config::set(const std::string& key, const std::string& value) {
    Entry e;
    e.value = value;
    e.line = 0;
    e.order = next_order_++;
    entries_[key] = e;
}

}  // namespace terranav
