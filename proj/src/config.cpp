#include "tonedisc/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace tonedisc {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_f64(const std::string& key, std::string_view text) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw ConfigError(key + ": not a number: '" + std::string(text) + "'");
    }
    return v;
}

uint64_t parse_u64(const std::string& key, std::string_view text) {
    uint64_t v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw ConfigError(key + ": not a non-negative integer: '" + std::string(text) + "'");
    }
    return v;
}

}  // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream all;
    all << in.rdbuf();
    return from_text(all.str());
}

Config Config::from_text(std::string_view text) {
    Config cfg;
    size_t lineno = 0;
    while (!text.empty()) {
        const size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++lineno;

        const size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        }
        cfg.set(std::string(key), std::string(value));
    }
    return cfg;
}

void Config::set(std::string key, std::string value) { kv_[std::move(key)] = std::move(value); }

void Config::set_pair(std::string_view assignment) {
    const size_t eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("override must look like key=value: '" + std::string(assignment) + "'");
    }
    const std::string_view key = trim(assignment.substr(0, eq));
    const std::string_view value = trim(assignment.substr(eq + 1));
    if (key.empty() || value.empty()) {
        throw ConfigError("override must look like key=value: '" + std::string(assignment) + "'");
    }
    set(std::string(key), std::string(value));
}

std::vector<std::string> Config::keys() const {
    std::vector<std::string> out;
    out.reserve(kv_.size());
    for (const auto& [k, v] : kv_) out.push_back(k);
    return out;
}

std::string Config::get_str(const std::string& key, const std::string& def) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? def : it->second;
}

double Config::get_f64(const std::string& key, double def) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? def : parse_f64(key, it->second);
}

uint32_t Config::get_u32(const std::string& key, uint32_t def) const {
    const uint64_t v = get_u64(key, def);
    if (v > UINT32_MAX) throw ConfigError(key + ": value too large");
    return static_cast<uint32_t>(v);
}

uint64_t Config::get_u64(const std::string& key, uint64_t def) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? def : parse_u64(key, it->second);
}

bool Config::get_bool(const std::string& key, bool def) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    const std::string& v = it->second;
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError(key + ": not a boolean: '" + v + "'");
}

std::vector<double> Config::get_list(const std::string& key, std::vector<double> def) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    std::vector<double> out;
    std::string_view rest = it->second;
    while (true) {
        const size_t comma = rest.find(',');
        const std::string_view item = trim(rest.substr(0, comma));
        if (item.empty()) throw ConfigError(key + ": empty list element");
        out.push_back(parse_f64(key, item));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace tonedisc
