#ifndef TONEDISC_CONFIG_HPP
#define TONEDISC_CONFIG_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tonedisc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key = value settings. One assignment per line, '#' starts a comment,
// later assignments win (command-line overrides ride on that). Keys are
// free-form here; each experiment validates its own key set so typos fail
// loudly instead of silently running defaults.
class Config {
public:
    Config() = default;
    static Config from_file(const std::string& path);
    static Config from_text(std::string_view text);

    void set(std::string key, std::string value);
    // "key=value" as it appears on a command line.
    void set_pair(std::string_view assignment);

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    std::vector<std::string> keys() const;

    std::string get_str(const std::string& key, const std::string& def) const;
    double get_f64(const std::string& key, double def) const;
    uint32_t get_u32(const std::string& key, uint32_t def) const;
    uint64_t get_u64(const std::string& key, uint64_t def) const;
    bool get_bool(const std::string& key, bool def) const;
    std::vector<double> get_list(const std::string& key, std::vector<double> def) const;

private:
    std::map<std::string, std::string> kv_;
};

}  // namespace tonedisc

#endif
