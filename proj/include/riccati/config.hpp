#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace riccati::lab {

// Flat dotted key-value configuration (model.A = 20). Keys are
// case-sensitive; values are stored as trimmed strings and parsed on access.
// Typed getters throw std::runtime_error naming the key on a malformed value;
// the defaulted forms return the fallback when the key is absent.
class Config {
public:
    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    std::string get_str(const std::string& key) const;
    std::string get_str(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_uint(const std::string& key) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

// Parses `key = value` lines; '#' starts a comment, blank lines are skipped.
// Throws std::runtime_error with the line number on malformed lines or an
// unreadable file.
Config parse_config_file(const std::string& path);
Config parse_config_text(const std::string& text);

// Applies one `key=value` CLI override; throws std::runtime_error when the
// argument has no '=' or an empty key.
void apply_override(Config& cfg, const std::string& assignment);

}  // namespace riccati::lab
