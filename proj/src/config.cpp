#include "riccati/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace riccati::lab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* want) {
    throw std::runtime_error("config key '" + key + "': '" + value + "' is not " + want);
}

}  // namespace

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

std::string Config::get_str(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("config key '" + key + "' is missing");
    return it->second;
}

std::string Config::get_str(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
    const std::string v = get_str(key);
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (errno != 0 || end == v.c_str() || *end != '\0') bad_value(key, v, "a number");
    return x;
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::int64_t Config::get_int(const std::string& key) const {
    const std::string v = get_str(key);
    errno = 0;
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (errno != 0 || end == v.c_str() || *end != '\0') bad_value(key, v, "an integer");
    return x;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_uint(const std::string& key) const {
    const std::string v = get_str(key);
    errno = 0;
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (errno != 0 || end == v.c_str() || *end != '\0' || v.find('-') != std::string::npos)
        bad_value(key, v, "a nonnegative integer");
    return x;
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? get_uint(key) : fallback;
}

Config parse_config_text(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
        cfg.set(key, trim(body.substr(eq + 1)));
    }
    return cfg;
}

Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void apply_override(Config& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::runtime_error("override '" + assignment + "': expected key=value");
    const std::string key = trim(assignment.substr(0, eq));
    if (key.empty()) throw std::runtime_error("override '" + assignment + "': empty key");
    cfg.set(key, trim(assignment.substr(eq + 1)));
}

}  // namespace riccati::lab
