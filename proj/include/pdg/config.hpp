#pragma once

#include <map>
#include <string>

#include "pdg/errors.hpp"

namespace pdg {

// Flat string key/value store with typed access. Used for both config files
// (`key = value` lines, `#` comments) and merged CLI settings. Keys are
// kept sorted so dumps are deterministic.
class Config {
  public:
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    // Typed getters throw ConfigError naming the key on absence or parse
    // failure; the _or variants fall back to a default when absent.
    std::string get_string(const std::string& key) const;
    std::string get_string_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int_or(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key) const;
    bool get_bool_or(const std::string& key, bool fallback) const;

    // Entries from other override entries already present.
    void merge_from(const Config& other);

    // `key = value` lines sorted by key, LF endings.
    std::string dump() const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

// Parses `key = value` lines. Blank lines and `#` comments are skipped;
// malformed lines throw ConfigError with path:line.
Config load_config(const std::string& path);
Config parse_config_text(const std::string& text, const std::string& origin);

} // namespace pdg
