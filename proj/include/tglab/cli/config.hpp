#pragma once

// Flat `key = value` run configuration, validated against the embedded
// docs/config_schema.json.

#include <json.hpp>

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tglab::cli {

using Json = nlohmann::json;

/// Syntax or schema violation (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const Json& config_schema();

class Config {
 public:
  Config() = default;
  Config(std::map<std::string, Json> entries, std::filesystem::path base_dir)
      : entries_(std::move(entries)), base_dir_(std::move(base_dir)) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  /// The configured value, else the schema default. Throws ConfigError when
  /// neither exists.
  const Json& get(const std::string& key) const;
  double number(const std::string& key) const { return get(key).get<double>(); }
  long long integer(const std::string& key) const { return get(key).get<long long>(); }
  std::string string(const std::string& key) const { return get(key).get<std::string>(); }
  /// Like get, but a string value names a JSON fixture file, resolved
  /// against the config file's directory.
  Json document(const std::string& key) const;

  void set(const std::string& key, Json value) { entries_[key] = std::move(value); }
  const std::map<std::string, Json>& entries() const { return entries_; }
  const std::filesystem::path& base_dir() const { return base_dir_; }

 private:
  std::map<std::string, Json> entries_;
  std::filesystem::path base_dir_;
};

/// Parses and validates. Throws ConfigError.
Config parse_config(std::string_view text, const std::filesystem::path& base_dir = ".");
Config load_config(const std::filesystem::path& path);

/// Schema checks only; parse_config already calls this.
void validate_config(const Config& config);

}  // namespace tglab::cli
