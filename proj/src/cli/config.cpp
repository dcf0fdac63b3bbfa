#include "tglab/cli/config.hpp"

#include "tglab/conventions.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tglab::cli {

const Json& config_schema() {
  static const Json schema = Json::parse(config_schema_text());
  return schema;
}

const Json& Config::get(const std::string& key) const {
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  const Json& props = config_schema().at("properties");
  if (props.contains(key) && props.at(key).contains("default")) return props.at(key).at("default");
  throw ConfigError("missing required key '" + key + "'");
}

Json Config::document(const std::string& key) const {
  const Json& value = get(key);
  if (!value.is_string()) return value;
  const std::filesystem::path path = base_dir_ / value.get<std::string>();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read fixture '" + path.string() + "' for " + key);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::runtime_error("fixture '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool type_matches(const Json& value, const std::string& type) {
  if (type == "string") return value.is_string();
  if (type == "number") return value.is_number();
  if (type == "integer") return value.is_number_integer();
  if (type == "boolean") return value.is_boolean();
  if (type == "array") return value.is_array();
  if (type == "object") return value.is_object();
  return false;
}

void check_value(const std::string& where, const Json& value, const Json& rule) {
  if (rule.contains("type")) {
    const Json& t = rule.at("type");
    bool ok = false;
    if (t.is_array()) {
      for (const auto& alt : t) ok = ok || type_matches(value, alt.get<std::string>());
    } else {
      ok = type_matches(value, t.get<std::string>());
    }
    if (!ok) throw ConfigError(where + ": expected type " + t.dump() + ", got " + value.dump());
  }
  if (rule.contains("enum")) {
    const Json& options = rule.at("enum");
    if (std::find(options.begin(), options.end(), value) == options.end()) {
      throw ConfigError(where + ": " + value.dump() + " is not one of " + options.dump());
    }
  }
  if (value.is_number()) {
    const double x = value.get<double>();
    if (rule.contains("minimum") && x < rule.at("minimum").get<double>()) {
      throw ConfigError(where + ": " + value.dump() + " is below the minimum " +
                        rule.at("minimum").dump());
    }
    if (rule.contains("maximum") && x > rule.at("maximum").get<double>()) {
      throw ConfigError(where + ": " + value.dump() + " is above the maximum " +
                        rule.at("maximum").dump());
    }
    if (rule.contains("exclusiveMinimum") && x <= rule.at("exclusiveMinimum").get<double>()) {
      throw ConfigError(where + ": " + value.dump() + " must exceed " +
                        rule.at("exclusiveMinimum").dump());
    }
  }
  if (value.is_string() && rule.contains("minLength") &&
      value.get<std::string>().size() < rule.at("minLength").get<std::size_t>()) {
    throw ConfigError(where + ": string too short");
  }
  if (value.is_array()) {
    if (rule.contains("minItems") && value.size() < rule.at("minItems").get<std::size_t>()) {
      throw ConfigError(where + ": needs at least " + rule.at("minItems").dump() + " items");
    }
    if (rule.contains("maxItems") && value.size() > rule.at("maxItems").get<std::size_t>()) {
      throw ConfigError(where + ": allows at most " + rule.at("maxItems").dump() + " items");
    }
    if (rule.contains("items")) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        check_value(where + "[" + std::to_string(i) + "]", value[i], rule.at("items"));
      }
    }
  }
}

}  // namespace

void validate_config(const Config& config) {
  const Json& schema = config_schema();
  const Json& props = schema.at("properties");
  for (const auto& [key, value] : config.entries()) {
    if (!props.contains(key)) throw ConfigError("unknown key '" + key + "'");
    check_value(key, value, props.at(key));
  }
  for (const auto& key : schema.at("required")) {
    if (!config.has(key.get<std::string>())) {
      throw ConfigError("missing required key '" + key.get<std::string>() + "'");
    }
  }
  const std::string scenario = config.entries().at("scenario").get<std::string>();
  const Json& rules = schema.at("x-scenarios").at(scenario);
  const Json& common = schema.at("x-common");
  const Json& allowed = rules.at("allowed");
  for (const auto& [key, value] : config.entries()) {
    const bool ok = std::find(common.begin(), common.end(), key) != common.end() ||
                    std::find(allowed.begin(), allowed.end(), key) != allowed.end();
    if (!ok) throw ConfigError("key '" + key + "' does not apply to scenario " + scenario);
  }
  for (const auto& key : rules.at("required")) {
    if (!config.has(key.get<std::string>())) {
      throw ConfigError("scenario " + scenario + " requires key '" + key.get<std::string>() + "'");
    }
  }
}

Config parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  std::map<std::string, Json> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  std::string key;
  std::string value;
  int key_line = 0;
  int line_no = 0;

  auto flush = [&]() {
    if (key.empty()) return;
    try {
      entries[key] = Json::parse(value);
    } catch (const Json::parse_error&) {
      throw ConfigError("line " + std::to_string(key_line) + ": value of '" + key +
                        "' is not valid JSON: " + trim(value));
    }
    key.clear();
    value.clear();
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    if (!key.empty() && (line.front() == ' ' || line.front() == '\t')) {
      value += "\n" + line;
      continue;
    }
    flush();
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (entries.count(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    value = line.substr(eq + 1);
    key_line = line_no;
  }
  flush();

  Config config(std::move(entries), base_dir);
  validate_config(config);
  return config;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace tglab::cli
