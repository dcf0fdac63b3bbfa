#pragma once

#include "tglab/cli/config.hpp"
#include "tglab/mode_space.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tglab::cli {

/// Scenario-level failure (exit code 3). `input` echoes the offending input.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& what, Json input)
      : std::runtime_error(what), input_(std::move(input)) {}
  const Json& input() const { return input_; }

 private:
  Json input_;
};

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct ScenarioResult {
  std::string scenario;
  std::string name;
  Json record;  // scenario-specific body
  std::vector<Check> checks;
  std::optional<CsvTable> csv;

  bool pass() const;
  /// {scenario, name, ledger, pass, checks, ...record}
  Json to_json() const;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

/// Smearing from JSON: a TestFunction object or one of the named fixtures
/// "u", "v", "grad_h", "zero", optionally prefixed with '-'.
VectorFunction smearing_from_json(const Json& j, const GridPtr& grid);
VectorFunction named_smearing(const std::string& name, const GridPtr& grid);

/// Translates domain exceptions into ScenarioError.
ScenarioResult run_scenario(const Config& config, const RunOptions& options = {});

std::string format_double(double x);

}  // namespace tglab::cli
