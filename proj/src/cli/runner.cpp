#include "tglab/cli/runner.hpp"

#include "tglab/cli/config.hpp"
#include "tglab/cli/report.hpp"
#include "tglab/cli/scenarios.hpp"
#include "tglab/conventions.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <iostream>
#include <sstream>

namespace tglab::cli {

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_text(const ScenarioResult& r) {
  std::ostringstream os;
  os << "# tglab scenario=" << r.scenario << " generated=" << utc_timestamp()
     << " ledger=" << ledger_hash() << '\n';
  const auto& t = *r.csv;
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
    os << '\n';
  }
  return os.str();
}

int do_run(const std::string& config_path, bool check, const std::string& out_dir,
           const RunOptions& options) {
  Config config;
  try {
    config = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitSchema;
  }

  ScenarioResult result;
  try {
    result = run_scenario(config, options);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitSchema;
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << '\n' << "input: " << e.input().dump() << '\n';
    return kExitScenario;
  }

  try {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path base = std::filesystem::path(out_dir) / result.name;
    write_file_atomic(base.string() + ".json", result.to_json().dump(2) + "\n");
    if (result.csv) write_file_atomic(base.string() + ".csv", csv_text(result));
  } catch (const std::exception& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kExitScenario;
  }

  std::cout << result.name << ": " << (result.pass() ? "PASS" : "FAIL") << '\n';
  for (const auto& c : result.checks) {
    if (!c.pass) std::cout << "  failed: " << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
  }
  if (check && !result.pass()) return kExitCheck;
  return kExitOk;
}

}  // namespace

int run_main(int argc, char** argv) {
  CLI::App app{"tglab: temporal-gauge field laboratory"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one scenario from a config file");
  std::string config_path;
  std::string out_dir = "results";
  bool check = false;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  run->add_option("--config", config_path, "Config file")->required();
  run->add_flag("--check", check, "Exit 4 if any acceptance check fails");
  run->add_option("--out", out_dir, "Output directory");
  auto* seed_opt = run->add_option("--seed", seed, "Override mc.seed");
  run->add_option("--threads", threads, "Monte Carlo worker threads")->check(CLI::Range(1u, 1024u));

  auto* rep = app.add_subcommand("report", "Summarize a results directory");
  std::string report_dir;
  rep->add_option("dir", report_dir, "Results directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitSchema;
  }

  if (run->parsed()) {
    RunOptions options;
    if (seed_opt->count() > 0) options.seed = seed;
    options.threads = threads;
    return do_run(config_path, check, out_dir, options);
  }
  return report(report_dir, std::cout, std::cerr);
}

}  // namespace tglab::cli
