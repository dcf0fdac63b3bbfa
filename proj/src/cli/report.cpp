#include "tglab/cli/report.hpp"

#include "tglab/cli/scenarios.hpp"
#include "tglab/serialization.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

namespace tglab::cli {

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

namespace {

struct Row {
  std::string name;
  std::string scenario;
  bool pass;
  std::size_t checks_passed;
  std::size_t checks_total;
  std::string summary;
};

Json load_result(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw JsonFormatError("cannot read");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw JsonFormatError(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw JsonFormatError("not a JSON object");
  for (const char* key : {"scenario", "name", "ledger"}) {
    if (!j.contains(key) || !j.at(key).is_string()) {
      throw JsonFormatError(std::string("missing string field '") + key + "'");
    }
  }
  if (!j.contains("pass") || !j.at("pass").is_boolean()) throw JsonFormatError("missing 'pass'");
  if (!j.contains("checks") || !j.at("checks").is_array()) throw JsonFormatError("missing 'checks'");
  for (const auto& c : j.at("checks")) {
    if (!c.is_object() || !c.contains("pass") || !c.at("pass").is_boolean()) {
      throw JsonFormatError("malformed check entry");
    }
  }
  return j;
}

void series_rows(const std::string& name, const Json& j, std::ostringstream& csv) {
  if (j.contains("series")) {
    const auto series = series_from_json(j.at("series"));
    for (int s = -200; s <= 200; ++s) {
      const double t = 0.05 * s;
      const Complex v = series.eval(t);
      csv << name << ',' << format_double(t) << ',' << format_double(v.real()) << ','
          << format_double(v.imag()) << '\n';
    }
  }
  if (j.contains("sampled_series")) {
    const auto sampled = sampled_series_from_json(j.at("sampled_series"));
    for (std::size_t m = 0; m < sampled.values.size(); ++m) {
      const double t = sampled.t0 + sampled.dt * static_cast<double>(m);
      csv << name << ',' << format_double(t) << ',' << format_double(sampled.values[m].real())
          << ',' << format_double(sampled.values[m].imag()) << '\n';
    }
  }
}

}  // namespace

int report(const std::filesystem::path& dir, std::ostream& out, std::ostream& err) {
  if (!std::filesystem::is_directory(dir)) {
    err << "report: '" << dir.string() << "' is not a directory\n";
    return 3;
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<Row> rows;
  std::ostringstream supports;
  std::ostringstream series;
  supports << "name,omega,weight,order,momentum\n";
  series << "name,t,re,im\n";
  for (const auto& path : files) {
    try {
      const Json j = load_result(path);
      Row row{j.at("name").get<std::string>(), j.at("scenario").get<std::string>(),
              j.at("pass").get<bool>(), 0, j.at("checks").size(),
              j.contains("summary") && j.at("summary").is_string() ? j.at("summary").get<std::string>()
                                                                  : ""};
      for (const auto& c : j.at("checks")) row.checks_passed += c.at("pass").get<bool>() ? 1 : 0;
      if (j.contains("verdict")) {
        for (const auto& p : verdict_from_json(j.at("verdict")).support) {
          supports << row.name << ',' << format_double(p.omega) << ',' << format_double(p.weight)
                   << ',' << p.order << ',' << format_double(p.momentum) << '\n';
        }
      }
      series_rows(row.name, j, series);
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      err << "report: malformed result file '" << path.string() << "': " << e.what() << '\n';
      return 3;
    }
  }

  std::size_t wn = 4, ws = 8;
  for (const auto& r : rows) {
    wn = std::max(wn, r.name.size());
    ws = std::max(ws, r.scenario.size());
  }
  std::ostringstream table;
  table << std::left << std::setw(static_cast<int>(wn)) << "name" << "  " << std::setw(static_cast<int>(ws))
        << "scenario" << "  result  checks  summary\n";
  std::size_t passed = 0;
  for (const auto& r : rows) {
    passed += r.pass ? 1 : 0;
    std::ostringstream counts;
    counts << r.checks_passed << '/' << r.checks_total;
    table << std::left << std::setw(static_cast<int>(wn)) << r.name << "  "
          << std::setw(static_cast<int>(ws)) << r.scenario << "  " << std::setw(6)
          << (r.pass ? "PASS" : "FAIL") << "  " << std::setw(6) << counts.str() << "  " << r.summary
          << '\n';
  }
  table << passed << " of " << rows.size() << " runs passed\n";

  write_file_atomic(dir / "report.txt", table.str());
  write_file_atomic(dir / "supports.csv", supports.str());
  write_file_atomic(dir / "series.csv", series.str());
  out << table.str();
  return 0;
}

}  // namespace tglab::cli
