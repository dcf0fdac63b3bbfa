#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

namespace tglab::cli {

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Summarizes every result JSON in `dir` into report.txt, plus plot-ready
/// supports.csv (name, omega, weight, order, momentum) and series.csv
/// (name, t, re, im). Returns 0, or 3 for a missing directory or a malformed
/// result file.
int report(const std::filesystem::path& dir, std::ostream& out, std::ostream& err);

}  // namespace tglab::cli
