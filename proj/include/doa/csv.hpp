#pragma once

// Locale-independent number formatting and small file helpers shared by the
// report writers. All emitted CSVs use 9 significant digits, '.' decimal
// separator and LF line endings; files are written atomically
// (temp-then-rename) so a failed command never leaves partial output.

#include <filesystem>
#include <string>
#include <vector>

namespace doa {

// 9 significant digits, shortest general form ("%.9g" without locale).
std::string format9(double v);

// Strict double parse of a full token; throws ConfigError on trailing junk.
double parse_double(const std::string& token);
long long parse_int(const std::string& token);

void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

// Minimal CSV reader for the tool's own outputs: no quoting, comma split.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace doa
