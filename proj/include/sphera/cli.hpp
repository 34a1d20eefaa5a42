#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "sphera/analysis.hpp"

namespace sphera::cli {

inline constexpr const char* kVersion = "sphera 0.1.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,          // bad flags, unparsable numbers, domain errors
  kNumerical = 2,      // non-convergence, no solution, unwritable output
  kVerifyFailed = 3,
};

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs one command line (without the program name). Results go to `out` unless
/// --out names a file; diagnostics and usage text go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest decimal that reads back as the same double.
std::string format_double(double v);

/// `t,v,W_residual,I` header plus one row per curve point.
void emit_curve_csv(const LevelCurve& curve, std::ostream& os);

/// Writes emit_curve_csv output to path atomically; throws OutputError.
void write_curve_csv(const LevelCurve& curve, const std::filesystem::path& path);

/// Writes content to a sibling temp file, then renames it over path; throws OutputError.
void write_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace sphera::cli
