#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace closedexact::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kParseError = 2, kPreconditionFailed = 3 };

struct RunConfig {
  std::string subcommand;
  std::string field;       ///< file path or built-in name (d0, Y0, X0, d3-d0)
  std::string coeffs;      ///< coefficient field file
  std::string orbit_fn;    ///< orbit function file
  std::string expansion;   ///< Hermite expansion file
  std::optional<int> degree;
  std::optional<int> window;
  std::optional<int> bound;
  std::optional<int> mask;
  std::optional<int> grid;
  std::optional<int> truncate;
  std::optional<int> range;
  std::string schedule;    ///< "default" or "n:M:i[,n:M:i...]"
  std::optional<double> tol;
  std::string emit = "human";
  std::string out;         ///< report destination; stdout when empty
};

/// Runs one subcommand; the report goes to `out` (or the --out file), errors to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace closedexact::cli
