#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dantzig/cli/report.h"

namespace dantzig::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumerical = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string Version();

// Result of one invocation. `report` is set on success (exit code 0);
// `message` holds help text or the error.
struct Outcome {
  int exit_code = kExitOk;
  std::optional<Report> report;
  std::vector<std::string> warnings;
  std::string message;
  std::string out_path;  // --out; empty for stdout
};

// `args` excludes the program name: {"fit", "--input", "a.csv", ...}.
Outcome Execute(const std::vector<std::string>& args);

// Execute, then write the report to --out or `out`, and warnings and errors
// to `err`. Returns the exit code.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace dantzig::cli
