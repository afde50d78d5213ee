#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lancom_cli {

// Entry point shared by the binary and the tests. args excludes the program
// name. Writes human diagnostics to err and file outputs as configured;
// returns the process exit code: 0 success/converged, 2 budget exhausted,
// 1 validation or I/O failure.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Fixed-format double serialization used for every number in JSON and CSV
// output, 17 significant digits.
std::string fmt_double(double x);

}  // namespace lancom_cli
