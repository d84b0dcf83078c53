#pragma once

// Command-line front end. Reports are JSON on `out`; exit codes are 0 pass,
// 1 assertion or domain failure, 2 usage or I/O error.

#include <ostream>
#include <string>
#include <vector>

namespace geodual {

inline constexpr const char* kToolVersion = "0.1.0";

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geodual
