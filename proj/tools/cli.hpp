#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sphereppw::cli {

enum ExitCode { Pass = 0, CheckFailed = 1, UsageError = 2 };

/// Parses "start:stop:count" into count evenly spaced values (endpoints included).
std::vector<double> parse_grid(const std::string& spec);

/// Entry point shared by the executable and the tests. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sphereppw::cli
