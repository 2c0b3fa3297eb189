#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace indep::cli {

/// Runs one command line (program name excluded). Returns the process exit
/// status: 0 when the query was answered, 2 for bad input, 3 for internal
/// errors, or CLI11's code for usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace indep::cli
