#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace drinf::cli {

/// Runs one command line (args excludes the program name). Returns 0 on
/// success, 2 on a usage error and 1 on a data or numeric error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace drinf::cli
